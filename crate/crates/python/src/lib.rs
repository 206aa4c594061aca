//! Python bindings: the Hilbert matrix and its spectrum, the coefficient
//! γ(β), the residual experiments and kernel evaluation.
//!
//! β crosses the boundary as a Python `complex` (or `float`). Values on the
//! forbidden cut raise `ValueError`; numerical failures raise `SzegoError`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use szego::asymptotics::{self, converge_experiment};
use szego::integrals;
use szego::limit::{beta1_experiment, even_power_experiment};
use szego::matrix::{self, BetaParam, HilbertSpec, SpectralData};
use szego::operator::{self, KernelKind, KernelSpec};
use szego::quadrature::QuadratureConfig;
use szego::report::ConvergenceReport;

create_exception!(
    szego_py,
    SzegoError,
    PyException,
    "Numerical failure inside the szego core."
);

fn numeric<E: std::fmt::Display>(e: E) -> PyErr {
    SzegoError::new_err(e.to_string())
}

fn beta_param(beta: Complex64) -> PyResult<BetaParam> {
    BetaParam::new(beta)
        .allowed()
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

fn quad(order: usize, tol: f64) -> PyResult<QuadratureConfig> {
    let cfg = QuadratureConfig::default().with_order(order).with_tol(tol);
    cfg.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(cfg)
}

fn spec(n: usize, alpha: f64) -> PyResult<HilbertSpec> {
    HilbertSpec::new(n, alpha).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// `H_{N,α}` with entries `1/(j + k + α)`, `j, k = 0..N−1`.
#[pyclass(module = "szego_py", frozen)]
pub struct HilbertMatrix {
    spec: HilbertSpec,
    spectrum: SpectralData,
}

#[pymethods]
impl HilbertMatrix {
    #[new]
    #[pyo3(signature = (n, alpha = 1.0))]
    fn new(n: usize, alpha: f64) -> PyResult<Self> {
        let spec = spec(n, alpha)?;
        Ok(Self {
            spec,
            spectrum: matrix::hilbert_spectrum(spec),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.spec.alpha
    }

    /// Dense entries as a list of rows.
    fn entries(&self) -> Vec<Vec<f64>> {
        let m = matrix::build_hilbert(self.spec);
        m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// Eigenvalues in descending order.
    fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.eigenvalues.clone()
    }

    /// `ln det(I − (β/π)H)`.
    fn logdet(&self, beta: Complex64) -> PyResult<Complex64> {
        matrix::logdet_shifted(&self.spectrum, beta_param(beta)?).map_err(numeric)
    }

    /// `tr H^m`.
    fn trace_power(&self, m: u32) -> f64 {
        matrix::trace_power(&self.spectrum, m)
    }

    fn __repr__(&self) -> String {
        format!("HilbertMatrix(n={}, alpha={})", self.spec.n, self.spec.alpha)
    }
}

/// Rows of a residual experiment with its summary.
#[pyclass(module = "szego_py", frozen)]
pub struct Report {
    inner: ConvergenceReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn sizes(&self) -> Vec<usize> {
        self.inner.rows.iter().map(|r| r.n).collect()
    }

    #[getter]
    fn logdets(&self) -> Vec<Complex64> {
        self.inner.rows.iter().map(|r| r.logdet).collect()
    }

    #[getter]
    fn residuals(&self) -> Vec<Complex64> {
        self.inner.rows.iter().map(|r| r.residual).collect()
    }

    #[getter]
    fn ratios(&self) -> Vec<f64> {
        self.inner.rows.iter().map(|r| r.ratio).collect()
    }

    #[getter]
    fn coefficient(&self) -> Complex64 {
        self.inner.coefficient
    }

    #[getter]
    fn max_abs_residual(&self) -> f64 {
        self.inner.summary.max_abs_residual
    }

    #[getter]
    fn tail_slope(&self) -> f64 {
        self.inner.summary.tail_slope
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv().map_err(numeric)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(numeric)
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }
}

fn spectra(sizes: &[usize], alpha: f64) -> PyResult<Vec<SpectralData>> {
    sizes
        .iter()
        .map(|&n| Ok(matrix::hilbert_spectrum(spec(n, alpha)?)))
        .collect()
}

/// γ(β) in closed form.
#[pyfunction]
fn gamma_closed(beta: Complex64) -> PyResult<Complex64> {
    Ok(asymptotics::gamma_closed(beta_param(beta)?).map_err(numeric)?.value)
}

/// γ(β) from its defining integral.
#[pyfunction]
#[pyo3(signature = (beta, order = 32, tol = 1e-12))]
fn gamma_integral(beta: Complex64, order: usize, tol: f64) -> PyResult<Complex64> {
    let cfg = quad(order, tol)?;
    Ok(asymptotics::gamma_integral(beta_param(beta)?, &cfg)
        .map_err(numeric)?
        .value)
}

/// γ(β) through `arcsin`.
#[pyfunction]
fn gamma_fg(beta: Complex64) -> PyResult<Complex64> {
    Ok(asymptotics::gamma_fg(beta_param(beta)?.value()).value)
}

/// `γ_{2m} = (2/π²)∫₀^∞ ln(1 + sech^{2m} ω) dω`.
#[pyfunction]
fn gamma_even(m: u32) -> PyResult<f64> {
    asymptotics::gamma_even(m, &QuadratureConfig::default()).map_err(numeric)
}

/// `∫_ℝ sech^{2m} x dx`.
#[pyfunction]
fn sech_integral(m: u32) -> PyResult<f64> {
    integrals::i_even(m).map_err(numeric)
}

/// Residuals `ln det(I − (β/π)H_N) − 2n·γ(β)` over `sizes`.
#[pyfunction]
#[pyo3(signature = (beta, sizes, alpha = 1.0))]
fn converge(beta: Complex64, sizes: Vec<usize>, alpha: f64) -> PyResult<Report> {
    let inner = converge_experiment(alpha, beta_param(beta)?, &spectra(&sizes, alpha)?).map_err(numeric)?;
    Ok(Report { inner })
}

/// The β = 1 ratios `ln det(I − H/π)/(2n)`.
#[pyfunction]
#[pyo3(signature = (sizes, alpha = 1.0))]
fn limit(sizes: Vec<usize>, alpha: f64) -> PyResult<Report> {
    let inner = beta1_experiment(alpha, &spectra(&sizes, alpha)?).map_err(numeric)?;
    Ok(Report { inner })
}

/// Residuals of `ln det(I + (H/π)^{2m}) − 2n·γ_{2m}`.
#[pyfunction]
#[pyo3(signature = (m, sizes, alpha = 1.0))]
fn even(m: u32, sizes: Vec<usize>, alpha: f64) -> PyResult<Report> {
    let cfg = QuadratureConfig::default();
    let inner = even_power_experiment(m, alpha, &spectra(&sizes, alpha)?, &cfg).map_err(numeric)?;
    Ok(Report { inner })
}

/// `k(x, y)` for kind in `hankel_g`, `tilde_g`, `dn_remainder`, `carleman`,
/// `cosh`, `a0`.
#[pyfunction]
#[pyo3(signature = (kind, x, y, n = 8, alpha = 1.0, beta = Complex64::new(0.5, 0.0)))]
fn kernel(kind: &str, x: f64, y: f64, n: usize, alpha: f64, beta: Complex64) -> PyResult<Complex64> {
    let kind = match kind {
        "hankel_g" => KernelKind::HankelG { n, alpha },
        "tilde_g" => KernelKind::TildeG { n, alpha },
        "dn_remainder" => KernelKind::DnRemainder { n, alpha },
        "carleman" => KernelKind::Carleman,
        "cosh" => KernelKind::CoshConvolution,
        "a0" => KernelKind::A0Kernel {
            beta: beta_param(beta)?.value(),
        },
        other => return Err(PyValueError::new_err(format!("unknown kernel kind {other:?}"))),
    };
    operator::kernel_eval(&KernelSpec::new(kind), x, y, &QuadratureConfig::default())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Top-`k` eigenvalues of `H`, `G`, `K`, `K₀` and `G̃` realizations for one
/// `(N, α)` at Nyström `order`.
#[pyfunction]
#[pyo3(signature = (n, alpha = 1.0, k = 5, order = 600))]
fn equivalence_lists(n: usize, alpha: f64, k: usize, order: usize) -> PyResult<Vec<Vec<f64>>> {
    operator::equivalence_lists(n, alpha, k, order).map_err(numeric)
}

#[pymodule]
pub fn szego_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SzegoError", m.py().get_type::<SzegoError>())?;
    m.add_class::<HilbertMatrix>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(gamma_closed, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_integral, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_fg, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_even, m)?)?;
    m.add_function(wrap_pyfunction!(sech_integral, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(even, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_lists, m)?)?;
    Ok(())
}
