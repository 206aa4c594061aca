//! The boundary case β = 1.
//!
//! Here the shifted determinant `det(I − H/π)` is reached through traces of
//! powers of `H`. The traces are compared with the odd Hilbert matrix `H_−`.
//! `H_−` is unitarily equivalent, up to a factor 2, to the Carleman operator
//! via the Laguerre functions `l_k(x) = L_k(x)e^{−x/2}`. The cut-off errors are
//! measured with the Christoffel–Darboux kernel `Π_N(x, x) = Σ_{k≤N} l_k(x)²`.
//!
//! The infinite-section traces `tr[P_K H_−^m]` use the Mellin diagonalization
//! of `K`: `K x^{−s} = (π/sin πs)x^{−s}`. On the critical line
//! `s = ½ + iτ` this gives
//! `⟨l_k, K^m l_k⟩ = ∫_ℝ sech(πτ)(π sech πτ)^m |c_k(τ)|² dτ`, where `c_k(τ)`
//! is the `t^k` coefficient of `(1−t)^{s−1}(1+t)^{−s}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{gamma_closed, gamma_even, n_delta, AsymptoticsError};
use crate::integrals::{i_even, i_even_bound, IntegralError};
use crate::matrix::{
    build_hilbert, build_odd_hilbert, eigenpairs, logdet_shifted, matrix_trace_power, trace_power, BetaParam,
    HilbertSpec, MatrixError, SpectralData,
};
use crate::operator::{carleman_trace_power, OperatorError};
use crate::quadrature::{Decay, GaussLegendre, Integrator, QuadratureConfig, QuadratureError};
use crate::report::{ConvergenceReport, ConvergenceRow, ExperimentKind};
use crate::special::ln_factorial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error("{inequality} violated at {witness}")]
    InequalityViolation { inequality: String, witness: String },
    #[error("finite sections of the odd Hilbert matrix are inconsistent: {0}")]
    SectionNotConverged(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, LimitError>;

fn violation(inequality: &str, witness: String) -> LimitError {
    LimitError::InequalityViolation {
        inequality: inequality.to_string(),
        witness,
    }
}

/// `L_n(x)` by `(k+1)L_{k+1} = (2k+1−x)L_k − kL_{k−1}`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    laguerre_all(n, x)[n]
}

/// `L_0(x), …, L_n(x)`.
pub fn laguerre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `l_n(x) = L_n(x)e^{−x/2}`.
pub fn laguerre_function(n: usize, x: f64) -> f64 {
    laguerre(n, x) * (-0.5 * x).exp()
}

/// `L_n(x) = Σ_k C(n,k)(−x)^k/k!`, evaluated term by term. Only accurate
/// where the alternating sum does not cancel, i.e. for small `x`.
pub fn laguerre_series(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= -(n as f64 - kf) * x / ((kf + 1.0) * (kf + 1.0));
        sum += term;
    }
    sum
}

/// `L_n` and `l_n` tabulated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreEval {
    pub n: usize,
    pub grid: Vec<f64>,
    pub polynomial: Vec<f64>,
    pub function: Vec<f64>,
}

impl LaguerreEval {
    pub fn new(n: usize, grid: &[f64]) -> Self {
        let polynomial: Vec<f64> = grid.iter().map(|&x| laguerre(n, x)).collect();
        let function = polynomial
            .iter()
            .zip(grid)
            .map(|(p, &x)| p * (-0.5 * x).exp())
            .collect();
        Self {
            n,
            grid: grid.to_vec(),
            polynomial,
            function,
        }
    }

    /// Max over the grid of the recurrence defect through degree `n`,
    /// relative to the size of its terms.
    pub fn recurrence_residual(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let k = (self.n - 1) as f64;
        self.grid
            .iter()
            .map(|&x| {
                let all = laguerre_all(self.n, x);
                let (a, b, c) = (
                    (k + 1.0) * all[self.n],
                    (2.0 * k + 1.0 - x) * all[self.n - 1],
                    k * all[self.n - 2],
                );
                let scale = a.abs() + b.abs() + c.abs();
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b + c).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `∫₀^∞ l_n(x)² dx`, which is 1.
pub fn laguerre_norm(n: usize, cfg: &QuadratureConfig) -> Result<f64> {
    let integrator = Integrator::new(*cfg)?;
    let cut = 8.0 * n as f64 + 80.0;
    let edges: Vec<f64> = (0..=((cut / 4.0) as usize)).map(|i| 4.0 * i as f64).collect();
    let head = integrator.over_edges(|x: f64| laguerre_function(n, x).powi(2), &edges)?;
    let last = *edges.last().unwrap_or(&0.0);
    let tail = integrator.from(
        |x: f64| laguerre_function(n, x).powi(2),
        last,
        Decay::Exponential { rate: 0.5 },
    )?;
    Ok(head + tail)
}

/// `ln Γ(k+1, x)` for `k = 0..=n` by the upward recurrence
/// `Γ(k+1, x) = kΓ(k, x) + x^k e^{−x}`, which adds positive terms only.
pub fn ln_upper_gamma_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    // Kept in logarithms: Γ(61, 0) = 60! is fine, but x^k e^{−x} is not for large x.
    let mut ln_g = -x;
    out.push(ln_g);
    for k in 1..=n {
        let kf = k as f64;
        let ln_term = if x > 0.0 { kf * x.ln() - x } else { f64::NEG_INFINITY };
        let a = kf.ln() + ln_g;
        let hi = a.max(ln_term);
        ln_g = hi + ((a - hi).exp() + (ln_term - hi).exp()).ln();
        out.push(ln_g);
    }
    out
}

/// `Σ_{k≤n} x^k/k!`.
pub fn exp_partial_sum(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= x / k as f64;
        sum += term;
    }
    sum
}

/// `(e^x/n!)∫_x^∞ t^n e^{−t} dt` from the incomplete-gamma recurrence.
pub fn scaled_upper_gamma(n: usize, x: f64) -> f64 {
    (x + ln_upper_gamma_all(n, x)[n] - ln_factorial(n as u64)).exp()
}

/// `(e^x/n!)∫_x^∞ t^n e^{−t} dt` by quadrature.
pub fn scaled_upper_gamma_quad(n: usize, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let integrator = Integrator::new(*cfg)?;
    let lf = ln_factorial(n as u64);
    let nf = n as f64;
    let f = |t: f64| (nf * t.ln() - t + x - lf).exp();
    let end = x + 2.0 * nf + 60.0;
    let edges: Vec<f64> = (0..=16).map(|i| x + (end - x) * i as f64 / 16.0).collect();
    let head = integrator.over_edges(f, &edges)?;
    let tail = integrator.from(f, end, Decay::Exponential { rate: 0.5 })?;
    Ok(head + tail)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub checks: usize,
    /// Largest `lhs/rhs` seen; at most 1 when the inequality holds.
    pub max_ratio: f64,
    pub tightest: Option<Witness>,
}

impl InequalityReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checks: 0,
            max_ratio: 0.0,
            tightest: None,
        }
    }

    fn record(&mut self, n: usize, x: f64, lhs: f64, rhs: f64) -> Result<()> {
        self.checks += 1;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > self.max_ratio || self.tightest.is_none() {
            self.max_ratio = self.max_ratio.max(ratio);
            self.tightest = Some(Witness { n, x, lhs, rhs });
        }
        if lhs > rhs * (1.0 + 1e-12) {
            return Err(violation(&self.name, format!("n = {n}, x = {x}: {lhs:e} > {rhs:e}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreSuiteReport {
    pub szego: InequalityReport,
    pub lewandowski_szynal: InequalityReport,
    /// Max relative gap between `Σ_{k≤n} x^k/k!` and the incomplete-gamma form.
    pub partial_sum_identity: f64,
    /// Max relative gap between the recurrence and quadrature for the
    /// incomplete gamma function on a few spot points.
    pub quadrature_spot_check: f64,
}

/// `|L_n(x)| ≤ e^{x/2}`, `|L_n(x)| ≤ (e^x/n!)Γ(n+1, x)` and
/// `Σ_{k≤n} x^k/k! = (e^x/n!)Γ(n+1, x)` for all `n ≤ n_max` on the grid.
pub fn laguerre_inequality_suite(n_max: usize, grid: &[f64], cfg: &QuadratureConfig) -> Result<LaguerreSuiteReport> {
    if n_max > 60 {
        return Err(LimitError::InvalidParameter(format!(
            "n_max = {n_max} exceeds 60, beyond which the recurrence is not trusted"
        )));
    }
    if let Some(x) = grid.iter().find(|x| !(**x >= 0.0)) {
        return Err(LimitError::InvalidParameter(format!("grid point {x} is negative")));
    }
    let mut szego = InequalityReport::new("Szegő inequality");
    let mut ls = InequalityReport::new("Lewandowski–Szynal inequality");
    let mut identity: f64 = 0.0;
    for &x in grid {
        let polys = laguerre_all(n_max, x);
        let ln_g = ln_upper_gamma_all(n_max, x);
        for n in 0..=n_max {
            let ig = (x + ln_g[n] - ln_factorial(n as u64)).exp();
            szego.record(n, x, polys[n].abs(), (0.5 * x).exp())?;
            ls.record(n, x, polys[n].abs(), ig)?;
            let ps = exp_partial_sum(n, x);
            identity = identity.max((ps - ig).abs() / ps);
        }
    }
    if identity > 1e-12 {
        return Err(violation("partial-sum identity", format!("relative gap {identity:e}")));
    }
    let mut spot: f64 = 0.0;
    for &(n, x) in &[(0usize, 0.5), (1, 0.0), (5, 2.0), (20, 10.0), (n_max, 30.0)] {
        let q = scaled_upper_gamma_quad(n, x, cfg)?;
        let r = scaled_upper_gamma(n, x);
        spot = spot.max((q - r).abs() / r);
    }
    Ok(LaguerreSuiteReport {
        szego,
        lewandowski_szynal: ls,
        partial_sum_identity: identity,
        quadrature_spot_check: spot,
    })
}

/// `Π_N(x, x) = Σ_{k≤N} l_k(x)²`.
pub fn christoffel_darboux_diagonal(n: usize, x: f64) -> f64 {
    let e = (-x).exp();
    laguerre_all(n, x).iter().map(|l| l * l * e).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdTail {
    pub n: usize,
    pub delta: f64,
    pub l: f64,
    /// `∫₀^δ Π_N(x, x) dx`.
    pub head: f64,
    /// `∫_L^∞ Π_N(x, x) dx`.
    pub tail: f64,
    /// `head + tail = tr[P⊥_{[δ,L]} Π_N]`.
    pub value: f64,
    /// `δ(N+1) + (4/(½ − N/L))·e^{−L/2}L^N/N!`, when `N/L < ½`.
    pub bound: Option<f64>,
}

/// The cut-off bound on `tr[P⊥_{[δ,L]} Π_N]`.
pub fn cd_tail_bound(n: usize, delta: f64, l: f64) -> Option<f64> {
    let nf = n as f64;
    if l.is_infinite() {
        return Some(delta * (nf + 1.0));
    }
    if !(nf / l < 0.5) {
        return None;
    }
    let ln_tail = -l / 2.0 + nf * l.ln() - ln_factorial(n as u64);
    Some(delta * (nf + 1.0) + 4.0 / (0.5 - nf / l) * ln_tail.exp())
}

fn cd_integral_from(n: usize, a: f64, integrator: &Integrator) -> Result<f64> {
    let end = a.max(4.0 * n as f64 + 60.0);
    let mut total = 0.0;
    if end > a {
        let panels = ((end - a) / 8.0).ceil().max(1.0) as usize;
        let edges: Vec<f64> = (0..=panels).map(|i| a + (end - a) * i as f64 / panels as f64).collect();
        total += integrator.over_edges(|x: f64| christoffel_darboux_diagonal(n, x), &edges)?;
    }
    total += integrator.from(
        |x: f64| christoffel_darboux_diagonal(n, x),
        end,
        Decay::Exponential { rate: 0.5 },
    )?;
    Ok(total)
}

/// `tr[P⊥_{[δ,L]} Π_N]` by quadrature, with the cut-off bound.
pub fn cd_tail_trace(n: usize, delta: f64, l: f64, cfg: &QuadratureConfig) -> Result<CdTail> {
    if !(delta >= 0.0) || !(l >= delta) {
        return Err(LimitError::InvalidParameter(format!(
            "need 0 ≤ delta ≤ L, got delta = {delta}, L = {l}"
        )));
    }
    let integrator = Integrator::new(*cfg)?;
    let head = if delta > 0.0 {
        integrator.finite(|x: f64| christoffel_darboux_diagonal(n, x), 0.0, delta)?
    } else {
        0.0
    };
    let tail = if l.is_finite() {
        cd_integral_from(n, l, &integrator)?
    } else {
        0.0
    };
    let value = head + tail;
    let bound = cd_tail_bound(n, delta, l);
    if let Some(b) = bound {
        if value > b * (1.0 + 1e-10) {
            return Err(violation(
                "Christoffel–Darboux cut-off bound",
                format!("N = {n}, delta = {delta}, L = {l}: {value:e} > {b:e}"),
            ));
        }
    }
    Ok(CdTail {
        n,
        delta,
        l,
        head,
        tail,
        value,
        bound,
    })
}

/// `∫₀^∞ Π_N(x, x) dx = N + 1`.
pub fn cd_total_mass(n: usize, cfg: &QuadratureConfig) -> Result<f64> {
    let integrator = Integrator::new(*cfg)?;
    cd_integral_from(n, 0.0, &integrator)
}

/// `Σ_{k<count} |c_k(τ)|²` with `c_k` the Taylor coefficients of
/// `(1−t)^{s−1}(1+t)^{−s}`, `s = ½ + iτ`.
fn mellin_coefficient_mass(count: usize, tau: f64) -> f64 {
    let s = Complex64::new(0.5, tau);
    let a = s - 1.0;
    let mut c = Vec::with_capacity(count);
    let mut d = Vec::with_capacity(count);
    let (mut cj, mut dj) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for j in 0..count {
        c.push(cj);
        d.push(dj);
        let jf = j as f64;
        cj *= (jf - a) / (jf + 1.0);
        dj *= -(jf + s) / (jf + 1.0);
    }
    (0..count)
        .map(|k| {
            let e: Complex64 = (0..=k).map(|j| c[j] * d[k - j]).sum();
            e.norm_sqr()
        })
        .sum()
}

/// `Σ_{k<count} ⟨l_k, K^m l_k⟩ = 2^m tr[P_count H_−^m]` through the Mellin
/// diagonalization of the Carleman operator.
pub fn odd_hilbert_trace_mellin(count: usize, m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    if m == 0 {
        return Ok(count as f64);
    }
    let integrator = Integrator::new(*cfg)?;
    let half = integrator.semi_infinite(
        |tau: f64| {
            let sech = 1.0 / (PI * tau).cosh();
            sech * (PI * sech).powi(m as i32) * mellin_coefficient_mass(count, tau)
        },
        Decay::Exponential { rate: PI * m as f64 },
    )?;
    Ok(2.0 * half)
}

/// `Σ_{j<count} ((H_−^{(size)})^m)_{jj}` for the `size × size` section.
pub fn odd_hilbert_section_trace(size: usize, count: usize, m: u32) -> Result<f64> {
    let (spec, vectors) = eigenpairs(&build_odd_hilbert(size))?;
    let mut total = 0.0;
    for (i, &l) in spec.eigenvalues.iter().enumerate() {
        let lm = l.powi(m as i32);
        for j in 0..count.min(size) {
            total += vectors[(j, i)] * vectors[(j, i)] * lm;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddChainReport {
    pub n: usize,
    pub alpha: f64,
    pub m: u32,
    /// `tr[H_{N,α}^m]`.
    pub left: f64,
    /// `2^m tr[(P_{2N}H_−)^m]`.
    pub middle: f64,
    /// `2^m tr[P_{2N}H_−^m]`.
    pub right: f64,
    /// `(size, 2^m Σ_{j<2N}((H_−^{(size)})^m)_{jj})`: lower bounds on `right`.
    pub sections: Vec<(usize, f64)>,
}

/// `tr[H_{N,α}^m] ≤ 2^m tr[(P_{2N}H_−)^m] ≤ 2^m tr[P_{2N}H_−^m]`.
///
/// The right-most trace needs the infinite matrix. Finite sections approach
/// it only like `size^{−1/2}`, so it is computed by the Mellin route instead.
/// The sections at `4N` and `8N` serve as increasing lower bounds. An
/// inconsistency between the two routes, or a Mellin value that moves under
/// tolerance refinement, is reported as `SectionNotConverged`.
pub fn odd_hilbert_chain(n: usize, alpha: f64, m: u32, cfg: &QuadratureConfig) -> Result<OddChainReport> {
    if n == 0 || n > 128 || m == 0 || m > 8 {
        return Err(LimitError::InvalidParameter(format!(
            "need 1 ≤ N ≤ 128 and 1 ≤ m ≤ 8, got N = {n}, m = {m}"
        )));
    }
    let spec = HilbertSpec::new(n, alpha)?;
    let left = matrix_trace_power(&build_hilbert(spec), m);
    let scale = 2f64.powi(m as i32);
    let middle = scale * matrix_trace_power(&build_odd_hilbert(2 * n), m);
    let coarse = QuadratureConfig {
        abs_tol: cfg.abs_tol.max(1e-12),
        rel_tol: cfg.rel_tol.max(1e-12),
        ..*cfg
    };
    let fine = QuadratureConfig {
        abs_tol: coarse.abs_tol / 10.0,
        rel_tol: coarse.rel_tol / 10.0,
        ..coarse
    };
    let right = odd_hilbert_trace_mellin(2 * n, m, &fine)?;
    let check = odd_hilbert_trace_mellin(2 * n, m, &coarse)?;
    if (right - check).abs() > 1e-8 * right {
        return Err(LimitError::SectionNotConverged(format!(
            "Mellin trace moves from {check} to {right} under refinement"
        )));
    }
    let mut sections = Vec::new();
    let mut prev = middle;
    for size in [4 * n, 8 * n] {
        let t = scale * odd_hilbert_section_trace(size, 2 * n, m)?;
        if t < prev * (1.0 - 1e-12) || t > right * (1.0 + 1e-10) {
            return Err(LimitError::SectionNotConverged(format!(
                "section {size} gives {t}, outside [{prev}, {right}]"
            )));
        }
        sections.push((size, t));
        prev = t;
    }
    let report = OddChainReport {
        n,
        alpha,
        m,
        left,
        middle,
        right,
        sections,
    };
    if left > middle * (1.0 + 1e-12) {
        return Err(violation(
            "odd Hilbert comparison",
            format!("N = {n}, m = {m}: {left} > {middle}"),
        ));
    }
    if middle > right * (1.0 + 1e-10) {
        return Err(violation(
            "section trace bound",
            format!("N = {n}, m = {m}: {middle} > {right}"),
        ));
    }
    Ok(report)
}

/// `∫₀^∞∫₀^∞ l_j(x)(x+y)^{−1}l_k(y) dy dx`, which equals `2h_{j+k}`.
///
/// With `x = ru`, `y = r(1−u)` the Carleman singularity cancels against the
/// Jacobian, leaving `∫₀^∞ e^{−r/2}∫₀¹ L_j(ru)L_k(r(1−u)) du dr`. The inner
/// integrand is a polynomial, integrated exactly by Gauss–Legendre.
pub fn carleman_matrix_elements(j: usize, k: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if j > 12 || k > 12 {
        return Err(LimitError::InvalidParameter(
            "indices above 12 are not supported".into(),
        ));
    }
    let rule = GaussLegendre::new((j + k) / 2 + 2);
    let (us, ws): (Vec<f64>, Vec<f64>) = rule.on(0.0, 1.0).unzip();
    let inner = |r: f64| -> f64 {
        let s: f64 = us
            .iter()
            .zip(&ws)
            .map(|(&u, &w)| w * laguerre(j, r * u) * laguerre(k, r * (1.0 - u)))
            .sum();
        (-0.5 * r).exp() * s
    };
    let integrator = Integrator::new(*cfg)?;
    let end = 8.0 * (j + k) as f64 + 100.0;
    let edges: Vec<f64> = (0..=20).map(|i| end * i as f64 / 20.0).collect();
    let head = integrator.over_edges(inner, &edges)?;
    let tail = integrator.from(inner, end, Decay::Exponential { rate: 0.25 })?;
    Ok(head + tail)
}

/// `h_j` of the odd Hilbert matrix.
pub fn odd_hilbert_entry(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0 / (j as f64 + 1.0)
    } else {
        0.0
    }
}

/// `ln(y/sinh y)`, accurate for small and large `y`.
fn ln_y_over_sinh(y: f64) -> f64 {
    if y < 1e-4 {
        -y * y / 6.0
    } else if y < 20.0 {
        (y / y.sinh()).ln()
    } else {
        y.ln() - y + std::f64::consts::LN_2 - (-2.0 * y).exp().ln_1p()
    }
}

/// `y/sinh y ≤ 2^δ e^{−δy}` on a grid, compared in logarithms.
pub fn sinh_inequality_check(delta_grid: &[f64], y_grid: &[f64]) -> Result<InequalityReport> {
    let mut report = InequalityReport::new("sinh inequality");
    for &d in delta_grid {
        if !(0.0..=1.0 / 3.0).contains(&d) {
            return Err(LimitError::InvalidParameter(format!("delta = {d} outside [0, 1/3]")));
        }
        for &y in y_grid {
            if !(y > 0.0) {
                return Err(LimitError::InvalidParameter(format!("y = {y} must be positive")));
            }
            let lhs = ln_y_over_sinh(y);
            let rhs = d * std::f64::consts::LN_2 - d * y;
            report.checks += 1;
            let gap = lhs - rhs;
            if report.tightest.is_none() || gap > report.max_ratio.ln() {
                report.max_ratio = gap.exp();
                report.tightest = Some(Witness {
                    n: 0,
                    x: y,
                    lhs: lhs.exp(),
                    rhs: rhs.exp(),
                });
            }
            if gap > 1e-13 * rhs.abs().max(1.0) {
                return Err(violation(
                    "sinh inequality",
                    format!("delta = {d}, y = {y}: gap {gap:e}"),
                ));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceChainReport {
    pub n: usize,
    pub k: u32,
    pub delta: f64,
    /// `tr[H_{N,1}^{2k}]/π^{2k}` from the spectrum.
    pub trace: f64,
    /// The same from the explicit matrix power.
    pub trace_matrix: f64,
    /// `(2n_δ(N)/π²)·2^{2kδ}·I_{2k}`.
    pub bound: f64,
    /// `(16/π²)n_{1/k}(N)/√(k−1)`, for `k ≥ 2`.
    pub crude_bound: Option<f64>,
}

/// `tr[H_{N,1}^{2k}]/π^{2k} ≤ (2n_δ(N)/π²)·2^{2kδ}·I_{2k}` with `δ = 1/k`.
pub fn trace_chain_alpha1(n: usize, k: u32, cfg: &QuadratureConfig) -> Result<TraceChainReport> {
    if k == 0 {
        return Err(LimitError::InvalidParameter("k must be positive".into()));
    }
    let spec = HilbertSpec::new(n, 1.0)?;
    let m = 2 * k;
    let pm = PI.powi(m as i32);
    let trace = trace_power(&crate::matrix::hilbert_spectrum(spec), m) / pm;
    let trace_matrix = matrix_trace_power(&build_hilbert(spec), m) / pm;
    let delta = 1.0 / k as f64;
    let carleman = carleman_trace_power(delta, n as f64, m, cfg)?;
    let bound = 2f64.powf(m as f64 * delta) * carleman / pm;
    let nd = n_delta(n as f64, delta)?;
    let crude_bound = (k >= 2).then(|| 16.0 / (PI * PI) * nd / ((k - 1) as f64).sqrt());
    if trace > bound * (1.0 + 1e-12) {
        return Err(violation(
            "Carleman trace comparison",
            format!("N = {n}, k = {k}: {trace} > {bound}"),
        ));
    }
    if let Some(c) = crude_bound {
        if bound > c * (1.0 + 1e-12) {
            return Err(violation(
                "sech-power estimate",
                format!("N = {n}, k = {k}: {bound} > {c}"),
            ));
        }
    }
    Ok(TraceChainReport {
        n,
        k,
        delta,
        trace,
        trace_matrix,
        bound,
        crude_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTraceBound {
    pub n: usize,
    pub alpha: f64,
    pub m: u32,
    pub delta: f64,
    pub l: f64,
    /// `tr[H_{N,α}^{2^m}]/π^{2^m}`.
    pub trace: f64,
    /// `(4/π²)n_δ(L−δ)I_{2^m}`.
    pub carleman_term: f64,
    /// `2 tr[P⊥_{[δ,L]}Π_{2N}]` by quadrature.
    pub cut_off_measured: f64,
    /// `2(δ(2N+1) + (4/(½ − 2N/L))L^{2N}e^{−L/2}/(2N)!)`.
    pub cut_off_bound: f64,
    /// `carleman_term + cut_off_bound`.
    pub bound: f64,
}

/// The trace bound for `H_{N,α}^{2^m}`, `m ≥ 5`, assembled from its explicit
/// ingredients with `δ = 1/((2N+1)m²)` and `L = mN`.
pub fn power_trace_bound(n: usize, alpha: f64, m: u32, cfg: &QuadratureConfig) -> Result<PowerTraceBound> {
    if !(5..=30).contains(&m) {
        return Err(LimitError::InvalidParameter(format!("need 5 ≤ m ≤ 30, got {m}")));
    }
    let spec = HilbertSpec::new(n, alpha)?;
    let p = 1u32 << m;
    let spectrum = crate::matrix::hilbert_spectrum(spec);
    let trace: f64 = spectrum.eigenvalues.iter().map(|l| (l / PI).powi(p as i32)).sum();
    let nf = n as f64;
    let mf = m as f64;
    let delta = 1.0 / ((2.0 * nf + 1.0) * mf * mf);
    let l = mf * nf;
    let carleman_term = 4.0 / (PI * PI) * n_delta(l - delta, delta)? * i_even(p / 2)?;
    let cut = cd_tail_trace(2 * n, delta, l, cfg)?;
    let cut_off_bound = 2.0
        * cut
            .bound
            .ok_or_else(|| LimitError::InvalidParameter("2N/L ≥ 1/2".into()))?;
    let bound = carleman_term + cut_off_bound;
    if trace > carleman_term + 2.0 * cut.value {
        return Err(violation(
            "trace decomposition",
            format!("N = {n}, m = {m}: {trace:e} > {:e}", carleman_term + 2.0 * cut.value),
        ));
    }
    Ok(PowerTraceBound {
        n,
        alpha,
        m,
        delta,
        l,
        trace,
        carleman_term,
        cut_off_measured: 2.0 * cut.value,
        cut_off_bound,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub m: u32,
    pub delta: f64,
    pub l: f64,
    /// `2^m tr[P_N H_−^m]`.
    pub lhs: f64,
    /// `tr[P_{[δ,L]}K^m]`.
    pub carleman: f64,
    /// `tr[P⊥_{[δ,L]}Π]` for the rank-N Christoffel–Darboux projection.
    pub cut_off: f64,
    /// `2·carleman + (1+π^m)·cut_off`.
    pub rhs: f64,
}

/// `2^m tr[P_N H_−^m] ≤ 2 tr[P_{[δ,L]}K^m] + (1+π^m) tr[P⊥_{[δ,L]}Π]`.
pub fn decomposition_check(
    n: usize,
    m: u32,
    delta: f64,
    l: f64,
    cfg: &QuadratureConfig,
) -> Result<DecompositionReport> {
    if n == 0 || m == 0 || !(delta > 0.0) || !(l > delta) {
        return Err(LimitError::InvalidParameter("need N, m ≥ 1 and 0 < delta < L".into()));
    }
    let lhs = odd_hilbert_trace_mellin(n, m, cfg)?;
    let carleman = carleman_trace_power(delta, l - delta, m, cfg)?;
    let cut_off = cd_tail_trace(n - 1, delta, l, cfg)?.value;
    let rhs = 2.0 * carleman + (1.0 + PI.powi(m as i32)) * cut_off;
    if lhs > rhs {
        return Err(violation(
            "cut-off decomposition",
            format!("N = {n}, m = {m}, delta = {delta}, L = {l}: {lhs} > {rhs}"),
        ));
    }
    Ok(DecompositionReport {
        n,
        m,
        delta,
        l,
        lhs,
        carleman,
        cut_off,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicBound {
    /// `−ln det(I − A)`.
    pub lhs: f64,
    /// `Σ_{m≤M} ln det(I + A^{2^m}) + Σ_{m>M} tr A^{2^m}`.
    pub rhs: f64,
}

/// The dyadic product bound for `A = H/π` from its spectrum.
pub fn dyadic_product_bound(spectrum: &SpectralData, big_m: u32) -> Result<DyadicBound> {
    let a: Vec<f64> = spectrum.eigenvalues.iter().map(|l| l / PI).collect();
    if let Some(x) = a.iter().find(|x| **x >= 1.0) {
        return Err(LimitError::InvalidParameter(format!(
            "eigenvalue {x} of A is not below 1"
        )));
    }
    let lhs: f64 = -a.iter().map(|x| (-x).ln_1p()).sum::<f64>();
    let mut rhs = 0.0;
    for &x in &a {
        let mut p = x;
        for _ in 0..=big_m {
            rhs += p.ln_1p();
            p *= p;
        }
        while p > 1e-300 {
            rhs += p;
            p *= p;
        }
    }
    if lhs > rhs * (1.0 + 1e-12) {
        return Err(violation("dyadic product bound", format!("M = {big_m}: {lhs} > {rhs}")));
    }
    Ok(DyadicBound { lhs, rhs })
}

/// `ln det(I − (β/π)H)` is nonincreasing in real `β ∈ [0, 1]`.
pub fn beta_monotonicity(spectrum: &SpectralData, betas: &[f64]) -> Result<Vec<f64>> {
    let mut sorted = betas.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::with_capacity(sorted.len());
    for &b in &sorted {
        if !(0.0..=1.0).contains(&b) {
            return Err(LimitError::InvalidParameter(format!("beta = {b} outside [0, 1]")));
        }
        let v = logdet_shifted(spectrum, BetaParam::real(b))?.re;
        if let Some(&prev) = out.last() {
            if v > prev {
                return Err(violation(
                    "determinant monotonicity",
                    format!("beta = {b}: {v} > {prev}"),
                ));
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Exponent `M` of the dyadic lower bound reported by [`beta1_experiment`].
pub const BETA1_DYADIC_M: u32 = 4;
/// Comparison point `β′ < 1` of the upper bound reported by [`beta1_experiment`].
pub const BETA1_UPPER_BETA: f64 = 0.99;

/// `ln det(I − H_{N,α}/π)` and `ratio = logdet/(2n_{α/2}(N))` across the
/// spectra. Each row carries two finite-N bounds on the ratio. The lower
/// bound is `−[Σ_{m≤4} ln det(I + A^{2^m}) + Σ_{m>4} tr A^{2^m}]/(2n)` from
/// the dyadic product. The upper bound is the same ratio at `β′ = 0.99`,
/// from monotonicity in β.
pub fn beta1_experiment(alpha: f64, spectra: &[SpectralData]) -> Result<ConvergenceReport> {
    let gamma = gamma_closed(BetaParam::real(1.0))?.value;
    let rows = spectra
        .iter()
        .map(|s| {
            let spec = s
                .source
                .ok_or_else(|| LimitError::InvalidParameter("spectrum without source".into()))?;
            if (spec.alpha - alpha).abs() > 0.0 {
                return Err(LimitError::InvalidParameter("spectrum has a different alpha".into()));
            }
            if s.max() >= PI {
                return Err(violation("norm bound", format!("N = {}: λ_max = {}", spec.n, s.max())));
            }
            let scale = n_delta(spec.n as f64, alpha / 2.0)?;
            let logdet = logdet_shifted(s, BetaParam::real(1.0))?;
            let dy = dyadic_product_bound(s, BETA1_DYADIC_M)?;
            let upper = logdet_shifted(s, BetaParam::real(BETA1_UPPER_BETA))?.re / (2.0 * scale);
            let ratio = logdet.re / (2.0 * scale);
            Ok(ConvergenceRow {
                n: spec.n,
                scale,
                logdet,
                residual: logdet - 2.0 * scale * gamma,
                ratio,
                lower: Some(-dy.rhs / (2.0 * scale)),
                upper: Some(upper),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new(
        ExperimentKind::Limit,
        alpha,
        Some(Complex64::new(1.0, 0.0)),
        None,
        gamma,
        rows,
    ))
}

/// `ln det(I + (H/π)^{2m}) − 2n_{α/2}(N)γ_{2m}` across the spectra.
pub fn even_power_experiment(
    m: u32,
    alpha: f64,
    spectra: &[SpectralData],
    cfg: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if m == 0 {
        return Err(LimitError::InvalidParameter("m must be positive".into()));
    }
    let gamma = gamma_even(m, cfg)?;
    let rows = spectra
        .iter()
        .map(|s| {
            let spec = s
                .source
                .ok_or_else(|| LimitError::InvalidParameter("spectrum without source".into()))?;
            let scale = n_delta(spec.n as f64, alpha / 2.0)?;
            let logdet: f64 = s.eigenvalues.iter().map(|l| (l / PI).powi(2 * m as i32).ln_1p()).sum();
            if logdet < 0.0 {
                return Err(violation("determinant ≥ 1", format!("N = {}: {logdet}", spec.n)));
            }
            Ok(ConvergenceRow {
                n: spec.n,
                scale,
                logdet: Complex64::new(logdet, 0.0),
                residual: Complex64::new(logdet - 2.0 * scale * gamma, 0.0),
                ratio: logdet / (2.0 * scale),
                lower: None,
                upper: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new(
        ExperimentKind::Even,
        alpha,
        None,
        Some(m),
        Complex64::new(gamma, 0.0),
        rows,
    ))
}

/// `I_{2k+2} ≤ 2/√k`, used by the α = 1 chain.
pub fn sech_power_bound_holds(k: u32) -> Result<bool> {
    Ok(i_even(k + 1)? <= i_even_bound(k))
}

/// The determinant `det(I + (H/π)^{2m})` from an explicit matrix, for
/// spectral-mapping checks.
pub fn even_power_det_dense(h: &DMatrix<f64>, m: u32) -> f64 {
    let a = h / PI;
    let mut p = a.clone();
    for _ in 1..(2 * m) {
        p = &p * &a;
    }
    let n = h.nrows();
    (DMatrix::<f64>::identity(n, n) + p).determinant()
}
