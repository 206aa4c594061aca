//! Integral operators on the half-line and the line, and their Nyström
//! realizations.
//!
//! The Hankel kernels are functions of `t = x + y`:
//! `G(t) = Σ_{j<N} e^{−t(j+α/2)}`, its integral version
//! `G̃(t) = ∫₀^N e^{−t(s+α/2)} ds` and the difference `D_N = G − G̃`.
//! `K(x, y) = 1/(x+y)` is the Carleman kernel and `K₀(s) = sech s` its image
//! under the exponential change of variables `W_a`.
//!
//! The nonzero spectra of `H_{N,α}` and `G` coincide, and so do those of
//! `G̃`, `K` on `[α/2, N+α/2]` and `K₀` on `[−n, n]`; the two groups differ
//! by the remainder `D_N`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{a0_hat_norms, n_delta, AsymptoticsError};
use crate::integrals::{i_even, i_power_quad, IntegralError};
use crate::matrix::{
    build_hilbert, eigens, hilbert_spectrum, logdet_shifted, resolvent_bound, BetaError, BetaParam, HilbertSpec,
    MatrixError, SpectralData,
};
use crate::quadrature::{Decay, GaussLegendre, Integrator, QuadratureConfig, QuadratureError};
use crate::special::e1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("kernel evaluated outside its domain at ({x}, {y})")]
    DomainViolation { x: f64, y: f64 },
    #[error("bad Nyström domain [{a}, {b}]: {reason}")]
    BadDomain { a: f64, b: f64, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, OperatorError>;

/// Below this argument the Hankel kernels switch to their Taylor expansions.
const SERIES_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    HankelG { n: usize, alpha: f64 },
    TildeG { n: usize, alpha: f64 },
    DnRemainder { n: usize, alpha: f64 },
    Carleman,
    CoshConvolution,
    A0Kernel { beta: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    HalfLine,
    Line,
    Interval { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub domain: Domain,
}

impl KernelSpec {
    pub fn new(kind: KernelKind) -> Self {
        let domain = match kind {
            KernelKind::CoshConvolution | KernelKind::A0Kernel { .. } => Domain::Line,
            _ => Domain::HalfLine,
        };
        Self { kind, domain }
    }

    pub fn on(kind: KernelKind, a: f64, b: f64) -> Self {
        Self {
            kind,
            domain: Domain::Interval { a, b },
        }
    }

    pub fn is_hankel(&self) -> bool {
        matches!(
            self.kind,
            KernelKind::HankelG { .. } | KernelKind::TildeG { .. } | KernelKind::DnRemainder { .. }
        )
    }

    /// Default finite domain for a Nyström realization.
    pub fn default_interval(&self) -> (f64, f64) {
        match (self.domain, self.kind) {
            (Domain::Interval { a, b }, _) => (a, b),
            (_, KernelKind::HankelG { alpha, .. })
            | (_, KernelKind::TildeG { alpha, .. })
            | (_, KernelKind::DnRemainder { alpha, .. }) => (0.0, 40.0 / alpha),
            (_, KernelKind::Carleman) => (0.5, 8.5),
            (_, _) => (-1.0, 1.0),
        }
    }
}

fn expm1_neg(t: f64) -> f64 {
    -(-t).exp_m1()
}

/// `t/(1 − e^{−t})`, with its Bernoulli series for small `t`.
fn bernoulli_ratio(t: f64) -> f64 {
    if t < 0.1 {
        let t2 = t * t;
        1.0 + t / 2.0 + t2 / 12.0 - t2 * t2 / 720.0 + t2 * t2 * t2 / 30240.0
    } else {
        t / expm1_neg(t)
    }
}

/// `G(t) = e^{−αt/2}(1 − e^{−Nt})/(1 − e^{−t})`.
pub fn hankel_g(n: usize, alpha: f64, t: f64) -> f64 {
    let nf = n as f64;
    if t < SERIES_CUTOFF {
        return nf - t * (alpha * nf / 2.0 + nf * (nf - 1.0) / 2.0);
    }
    (-alpha * t / 2.0).exp() * expm1_neg(nf * t) / expm1_neg(t)
}

/// `G̃(t) = e^{−αt/2}(1 − e^{−Nt})/t`.
pub fn tilde_g(n: usize, alpha: f64, t: f64) -> f64 {
    let nf = n as f64;
    if t < SERIES_CUTOFF {
        return nf - t * (alpha * nf / 2.0 + nf * nf / 2.0);
    }
    (-alpha * t / 2.0).exp() * expm1_neg(nf * t) / t
}

/// `D_N(t) = [t/(1 − e^{−t}) − 1]·G̃(t)`.
pub fn dn_remainder(n: usize, alpha: f64, t: f64) -> f64 {
    let nf = n as f64;
    if t < SERIES_CUTOFF {
        return t * nf / 2.0;
    }
    let bracket = if t < 0.1 {
        let t2 = t * t;
        t / 2.0 + t2 / 12.0 - t2 * t2 / 720.0 + t2 * t2 * t2 / 30240.0
    } else {
        bernoulli_ratio(t) - 1.0
    };
    bracket * tilde_g(n, alpha, t)
}

/// Derivative `D_N′(t)` by the quotient rule on the closed forms.
pub fn dn_remainder_derivative(n: usize, alpha: f64, t: f64) -> f64 {
    // G(t) = Σ e^{−t(j+α/2)} and G̃(t) = ∫₀^N e^{−t(s+α/2)} ds, so both
    // derivatives are first moments.
    let nf = n as f64;
    let g1: f64 = (0..n)
        .map(|j| -(j as f64 + alpha / 2.0) * (-(j as f64 + alpha / 2.0) * t).exp())
        .sum();
    let gt1 = if t < SERIES_CUTOFF {
        -(alpha * nf / 2.0 + nf * nf / 2.0)
    } else {
        // d/dt [e^{−αt/2}(1 − e^{−Nt})/t]
        let e = (-alpha * t / 2.0).exp();
        let f = expm1_neg(nf * t);
        let df = nf * (-nf * t).exp();
        e * (-alpha / 2.0 * f / t + df / t - f / (t * t))
    };
    g1 - gt1
}

/// Value of a kernel at `(x, y)`.
pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if let KernelKind::A0Kernel { beta } = spec.kind {
        let v = crate::asymptotics::a0_kernel(x - y, BetaParam::new(beta), cfg)?;
        return Ok(v);
    }
    Ok(Complex64::new(kernel_eval_real(spec, x, y)?, 0.0))
}

/// Value of a real kernel at `(x, y)`.
pub fn kernel_eval_real(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    let half_line = !matches!(spec.kind, KernelKind::CoshConvolution | KernelKind::A0Kernel { .. });
    if half_line && (x < 0.0 || y < 0.0 || !x.is_finite() || !y.is_finite()) {
        return Err(OperatorError::DomainViolation { x, y });
    }
    let t = x + y;
    match spec.kind {
        KernelKind::HankelG { n, alpha } => Ok(hankel_g(n, alpha, t)),
        KernelKind::TildeG { n, alpha } => Ok(tilde_g(n, alpha, t)),
        KernelKind::DnRemainder { n, alpha } => Ok(dn_remainder(n, alpha, t)),
        KernelKind::Carleman => {
            if t <= 0.0 {
                Err(OperatorError::DomainViolation { x, y })
            } else {
                Ok(1.0 / t)
            }
        }
        KernelKind::CoshConvolution => Ok(1.0 / (x - y).cosh()),
        KernelKind::A0Kernel { .. } => Err(OperatorError::InvalidParameter(
            "A0 kernel is complex-valued; use kernel_eval".into(),
        )),
    }
}

/// Quadrature nodes, weights and the symmetrized matrix
/// `√w_i·k(x_i, x_j)·√w_j` of a truncated integral operator.
#[derive(Debug, Clone, PartialEq)]
pub struct NystromOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl NystromOperator {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spectrum(&self) -> Result<SpectralData> {
        Ok(eigens(&self.matrix)?)
    }

    /// Largest `k` eigenvalues.
    pub fn top(&self, k: usize) -> Result<Vec<f64>> {
        let mut s = self.spectrum()?.eigenvalues;
        s.truncate(k);
        Ok(s)
    }
}

/// Panel edges adapted to the kernel: graded toward `0` for Hankel kernels
/// (whose scale there is `1/N`), geometric for the Carleman kernel, uniform
/// otherwise.
fn panel_edges(spec: &KernelSpec, a: f64, b: f64) -> Vec<f64> {
    let mut edges = vec![a];
    match spec.kind {
        KernelKind::HankelG { n, .. } | KernelKind::TildeG { n, .. } | KernelKind::DnRemainder { n, .. } => {
            let mut h = 1.0 / (4.0 * n.max(1) as f64);
            let mut x = a;
            while h < 1.0 && x + h < b {
                x += h;
                edges.push(x);
                h *= 2.0;
            }
            while x + 1.0 < b {
                x += 1.0;
                edges.push(x);
            }
        }
        KernelKind::Carleman => {
            let panels = ((b / a).ln() / 1.5f64.ln()).ceil().max(1.0) as usize;
            let ratio = (b / a).powf(1.0 / panels as f64);
            for i in 1..panels {
                edges.push(a * ratio.powi(i as i32));
            }
        }
        KernelKind::CoshConvolution | KernelKind::A0Kernel { .. } => {
            let panels = (b - a).ceil().max(1.0) as usize;
            for i in 1..panels {
                edges.push(a + (b - a) * i as f64 / panels as f64);
            }
        }
    }
    edges.push(b);
    edges
}

/// Nyström realization with about `order` nodes in total on `[a, b]`: the
/// kernel-adapted panels each receive `⌈order / panels⌉` Gauss–Legendre
/// nodes, so doubling `order` doubles the per-panel degree.
pub fn nystrom_build(spec: &KernelSpec, a: f64, b: f64, order: usize) -> Result<NystromOperator> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(OperatorError::BadDomain {
            a,
            b,
            reason: "need finite a < b".into(),
        });
    }
    let half_line = !matches!(spec.kind, KernelKind::CoshConvolution | KernelKind::A0Kernel { .. });
    if half_line && a < 0.0 {
        return Err(OperatorError::BadDomain {
            a,
            b,
            reason: "half-line kernel needs a ≥ 0".into(),
        });
    }
    if matches!(spec.kind, KernelKind::Carleman) && a <= 0.0 {
        return Err(OperatorError::BadDomain {
            a,
            b,
            reason: "Carleman realization needs a > 0".into(),
        });
    }
    if let KernelKind::A0Kernel { beta } = spec.kind {
        if beta.im != 0.0 {
            return Err(OperatorError::InvalidParameter(
                "Nyström realization of A0 needs real β".into(),
            ));
        }
    }
    if order < 2 {
        return Err(OperatorError::InvalidParameter("order must be at least 2".into()));
    }
    let edges = panel_edges(spec, a, b);
    let per_panel = order.div_ceil(edges.len() - 1).max(2);
    let rule = GaussLegendre::new(per_panel);
    let (nodes, weights) = rule.composite(&edges);
    let roots: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let n = nodes.len();
    let mut matrix = DMatrix::zeros(n, n);
    match spec.kind {
        KernelKind::A0Kernel { beta } => {
            let profile = A0Profile::new(beta, b - a)?;
            for i in 0..n {
                for j in 0..=i {
                    let v = roots[i] * profile.eval(nodes[i] - nodes[j]).re * roots[j];
                    matrix[(i, j)] = v;
                    matrix[(j, i)] = v;
                }
            }
        }
        _ => {
            for i in 0..n {
                for j in 0..=i {
                    let v = roots[i] * kernel_eval_real(spec, nodes[i], nodes[j])? * roots[j];
                    matrix[(i, j)] = v;
                    matrix[(j, i)] = v;
                }
            }
        }
    }
    Ok(NystromOperator { nodes, weights, matrix })
}

/// `ln det(I − c·M)` from the eigenvalues of the symmetrized matrix.
pub fn fredholm_logdet(op: &NystromOperator, c: Complex64) -> Result<Complex64> {
    let spec = op.spectrum()?;
    Ok(spec
        .eigenvalues
        .iter()
        .map(|&l| (Complex64::new(1.0, 0.0) - c * l).ln())
        .sum())
}

/// `det(I − c·M)`.
pub fn fredholm_det(op: &NystromOperator, c: Complex64) -> Result<Complex64> {
    Ok(fredholm_logdet(op, c)?.exp())
}

/// Top-k eigenvalue lists of the realizations of one `(N, α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub alpha: f64,
    pub k: usize,
    pub order: usize,
    /// `H`, `G`, `K`, `K0`, `Gtilde`, in that order.
    pub names: Vec<String>,
    pub top: Vec<Vec<f64>>,
    pub top_refined: Vec<Vec<f64>>,
    /// `deviation[i][j]`: max relative top-k gap between lists `i` and `j` at
    /// `order`.
    pub deviation: Vec<Vec<f64>>,
    /// Same at `2·order`.
    pub deviation_refined: Vec<Vec<f64>>,
    /// Max relative change of each list between `order` and `2·order`.
    pub refinement_change: Vec<f64>,
}

pub const EQUIVALENCE_NAMES: [&str; 5] = ["H", "G", "K", "K0", "Gtilde"];

impl EquivalenceReport {
    fn index(name: &str) -> usize {
        EQUIVALENCE_NAMES.iter().position(|n| *n == name).unwrap_or(0)
    }

    pub fn gap(&self, a: &str, b: &str) -> f64 {
        self.deviation[Self::index(a)][Self::index(b)]
    }

    pub fn gap_refined(&self, a: &str, b: &str) -> f64 {
        self.deviation_refined[Self::index(a)][Self::index(b)]
    }

    /// Largest gap among the four lists `H`, `G`, `K`, `K0`.
    pub fn max_chain_gap(&self, refined: bool) -> f64 {
        let d = if refined {
            &self.deviation_refined
        } else {
            &self.deviation
        };
        d.iter()
            .take(4)
            .flat_map(|row| row.iter().take(4))
            .fold(0.0, |acc, &x| acc.max(x))
    }
}

fn max_rel_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = x.abs().max(y.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

fn deviation_matrix(lists: &[Vec<f64>]) -> Vec<Vec<f64>> {
    lists
        .iter()
        .map(|a| lists.iter().map(|b| max_rel_gap(a, b)).collect())
        .collect()
}

/// Realizations compared by [`spectra_equivalence_suite`], at one order.
pub fn equivalence_lists(n: usize, alpha: f64, k: usize, order: usize) -> Result<Vec<Vec<f64>>> {
    let spec = HilbertSpec::new(n, alpha)?;
    let kk = k.min(n);
    let mut h = eigens(&build_hilbert(spec))?.eigenvalues;
    h.truncate(kk);
    let nn = n_delta(n as f64, alpha / 2.0)?;
    let g = KernelSpec::new(KernelKind::HankelG { n, alpha });
    let gt = KernelSpec::new(KernelKind::TildeG { n, alpha });
    let (ga, gb) = g.default_interval();
    let carleman = KernelSpec::on(KernelKind::Carleman, alpha / 2.0, n as f64 + alpha / 2.0);
    let cosh = KernelSpec::on(KernelKind::CoshConvolution, -nn, nn);
    Ok(vec![
        h,
        nystrom_build(&g, ga, gb, order)?.top(kk)?,
        nystrom_build(&carleman, alpha / 2.0, n as f64 + alpha / 2.0, order)?.top(kk)?,
        nystrom_build(&cosh, -nn, nn, order)?.top(kk)?,
        nystrom_build(&gt, ga, gb, order)?.top(kk)?,
    ])
}

/// Top-k spectra of `H_{N,α}` and of the Nyström realizations of `G`, `K` on
/// `[α/2, N+α/2]`, `K₀` on `[−n, n]` and `G̃`, at `order` and `2·order`.
///
/// Fails with `NonConvergence` when a realization's own top-k list still moves
/// by more than `1e-6` (relative) under the order doubling.
pub fn spectra_equivalence_suite(n: usize, alpha: f64, k: usize, order: usize) -> Result<EquivalenceReport> {
    if k == 0 {
        return Err(OperatorError::InvalidParameter("k must be positive".into()));
    }
    let top = equivalence_lists(n, alpha, k, order)?;
    let top_refined = equivalence_lists(n, alpha, k, 2 * order)?;
    let refinement_change: Vec<f64> = top.iter().zip(&top_refined).map(|(a, b)| max_rel_gap(a, b)).collect();
    if let Some((i, c)) = refinement_change.iter().enumerate().find(|(_, c)| **c > 1e-6) {
        return Err(OperatorError::NonConvergence(format!(
            "{} realization changes by {c:e} under order doubling",
            EQUIVALENCE_NAMES[i]
        )));
    }
    Ok(EquivalenceReport {
        n,
        alpha,
        k,
        order,
        names: EQUIVALENCE_NAMES.iter().map(|s| s.to_string()).collect(),
        deviation: deviation_matrix(&top),
        deviation_refined: deviation_matrix(&top_refined),
        top,
        top_refined,
        refinement_change,
    })
}

/// `‖E_α P_{[0,N]} E_α*‖₁ = ½ ln((2N+α)/α)`.
pub fn epe_trace(n: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(n >= 0.0) {
        return Err(OperatorError::InvalidParameter(format!(
            "need alpha > 0 and N ≥ 0, got N = {n}, alpha = {alpha}"
        )));
    }
    Ok(0.5 * (2.0 * n / alpha).ln_1p())
}

/// The same trace as `∫₀^∞ G̃(2x) dx`.
pub fn epe_trace_quad(n: usize, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(OperatorError::InvalidParameter("alpha must be positive".into()));
    }
    let integrator = Integrator::new(*cfg)?;
    let head = integrator.finite(|x: f64| tilde_g(n, alpha, 2.0 * x), 0.0, 1.0)?;
    let tail = integrator.from(
        |x: f64| tilde_g(n, alpha, 2.0 * x),
        1.0,
        Decay::Exponential { rate: alpha },
    )?;
    Ok(head + tail)
}

/// `tr[P_{[δ,N+δ]}K^m] = 2n_δ(N)·π^{m−2}·∫_ℝ sech^m ω dω`.
pub fn carleman_trace_power(delta: f64, n: f64, m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    if m == 0 {
        return Err(OperatorError::InvalidParameter("m must be at least 1".into()));
    }
    let nd = n_delta(n, delta)?;
    let integral = if m.is_multiple_of(2) {
        i_even(m / 2)?
    } else {
        i_power_quad(m as f64, cfg)?
    };
    Ok(2.0 * nd * PI.powi(m as i32 - 2) * integral)
}

/// Nyström estimate of `tr[P_{[δ,N+δ]}K^m]` with `K` on the half-line.
///
/// The half-line is cut to `[δe^{−2R}, (N+δ)e^{2R}]` (in the logarithmic
/// variable that is `R` beyond each end of the projected interval, where the
/// transformed kernel `sech` has decayed like `e^{−R}`), meshed with panels of
/// ratio 2 and `per_panel` Gauss–Legendre nodes each; the trace is the sum of
/// the diagonal of `M^m` over nodes inside `[δ, N+δ]`.
pub fn carleman_trace_nystrom(delta: f64, n: f64, m: u32, reach: f64, per_panel: usize) -> Result<f64> {
    if !(delta > 0.0) || !(n > 0.0) || m == 0 {
        return Err(OperatorError::InvalidParameter(
            "need delta > 0, N > 0 and m ≥ 1".into(),
        ));
    }
    let lo = delta * (-2.0 * reach).exp();
    let hi = (n + delta) * (2.0 * reach).exp();
    let mut edges = Vec::new();
    let geometric = |a: f64, b: f64, edges: &mut Vec<f64>| {
        let panels = ((b / a).ln() / 2f64.ln()).ceil().max(1.0) as usize;
        let ratio = (b / a).powf(1.0 / panels as f64);
        for i in 0..panels {
            edges.push(a * ratio.powi(i as i32));
        }
    };
    geometric(lo, delta, &mut edges);
    geometric(delta, n + delta, &mut edges);
    geometric(n + delta, hi, &mut edges);
    edges.push(hi);
    let rule = GaussLegendre::new(per_panel.max(2));
    let (nodes, weights) = rule.composite(&edges);
    let roots: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let size = nodes.len();
    let mat = DMatrix::from_fn(size, size, |i, j| roots[i] * roots[j] / (nodes[i] + nodes[j]));
    let mut power = mat.clone();
    for _ in 1..m {
        power = &power * &mat;
    }
    Ok((0..size)
        .filter(|&i| nodes[i] > delta && nodes[i] < n + delta)
        .map(|i| power[(i, i)])
        .sum())
}

/// `∫_x^∞ (y² + 2 + 1/y²)e^{−αy} dy`
/// `= e^{−αx}(x²/α + 2x/α² + 2/α³ + 2/α) + e^{−αx}/x − α·E1(αx)`.
pub fn howland_inner(x: f64, alpha: f64) -> f64 {
    let e = (-alpha * x).exp();
    let poly = x * x / alpha + 2.0 * x / (alpha * alpha) + 2.0 / alpha.powi(3) + 2.0 / alpha;
    e * poly + e / x - alpha * e1(alpha * x)
}

/// [`howland_inner`] by quadrature.
pub fn howland_inner_quad(x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let integrator = Integrator::new(*cfg)?;
    Ok(integrator.from(
        |y: f64| (y * y + 2.0 + 1.0 / (y * y)) * (-alpha * y).exp(),
        x,
        Decay::Exponential { rate: alpha },
    )?)
}

/// `C_α = ∫₀^∞ √x·[∫_x^∞ (y² + 2 + 1/y²)e^{−αy} dy]^{1/2} dx`.
pub fn howland_bound(alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(OperatorError::InvalidParameter("alpha must be positive".into()));
    }
    let integrator = Integrator::new(QuadratureConfig {
        truncation_radius: cfg.truncation_radius.max(80.0 / alpha),
        ..*cfg
    })?;
    Ok(integrator.semi_infinite(
        |x: f64| (x * howland_inner(x, alpha).max(0.0)).sqrt(),
        Decay::Exponential { rate: alpha / 2.0 },
    )?)
}

/// `(W_a φ)(s) = √2 e^{s+a} φ(e^{2s+2a})`.
pub fn w_transform<F: Fn(f64) -> f64>(phi: F, a: f64) -> impl Fn(f64) -> f64 {
    move |s: f64| 2f64.sqrt() * (s + a).exp() * phi((2.0 * s + 2.0 * a).exp())
}

/// `a = ¼(ln(N+α/2) + ln(α/2))`, the shift that centres `[α/2, N+α/2]`.
pub fn w_shift(n: f64, alpha: f64) -> f64 {
    0.25 * ((n + alpha / 2.0).ln() + (alpha / 2.0).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WTransformReport {
    pub a: f64,
    pub n: f64,
    /// Image of `[α/2, N+α/2]` under `x ↦ ½ ln x − a`.
    pub support: (f64, f64),
    /// `|‖W_aφ‖ − ‖φ‖|` per sample bump.
    pub norm_residuals: Vec<f64>,
    /// Max over samples and grid of `|W_a Kφ − K₀ W_a φ|`, relative to the
    /// largest value on the grid.
    pub intertwining_residual: f64,
    /// `|(1/√(2π))∫ e^{−iωx} sech x dx − √(π/2) sech(πω/2)|` at ω = 0, 1, 2.
    pub symbol_residuals: Vec<f64>,
}

/// Checks that `W_a` is isometric and intertwines `K` with `K₀` on seeded
/// Gaussian bumps.
pub fn w_transform_check(
    alpha: f64,
    n: f64,
    sample_count: usize,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<WTransformReport> {
    if !(alpha > 0.0) || !(n > 0.0) {
        return Err(OperatorError::InvalidParameter("need alpha > 0 and N > 0".into()));
    }
    let a = w_shift(n, alpha);
    let nn = n_delta(n, alpha / 2.0)?;
    let support = (0.5 * (alpha / 2.0).ln() - a, 0.5 * (n + alpha / 2.0).ln() - a);
    let integrator = Integrator::new(*cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norm_residuals = Vec::with_capacity(sample_count);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let grid: Vec<f64> = (0..9).map(|i| -nn - 1.0 + (2.0 * nn + 2.0) * i as f64 / 8.0).collect();
    for _ in 0..sample_count {
        let centre: f64 = rng.random_range(alpha / 2.0..n + alpha / 2.0);
        let width: f64 = rng.random_range(0.2..1.0f64).min(centre / 4.0);
        let phi = move |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (-(x - centre).powi(2) / (2.0 * width * width)).exp()
            }
        };
        let edges = [
            0.0,
            (centre - 6.0 * width).max(0.0),
            centre,
            centre + 6.0 * width,
            centre + 12.0 * width,
        ];
        let left = integrator.over_edges(|x: f64| phi(x) * phi(x), &edges)?;
        let right = integrator.from(|x: f64| phi(x) * phi(x), edges[4], Decay::Exponential { rate: 1.0 })?;
        let norm_phi = (left + right).sqrt();
        let w = w_transform(phi, a);
        let t0 = 0.5 * centre.ln() - a;
        let tw = width / centre;
        let line_edges = [t0 - 40.0, t0 - 8.0 * tw, t0, t0 + 8.0 * tw, t0 + 2.0];
        let core = integrator.over_edges(|s: f64| w(s) * w(s), &line_edges)?;
        let upper = integrator.from(|s: f64| w(s) * w(s), line_edges[4], Decay::Exponential { rate: 2.0 })?;
        let norm_w = (core + upper).sqrt();
        norm_residuals.push((norm_w - norm_phi).abs());

        for &s in &grid {
            let x = (2.0 * s + 2.0 * a).exp();
            let k_phi_left = integrator.over_edges(|y: f64| phi(y) / (x + y), &edges)?;
            let k_phi_right = integrator.from(|y: f64| phi(y) / (x + y), edges[4], Decay::Exponential { rate: 1.0 })?;
            let lhs = 2f64.sqrt() * (s + a).exp() * (k_phi_left + k_phi_right);
            let rhs_core = integrator.over_edges(|t: f64| w(t) / (s - t).cosh(), &line_edges)?;
            let rhs_upper = integrator.from(
                |t: f64| w(t) / (s - t).cosh(),
                line_edges[4],
                Decay::Exponential { rate: 2.0 },
            )?;
            let rhs = rhs_core + rhs_upper;
            worst = worst.max((lhs - rhs).abs());
            scale = scale.max(lhs.abs());
        }
    }
    let symbol_residuals = [0.0, 1.0, 2.0]
        .iter()
        .map(|&w: &f64| {
            let v = integrator.line(|x: f64| (w * x).cos() / x.cosh(), Decay::Exponential { rate: 1.0 })?;
            let lhs = v / (2.0 * PI).sqrt();
            let rhs = (PI / 2.0).sqrt() / (PI * w / 2.0).cosh();
            Ok((lhs - rhs).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(WTransformReport {
        a,
        n: nn,
        support,
        norm_residuals,
        intertwining_residual: if scale > 0.0 { worst / scale } else { worst },
        symbol_residuals,
    })
}

/// Exponential decay rate of `A₀(x)`: the distance from the real axis of the
/// nearest singularity of `ln(1 − β sech(πω/2))`, capped by the poles of
/// `sech` at `ω = ±i`.
pub fn a0_decay_rate(beta: Complex64) -> f64 {
    if beta == Complex64::new(0.0, 0.0) {
        return 1.0;
    }
    let z = crate::special::acosh(beta);
    (2.0 / PI * z.im.abs()).min(1.0)
}

/// Piecewise Chebyshev interpolant of `A₀` on `[0, x_max]`, built from a
/// fixed composite Gauss–Legendre rule for the Fourier integral. Evaluating
/// it costs a few dozen flops instead of a full quadrature, which makes the
/// nested integrals of `|A₀|²` affordable.
#[derive(Debug, Clone)]
pub struct A0Profile {
    x_max: f64,
    width: f64,
    degree: usize,
    coeffs: Vec<Vec<Complex64>>,
}

impl A0Profile {
    pub fn new(beta: Complex64, x_max: f64) -> Result<Self> {
        BetaParam::new(beta).interior()?;
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(OperatorError::InvalidParameter("x_max must be positive".into()));
        }
        // Fourier side: truncate where |ln(1 − β sech(πω/2))| < 1e-17.
        let w_max = 2.0 / PI * ((2.0 * beta.norm()).max(1e-300).ln() + 40.0).max(1.0);
        let dist = a0_decay_rate(beta).max(1e-3);
        let h = (15.0 / x_max.max(1.0)).min(dist / 2.0).min(0.5);
        let q = 24;
        let rule = GaussLegendre::new(q);
        let mut edges = Vec::new();
        // Grade toward the origin, where the nearest singularity sits.
        let mut x = 0.0;
        let mut step = h / 16.0;
        edges.push(0.0);
        while x + step < w_max {
            x += step;
            edges.push(x);
            step = (step * 2.0).min(h);
        }
        edges.push(w_max);
        let (omega, weights) = rule.composite(&edges);
        let g: Vec<Complex64> = omega
            .iter()
            .zip(&weights)
            .map(|(&w, &wt)| crate::integrals::ln_one_minus_beta_sech(beta, PI * w / 2.0) * (wt / PI))
            .collect();
        let fourier = |x: f64| -> Complex64 { omega.iter().zip(&g).map(|(&w, &c)| c * (w * x).cos()).sum() };
        let degree = 24;
        let width = 1.0;
        let panels = (x_max / width).ceil() as usize;
        let cheb_nodes: Vec<f64> = (0..degree)
            .map(|j| (PI * (j as f64 + 0.5) / degree as f64).cos())
            .collect();
        let mut coeffs = Vec::with_capacity(panels);
        for p in 0..panels {
            let a = p as f64 * width;
            let values: Vec<Complex64> = cheb_nodes
                .iter()
                .map(|t| fourier(a + 0.5 * width * (t + 1.0)))
                .collect();
            let c: Vec<Complex64> = (0..degree)
                .map(|k| {
                    let s: Complex64 = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / degree as f64).cos())
                        .sum();
                    s * (if k == 0 { 1.0 } else { 2.0 } / degree as f64)
                })
                .collect();
            coeffs.push(c);
        }
        Ok(Self {
            x_max: panels as f64 * width,
            width,
            degree,
            coeffs,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// `A₀(x)`; zero beyond the tabulated range.
    pub fn eval(&self, x: f64) -> Complex64 {
        let x = x.abs();
        if x >= self.x_max {
            return Complex64::new(0.0, 0.0);
        }
        let p = ((x / self.width) as usize).min(self.coeffs.len() - 1);
        let a = p as f64 * self.width;
        let t = 2.0 * (x - a) / self.width - 1.0;
        let c = &self.coeffs[p];
        let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for k in (1..self.degree).rev() {
            let b0 = c[k] + b1 * (2.0 * t) - b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + b1 * t - b2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffdiagReport {
    pub n: f64,
    /// `2∫₀ⁿ x|A₀|² + 2n∫_n^∞|A₀|² + 2∫₀ⁿ∫_n^∞|A₀(x+y)|²`.
    pub three_term: f64,
    /// `∫_{|x|≤n}∫_{|y|≥n}|A₀(x−y)|²` by tensor-product quadrature.
    pub direct: f64,
    /// `(S²/2π)(1 + 2/(1+n²))` with `S = ‖Â₀‖₁ + ‖Â₀″‖₁`.
    pub budget: f64,
}

fn fixed_rule(a: f64, b: f64, rule: &GaussLegendre, width: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let edges: Vec<f64> = (0..=panels)
        .map(|i| {
            if i == panels {
                b
            } else {
                a + (b - a) * i as f64 / panels as f64
            }
        })
        .collect();
    rule.composite(&edges)
}

/// Squared Hilbert–Schmidt norm of `P_{[−n,n]} A₀ (I − P_{[−n,n]})`.
pub fn offdiag_hs_norm(beta: BetaParam, n: f64, cfg: &QuadratureConfig) -> Result<OffdiagReport> {
    let b = beta.interior()?.value();
    if !(n > 0.0) {
        return Err(OperatorError::InvalidParameter("n must be positive".into()));
    }
    let tail = 40.0 / a0_decay_rate(b);
    let profile = A0Profile::new(b, 2.0 * n + tail + 1.0)?;
    let sq = |x: f64| profile.eval(x).norm_sqr();
    let rule = GaussLegendre::new(cfg.order.clamp(8, 24));
    let width = 0.5;

    let (x0, w0) = fixed_rule(0.0, n, &rule, width);
    let (y0, v0) = fixed_rule(n, n + tail, &rule, width);
    let t1: f64 = x0.iter().zip(&w0).map(|(&x, &w)| w * x * sq(x)).sum();
    let t2: f64 = y0.iter().zip(&v0).map(|(&y, &v)| v * sq(y)).sum();
    let mut t3 = 0.0;
    for (&x, &w) in x0.iter().zip(&w0) {
        let inner: f64 = y0.iter().zip(&v0).map(|(&y, &v)| v * sq(x + y)).sum();
        t3 += w * inner;
    }
    let three_term = 2.0 * t1 + 2.0 * n * t2 + 2.0 * t3;

    let (xs, ws) = fixed_rule(-n, n, &rule, width);
    let (yl, vl) = fixed_rule(-n - tail, -n, &rule, width);
    let mut direct = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let upper: f64 = y0.iter().zip(&v0).map(|(&y, &v)| v * sq(x - y)).sum();
        let lower: f64 = yl.iter().zip(&vl).map(|(&y, &v)| v * sq(x - y)).sum();
        direct += w * (upper + lower);
    }

    let (n0, n2) = a0_hat_norms(beta, cfg)?;
    let s = n0 + n2;
    Ok(OffdiagReport {
        n,
        three_term,
        direct,
        budget: s * s / (2.0 * PI) * (1.0 + 2.0 / (1.0 + n * n)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRow {
    pub n: usize,
    /// `ln det(I − (β/π)H) − ln det(I − (β/π)G̃)`.
    pub ln_delta: Complex64,
    /// `ln det(I − (β/π)H) − ln det(I − (β/π)G)`, zero up to discretization.
    pub consistency: Complex64,
    /// `resolvent_bound(β)·|β|·C_α`.
    pub budget: f64,
}

/// `ln Δ_N(β)` across `n_grid`, with the Nyström realizations of `G̃` and `G`
/// built on `[0, 40/α]` with `order` nodes.
pub fn perturbation_scan(
    beta: BetaParam,
    alpha: f64,
    n_grid: &[usize],
    order: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<PerturbationRow>> {
    let beta = beta.interior()?;
    let c = beta.value() / PI;
    let budget = resolvent_bound(beta)? * beta.value().norm() * howland_bound(alpha, cfg)?;
    n_grid
        .iter()
        .map(|&n| {
            let spec = HilbertSpec::new(n, alpha)?;
            let h = logdet_shifted(&hilbert_spectrum(spec), beta)?;
            let gt = KernelSpec::new(KernelKind::TildeG { n, alpha });
            let g = KernelSpec::new(KernelKind::HankelG { n, alpha });
            let (a, b) = gt.default_interval();
            let lt = fredholm_logdet(&nystrom_build(&gt, a, b, order)?, c)?;
            let lg = fredholm_logdet(&nystrom_build(&g, a, b, order)?, c)?;
            Ok(PerturbationRow {
                n,
                ln_delta: h - lt,
                consistency: h - lg,
                budget,
            })
        })
        .collect()
}
