//! The Szegő coefficient `γ(β)` and the quantities around it.
//!
//! `γ` is available by three independent routes: the closed form
//! `(1/π²)[arcosh(−β)]² + 1/4`, the integral `(2/π²)∫₀^∞ ln(1 − β sech ω) dω`,
//! and the arcsine form `−(1/π²)(arcsin²β + π arcsin β)`. The even-power
//! coefficients `γ_k = (2/π²)∫₀^∞ ln(1 + sech^k ω) dω` and the Fourier-side
//! objects `Â₀`, `A₀` and the correction bound `ρ` live here too.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::integrals::{i_beta_quad, ln_one_minus_beta_sech, ln_sech, IntegralError};
use crate::matrix::{logdet_shifted, BetaError, BetaParam, MatrixError, SpectralData};
use crate::quadrature::{Decay, Integrator, QuadratureConfig, QuadratureError};
use crate::report::{ConvergenceReport, ConvergenceRow, ExperimentKind};
use crate::special::{acosh, asin, normalize_zero};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("delta must be positive, got {0}")]
    NonpositiveDelta(f64),
    #[error("N must be nonnegative, got {0}")]
    NegativeLength(f64),
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Integral(IntegralError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("spectrum carries no Hilbert source")]
    MissingSource,
}

impl From<IntegralError> for AsymptoticsError {
    fn from(e: IntegralError) -> Self {
        match e {
            IntegralError::Beta(b) => Self::Beta(b),
            IntegralError::Quadrature(q) => Self::Quadrature(q),
            other => Self::Integral(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, AsymptoticsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    Closed,
    Integral,
    Fg,
    EvenPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaValue {
    pub value: Complex64,
    pub method: GammaMethod,
}

/// `n_δ(N) = ¼ ln((N+δ)/δ)`.
pub fn n_delta(n: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(AsymptoticsError::NonpositiveDelta(delta));
    }
    if !(n >= 0.0) {
        return Err(AsymptoticsError::NegativeLength(n));
    }
    Ok(0.25 * (n / delta).ln_1p())
}

/// `γ(β) = (1/π²)[arcosh(−β)]² + 1/4`.
pub fn gamma_closed(beta: BetaParam) -> Result<GammaValue> {
    let beta = beta.allowed()?;
    let a = acosh(-beta.value());
    Ok(GammaValue {
        value: normalize_zero(a * a / (PI * PI) + 0.25),
        method: GammaMethod::Closed,
    })
}

/// `γ(β) = (2/π²)∫₀^∞ ln(1 − β sech ω) dω`.
pub fn gamma_integral(beta: BetaParam, cfg: &QuadratureConfig) -> Result<GammaValue> {
    let i = i_beta_quad(beta, cfg)?;
    Ok(GammaValue {
        value: normalize_zero(i * (2.0 / (PI * PI))),
        method: GammaMethod::Integral,
    })
}

/// `γ(β) = −(1/π²)(arcsin²β + π arcsin β)`.
pub fn gamma_fg(beta: Complex64) -> GammaValue {
    let s = asin(beta);
    GammaValue {
        value: normalize_zero(-(s * s + s * PI) / (PI * PI)),
        method: GammaMethod::Fg,
    }
}

/// `γ_k = (2/π²)∫₀^∞ ln(1 + sech^k ω) dω` for real `k > 0`.
///
/// Integrated in the variable `u = √k·ω`, in which the integrand tends to
/// `ln(1 + e^{−u²/2})` as `k` grows, so large powers need no special mesh.
pub fn gamma_power(k: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(k > 0.0) {
        return Err(AsymptoticsError::ZeroIndex);
    }
    let root = k.sqrt();
    let integrator = Integrator::new(*cfg)?;
    let v = integrator.semi_infinite(
        |u: f64| (k * ln_sech(u / root)).exp().ln_1p(),
        Decay::Exponential { rate: 1.0 },
    )?;
    Ok(2.0 / (PI * PI) * v / root)
}

/// `γ_{2m}`.
pub fn gamma_even(m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    if m == 0 {
        return Err(AsymptoticsError::ZeroIndex);
    }
    gamma_power(2.0 * m as f64, cfg)
}

/// `γ_{2m}` assembled from the closed form via
/// `1 + x^{2m} = ∏_{k=1}^{m} (1 − e^{iπη_k}x)(1 − e^{−iπη_k}x)`,
/// `η_k = (2k−1)/(2m)`.
pub fn gamma_even_roots(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(AsymptoticsError::ZeroIndex);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=m {
        let eta = (2 * k - 1) as f64 / (2 * m) as f64;
        let root = Complex64::from_polar(1.0, PI * eta);
        total += gamma_closed(BetaParam::new(root))?.value;
        total += gamma_closed(BetaParam::new(root.conj()))?.value;
    }
    Ok(total.re)
}

/// `Σ_{m=0}^{M} γ_{2^m}` (the `m = 0` term is `γ_1 = γ(−1) = 1/4`).
pub fn gamma_dyadic_partial_sum(big_m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    let mut total = 0.0;
    for m in 0..=big_m {
        total += gamma_power(2f64.powi(m as i32), cfg)?;
    }
    Ok(total)
}

/// Geometry of `{ln(1 − sβ) : s ∈ [0,1]}`, the spectrum of `A₀`: real parts
/// in `[m, M]`, imaginary parts in `[y₀ − h, y₀ + h]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRange {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub y0: f64,
    pub h: f64,
    pub a: f64,
}

pub fn spectral_range(beta: BetaParam) -> Result<SpectralRange> {
    let b = beta.interior()?.value();
    let modulus = b.norm();
    let one_minus = (Complex64::new(1.0, 0.0) - b).norm();
    let big_m = one_minus.ln().max(0.0);
    let m = if modulus == 0.0 {
        0.0
    } else if b.re >= 0.0 && b.re <= modulus * modulus {
        (b.im.abs() / modulus).ln()
    } else {
        one_minus.ln().min(0.0)
    };
    let a = if b.im == 0.0 {
        0.0
    } else {
        -b.im.signum() * (PI / 2.0 - ((1.0 - b.re) / b.im.abs()).atan())
    };
    Ok(SpectralRange {
        m,
        big_m,
        y0: a / 2.0,
        h: a.abs() / 2.0,
        a,
    })
}

/// `Â₀(ω) = (1/√(2π)) ln(1 − β sech(πω/2))`.
pub fn a0_hat(omega: f64, beta: Complex64) -> Complex64 {
    ln_one_minus_beta_sech(beta, PI * omega / 2.0) / (2.0 * PI).sqrt()
}

/// `Â₀″(ω)` by differentiating `g = ln(1 − β s)`, `s = sech(cω)`, `c = π/2`:
/// `g″ = −βs″/(1−βs) − β²s′²/(1−βs)²`.
pub fn a0_hat_second(omega: f64, beta: Complex64) -> Complex64 {
    let c = PI / 2.0;
    let x = c * omega;
    let sech = ln_sech(x).exp();
    let tanh = x.tanh();
    let s1 = -c * sech * tanh;
    let s2 = c * c * sech * (tanh * tanh - sech * sech);
    let d = Complex64::new(1.0, 0.0) - beta * sech;
    let g2 = -beta * s2 / d - beta * beta * s1 * s1 / (d * d);
    g2 / (2.0 * PI).sqrt()
}

/// Central second difference of [`a0_hat`] with step `h`.
pub fn a0_hat_second_fd(omega: f64, beta: Complex64, h: f64) -> Complex64 {
    (a0_hat(omega + h, beta) - 2.0 * a0_hat(omega, beta) + a0_hat(omega - h, beta)) / (h * h)
}

/// `A₀(x) = (1/π)∫₀^∞ cos(ωx) ln(1 − β sech(πω/2)) dω`, the inverse
/// Fourier transform of `Â₀`.
pub fn a0_kernel(x: f64, beta: BetaParam, cfg: &QuadratureConfig) -> Result<Complex64> {
    let b = beta.interior()?.value();
    let integrator = Integrator::new(*cfg)?;
    let v = integrator.semi_infinite(
        |w: f64| ln_one_minus_beta_sech(b, PI * w / 2.0) * (w * x).cos(),
        Decay::Exponential { rate: PI / 2.0 },
    )?;
    Ok(v / PI)
}

/// `(‖Â₀‖₁, ‖Â₀″‖₁)` over the real line.
pub fn a0_hat_norms(beta: BetaParam, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let b = beta.interior()?.value();
    let integrator = Integrator::new(*cfg)?;
    let decay = Decay::Exponential { rate: PI / 2.0 };
    let n0 = integrator.line(|w: f64| a0_hat(w, b).norm(), decay)?;
    let n2 = integrator.line(|w: f64| a0_hat_second(w, b).norm(), decay)?;
    Ok((n0, n2))
}

/// `|ρ_n| ≤ (3/4π)(e^{|m|}/cos h)(‖Â₀‖₁ + ‖Â₀″‖₁)²`.
pub fn rho_bound(beta: BetaParam, cfg: &QuadratureConfig) -> Result<f64> {
    let range = spectral_range(beta)?;
    let (n0, n2) = a0_hat_norms(beta, cfg)?;
    let s = n0 + n2;
    Ok(3.0 / (4.0 * PI) * range.m.abs().exp() / range.h.cos() * s * s)
}

/// Residuals `ln det(I − (β/π)H_{N,α}) − 2n_{α/2}(N)γ(β)` over the given
/// spectra, one row per `N`.
pub fn converge_experiment(alpha: f64, beta: BetaParam, spectra: &[SpectralData]) -> Result<ConvergenceReport> {
    let beta = beta.interior()?;
    let gamma = gamma_closed(beta)?.value;
    let rows = spectra
        .iter()
        .map(|s| {
            let spec = s.source.ok_or(AsymptoticsError::MissingSource)?;
            let scale = n_delta(spec.n as f64, alpha / 2.0)?;
            let logdet = logdet_shifted(s, beta)?;
            Ok(ConvergenceRow {
                n: spec.n,
                scale,
                logdet,
                residual: normalize_zero(logdet - 2.0 * scale * gamma),
                ratio: logdet.re / (2.0 * scale),
                lower: None,
                upper: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new(
        ExperimentKind::Converge,
        alpha,
        Some(beta.value()),
        None,
        gamma,
        rows,
    ))
}
