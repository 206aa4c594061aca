//! The sech-power integrals `I_{2m} = ∫_ℝ sech^{2m} x dx` and the
//! log-integral `I(β) = ∫₀^∞ ln(1 − β sech ω) dω`, each in closed form and by
//! quadrature.

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{BetaError, BetaParam};
use crate::quadrature::{Decay, Integrator, QuadratureConfig, QuadratureError};
use crate::special::{acosh, ln_factorial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("m must be at least 1")]
    ZeroIndex,
    #[error("factorial form overflows for m = {0} (use the product form)")]
    Overflow(u32),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, IntegralError>;

/// `I_{2m} = 2∏_{k=1}^{m−1} 2k/(2k+1)`.
///
/// Every factor is below one, so the running product can neither overflow nor
/// underflow for any `m` that fits in memory.
pub fn i_even(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(IntegralError::ZeroIndex);
    }
    Ok((1..m).fold(2.0, |acc, k| {
        let k = k as f64;
        acc * (2.0 * k) / (2.0 * k + 1.0)
    }))
}

/// `I_{2m} = 2·4^{m−1}((m−1)!)²/(2m−1)!` evaluated literally.
pub fn i_even_factorial(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(IntegralError::ZeroIndex);
    }
    if m > 80 {
        return Err(IntegralError::Overflow(m));
    }
    let fact = |n: u32| (1..=n).fold(1.0f64, |acc, k| acc * k as f64);
    let fm = fact(m - 1);
    Ok(2.0 * 4f64.powi(m as i32 - 1) * fm * fm / fact(2 * m - 1))
}

/// `ln I_{2m}` from log-factorials.
pub fn ln_i_even(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(IntegralError::ZeroIndex);
    }
    let m64 = m as u64;
    Ok(2f64.ln() + (m64 - 1) as f64 * 4f64.ln() + 2.0 * ln_factorial(m64 - 1) - ln_factorial(2 * m64 - 1))
}

/// `∫_ℝ sech^{2m}` by quadrature.
pub fn i_even_quad(m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    if m == 0 {
        return Err(IntegralError::ZeroIndex);
    }
    i_power_quad(2.0 * m as f64, cfg)
}

/// `∫_ℝ sech^p` for real `p > 0` by quadrature.
pub fn i_power_quad(p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let integrator = Integrator::new(*cfg)?;
    Ok(integrator.line(|x: f64| (p * ln_sech(x)).exp(), Decay::Exponential { rate: p })?)
}

/// `ln sech x` to full relative accuracy: `−ln(1 + 2 sinh²(x/2))` near zero,
/// `ln 2 − |x| − ln(1 + e^{−2|x|})` elsewhere.
pub fn ln_sech(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        let s = (0.5 * a).sinh();
        -(2.0 * s * s).ln_1p()
    } else {
        std::f64::consts::LN_2 - a - (-2.0 * a).exp().ln_1p()
    }
}

/// The bound `I_{2m+2} ≤ 2/√m`.
pub fn i_even_bound(m: u32) -> f64 {
    2.0 / (m as f64).sqrt()
}

/// `I(β) = ½[arcosh(−β)]² + π²/8`.
pub fn i_beta(beta: BetaParam) -> Result<Complex64> {
    let beta = beta.allowed()?;
    let a = acosh(-beta.value());
    Ok(0.5 * a * a + std::f64::consts::PI.powi(2) / 8.0)
}

/// `ln(1 − β sech ω)` without cancellation near `ω = 0`:
/// `1 − β sech ω = (2 sinh²(ω/2) + 1 − β)/cosh ω`.
pub fn ln_one_minus_beta_sech(beta: Complex64, omega: f64) -> Complex64 {
    if beta == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    let w = omega.abs();
    if w < 1.0 {
        let s = (0.5 * w).sinh();
        let num = (Complex64::new(1.0, 0.0) - beta) + 2.0 * s * s;
        num.ln() - w.cosh().ln()
    } else {
        let sech = (ln_sech(w)).exp();
        (Complex64::new(1.0, 0.0) - beta * sech).ln()
    }
}

/// `∫₀^∞ ln(1 − β sech ω) dω` by quadrature. At β = 1 the integrand has a
/// logarithmic singularity at `ω = 0` that the adaptive refinement absorbs.
pub fn i_beta_quad(beta: BetaParam, cfg: &QuadratureConfig) -> Result<Complex64> {
    let beta = beta.allowed()?;
    let b = beta.value();
    let integrator = Integrator::new(*cfg)?;
    Ok(integrator.semi_infinite(|w: f64| ln_one_minus_beta_sech(b, w), Decay::Exponential { rate: 1.0 })?)
}
