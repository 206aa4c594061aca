//! Complex inverse hyperbolic/trigonometric functions on their principal
//! branches, and the exponential integral `E1`.
//!
//! The branch conventions are spelled out explicitly instead of relying on a
//! library's choice, because the Szegő coefficient is only continuous off the
//! cut `[1, ∞)` when `arcosh(−β)` is taken as `ln(z + √(z−1)·√(z+1))` with
//! principal square roots.

use num_complex::Complex64;

/// Replace a negative-zero imaginary part by `+0.0`.
///
/// Real inputs built as `Complex64::new(x, -0.0)` would otherwise land on the
/// lower lip of a branch cut.
pub fn normalize_zero(z: Complex64) -> Complex64 {
    Complex64::new(
        if z.re == 0.0 { 0.0 } else { z.re },
        if z.im == 0.0 { 0.0 } else { z.im },
    )
}

/// Principal `arcosh(z) = ln(z + √(z−1)·√(z+1))`.
pub fn acosh(z: Complex64) -> Complex64 {
    let z = normalize_zero(z);
    let one = Complex64::new(1.0, 0.0);
    let w = z + normalize_zero(z - one).sqrt() * normalize_zero(z + one).sqrt();
    normalize_zero(w.ln())
}

/// Principal `arcsin(z) = −i·ln(iz + √(1−z²))`.
pub fn asin(z: Complex64) -> Complex64 {
    let z = normalize_zero(z);
    let i = Complex64::new(0.0, 1.0);
    let root = normalize_zero(Complex64::new(1.0, 0.0) - z * z).sqrt();
    normalize_zero(-i * (i * z + root).ln())
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{−t}/t dt` for `x > 0`.
///
/// Power series below `x = 1`, modified Lentz continued fraction above.
pub fn e1(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x / kf;
            let add = term / kf;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER - x.ln() - sum
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// `ln(n!)` by direct summation; exact enough for the small `n` used here.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
