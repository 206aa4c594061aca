use num_complex::Complex64;
use szego::integrals::*;
use szego::matrix::BetaParam;
use szego::quadrature::QuadratureConfig;

#[test]
fn even_integrals_closed_versus_quadrature() {
    let cfg = QuadratureConfig::default();
    for m in 1..=10 {
        let closed = i_even(m).unwrap();
        let quad = i_even_quad(m, &cfg).unwrap();
        assert!((closed - quad).abs() < 1e-10, "{m}: {closed} vs {quad}");
        let next = i_even(m + 1).unwrap();
        assert_eq!(next, closed * (2.0 * m as f64) / (2.0 * m as f64 + 1.0));
        assert!(next <= i_even_bound(m));
    }
}

#[test]
fn log_integral_closed_versus_quadrature() {
    let cfg = QuadratureConfig::default();
    let panel = [
        Complex64::new(-2.0, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.99, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 2.0),
        Complex64::new(-3.0, 0.1),
    ];
    for b in panel {
        let beta = BetaParam::new(b);
        let closed = i_beta(beta).unwrap();
        let quad = i_beta_quad(beta, &cfg).unwrap();
        assert!((closed - quad).norm() < 1e-10, "{b}: {closed} vs {quad}");
    }
}

#[test]
fn forbidden_beta_is_rejected() {
    let cfg = QuadratureConfig::default();
    assert!(i_beta(BetaParam::real(2.0)).is_err());
    assert!(i_beta_quad(BetaParam::real(1.0 + 1e-9), &cfg).is_err());
}

#[test]
fn ln_sech_keeps_relative_accuracy_near_zero() {
    for x in [1e-8f64, 1e-5, 1e-3, 0.1, 0.999, 1.0, 3.0] {
        let direct = -x.cosh().ln();
        let series = -x * x / 2.0 + x.powi(4) / 12.0 - x.powi(6) / 45.0;
        let reference = if x < 1e-2 { series } else { direct };
        let got = szego::integrals::ln_sech(x);
        assert!(
            ((got - reference) / reference).abs() < 1e-13,
            "{x}: {got} vs {reference}"
        );
    }
}
