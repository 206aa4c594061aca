use num_complex::Complex64;
use szego::asymptotics::*;
use szego::integrals::i_beta;
use szego::matrix::BetaParam;
use szego::quadrature::QuadratureConfig;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn panel() -> Vec<Complex64> {
    vec![
        c(-2.0, 0.0),
        c(-1.0, 0.0),
        c(-0.5, 0.0),
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(0.9, 0.0),
        c(0.99, 0.0),
        c(0.0, 1.0),
        c(0.0, -1.0),
        c(1.0, 2.0),
        c(-3.0, 0.1),
    ]
}

#[test]
fn closed_and_integral_routes_agree_on_the_panel() {
    let cfg = QuadratureConfig::default();
    for b in panel() {
        let beta = BetaParam::new(b);
        let closed = gamma_closed(beta).unwrap().value;
        let integral = gamma_integral(beta, &cfg).unwrap().value;
        assert!((closed - integral).norm() < 1e-10, "β = {b}: {closed} vs {integral}");
    }
}

#[test]
fn arcsine_route_agrees_on_real_grid() {
    for i in 0..50 {
        let x = -1.0 + 2.0 * (i as f64 + 0.5) / 50.0;
        let closed = gamma_closed(BetaParam::real(x)).unwrap().value;
        let fg = gamma_fg(c(x, 0.0)).value;
        assert!((closed - fg).norm() < 1e-12, "{x}");
        assert!(closed.im.abs() < 1e-12);
    }
}

#[test]
fn appendix_integral_ties_to_gamma() {
    for b in panel() {
        let beta = BetaParam::new(b);
        let g = gamma_closed(beta).unwrap().value;
        let i = i_beta(beta).unwrap();
        assert!((g - i * (2.0 / std::f64::consts::PI.powi(2))).norm() < 1e-14);
    }
}

#[test]
fn even_coefficients_from_roots_of_unity() {
    let cfg = QuadratureConfig::default();
    let mut prev = f64::INFINITY;
    for m in 1..=8 {
        let q = gamma_even(m, &cfg).unwrap();
        let r = gamma_even_roots(m).unwrap();
        assert!((q - r).abs() < 1e-9, "m = {m}: {q} vs {r}");
        assert!(q > 0.0 && q < prev);
        prev = q;
    }
}

#[test]
fn dyadic_partial_sums_increase_toward_three_quarters() {
    let cfg = QuadratureConfig::default();
    let mut prev = 0.0;
    for big_m in 0..12 {
        let s = gamma_dyadic_partial_sum(big_m, &cfg).unwrap();
        assert!(s > prev && s < 0.75, "{big_m}: {s}");
        prev = s;
    }
}

#[test]
fn spectral_range_matches_brute_force() {
    let betas = [
        c(0.5, 0.0),
        c(-1.0, 0.0),
        c(0.0, 1.0),
        c(0.3, -0.8),
        c(1.0, 2.0),
        c(-3.0, 0.1),
        c(2.0, 0.5),
    ];
    for b in betas {
        let r = spectral_range(BetaParam::new(b)).unwrap();
        let (mut re_lo, mut re_hi, mut im_lo, mut im_hi) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=100_000 {
            let s = i as f64 / 100_000.0;
            let z = (c(1.0, 0.0) - b * s).ln();
            re_lo = re_lo.min(z.re);
            re_hi = re_hi.max(z.re);
            im_lo = im_lo.min(z.im);
            im_hi = im_hi.max(z.im);
        }
        assert!((re_lo - r.m).abs() < 1e-4, "{b}: m {} vs {}", r.m, re_lo);
        assert!((re_hi - r.big_m).abs() < 1e-4, "{b}");
        assert!((im_lo - (r.y0 - r.h)).abs() < 1e-4, "{b}");
        assert!((im_hi - (r.y0 + r.h)).abs() < 1e-4, "{b}");
        assert!(r.h < std::f64::consts::FRAC_PI_2);
    }
}

#[test]
fn rho_bound_grows_with_beta() {
    let cfg = QuadratureConfig::default();
    let mut prev = 0.0;
    for i in 0..=9 {
        let b = 0.1 * i as f64;
        let rho = rho_bound(BetaParam::real(b), &cfg).unwrap();
        assert!(rho.is_finite() && rho >= prev, "{b}: {rho}");
        prev = rho;
    }
}

#[test]
fn analytic_second_derivative_norm_matches_differences() {
    use szego::quadrature::{Decay, Integrator};
    let cfg = QuadratureConfig::default().with_tol(1e-7);
    let integrator = Integrator::new(cfg).unwrap();
    let b = c(0.5, 0.0);
    let (_, analytic) = a0_hat_norms(BetaParam::new(b), &QuadratureConfig::default()).unwrap();
    let fd = integrator
        .line(
            |w: f64| a0_hat_second_fd(w, b, 1e-4).norm(),
            Decay::Exponential { rate: 1.5 },
        )
        .unwrap();
    assert!((analytic - fd).abs() < 1e-5 * analytic, "{analytic} vs {fd}");
}
