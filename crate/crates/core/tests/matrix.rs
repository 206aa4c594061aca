use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use szego::matrix::*;
use szego::quadrature::QuadratureConfig;

fn det_sym(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    (DMatrix::<f64>::identity(n, n) - a).determinant()
}

fn symmetric(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-1.0..1.0f64, n * n).prop_map(move |v| {
        let m = DMatrix::from_vec(n, n, v);
        (&m + m.transpose()) * 0.25
    })
}

#[test]
fn spectra_stay_in_the_open_strip() {
    for &alpha in &[0.5, 0.75, 1.0, 2.0] {
        for &n in &[1usize, 2, 16, 128, 1024] {
            let s = hilbert_spectrum(HilbertSpec::new(n, alpha).unwrap());
            assert_eq!(s.len(), n);
            assert!(s.max() < std::f64::consts::PI, "{n} {alpha}");
            assert!(s.eigenvalues.iter().all(|&l| l >= 0.0));
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}

#[test]
fn trace_power_routes_agree() {
    let spec = HilbertSpec::new(12, 1.0).unwrap();
    let s = hilbert_spectrum_dense(spec).unwrap();
    let h = build_hilbert(spec);
    for m in 1..=8 {
        let a = trace_power(&s, m);
        let b = matrix_trace_power(&h, m);
        assert!((a - b).abs() < 1e-10 * b, "{m}");
    }
    let diag: f64 = (0..12).map(|j| 1.0 / (2.0 * j as f64 + 1.0)).sum();
    assert!((trace_power(&s, 1) - diag).abs() < 1e-12);
}

#[test]
fn wouk_matches_eigen_log_sum() {
    let cfg = QuadratureConfig::default();
    for &(n, alpha, beta) in &[(4usize, 1.0, 0.5), (8, 0.5, 0.9), (16, 1.0, -1.0)] {
        let spec = HilbertSpec::new(n, alpha).unwrap();
        let a = build_hilbert(spec) * (beta / std::f64::consts::PI);
        let w = wouk_logdet(&a, &cfg).unwrap();
        let e = logdet_shifted(&hilbert_spectrum_dense(spec).unwrap(), BetaParam::real(beta)).unwrap();
        assert!((w - e).norm() < 1e-9, "{n} {alpha} {beta}: {w} vs {e}");
    }
    let on_cut = DMatrix::from_diagonal_element(2, 2, 1.5);
    assert!(matches!(wouk_logdet(&on_cut, &cfg), Err(MatrixError::SpectrumOnCut(_))));
}

#[test]
fn product_identity_at_the_boundary() {
    let spec = HilbertSpec::new(8, 1.0).unwrap();
    let a = build_hilbert(spec) / std::f64::consts::PI;
    let p = product_identity_partial(&a, 12).unwrap();
    let exact = (-logdet_shifted(&hilbert_spectrum_dense(spec).unwrap(), BetaParam::real(1.0))
        .unwrap()
        .re)
        .exp();
    assert!((p - exact).abs() < 1e-8 * exact, "{p} vs {exact}");
}

#[test]
fn product_gap_is_bounded_by_the_tail() {
    let spec = HilbertSpec::new(8, 1.0).unwrap();
    let a = build_hilbert(spec) / std::f64::consts::PI;
    let s = hilbert_spectrum_dense(spec).unwrap();
    let scaled = SpectralData {
        eigenvalues: s.eigenvalues.iter().map(|l| l / std::f64::consts::PI).collect(),
        source: None,
        tail_trace: 0.0,
    };
    let exact = 1.0 / det_sym(&a);
    let mut prev = 0.0;
    for big_m in 0..8 {
        let p = product_identity_partial(&a, big_m).unwrap();
        assert!(p >= prev && p <= exact * (1.0 + 1e-12));
        let gap_bound = dyadic_tail_trace(&scaled, big_m).exp_m1();
        assert!(exact / p - 1.0 <= gap_bound * (1.0 + 1e-9) + 1e-14, "{big_m}");
        prev = p;
    }
}

#[test]
fn monotone_in_real_beta() {
    let s = hilbert_spectrum(HilbertSpec::new(32, 0.5).unwrap());
    let mut prev = f64::INFINITY;
    for i in 0..=20 {
        let b = i as f64 / 20.0;
        let v = logdet_shifted(&s, BetaParam::real(b)).unwrap().re;
        assert!(v <= prev);
        prev = v;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

    #[test]
    fn determinant_bounded_by_trace_norm(a in symmetric(5)) {
        let d = det_sym(&a).abs();
        prop_assert!(d <= trace_norm(&a).unwrap().exp() * (1.0 + 1e-12));
    }

    #[test]
    fn determinant_lipschitz_in_trace_norm(a in symmetric(4), b in symmetric(4)) {
        let lhs = (det_sym(&a) - det_sym(&b)).abs();
        let ta = trace_norm(&a).unwrap();
        let tb = trace_norm(&b).unwrap();
        let rhs = trace_norm(&(&a - &b)).unwrap() * (ta + tb + 1.0).exp();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn perturbation_determinant_identity(a in symmetric(4), b in symmetric(4)) {
        // Entries in [−½, ½] keep the spectra inside the unit disk.
        let n = a.nrows();
        let a = &a * 0.4;
        let b = &b * 0.4;
        let delta = perturbation_det(&a, &b).unwrap();
        let lhs = det_sym(&b);
        let rhs = det_sym(&a) * delta;
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1e-3));
        let ac = a.map(|x| Complex64::new(x, 0.3 * x));
        let bc = b.map(|x| Complex64::new(x, -0.2 * x));
        let id = DMatrix::<Complex64>::identity(n, n);
        let dc = perturbation_det(&ac, &bc).unwrap();
        let l = (&id - &bc).determinant();
        let r = (&id - &ac).determinant() * dc;
        prop_assert!((l - r).norm() < 1e-10 * l.norm().max(1e-3));
    }
}
