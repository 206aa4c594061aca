use szego::limit::*;
use szego::matrix::{build_hilbert, hilbert_spectrum, HilbertSpec};
use szego::quadrature::QuadratureConfig;

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn laguerre_functions_are_normalized() {
    let cfg = QuadratureConfig::default();
    for n in [0, 1, 5, 12, 20] {
        let v = laguerre_norm(n, &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{n}: {v}");
    }
}

#[test]
fn recurrence_residual_is_small() {
    let grid = logspace(-3.0, 2.0, 200);
    for n in [2, 10, 30, 50] {
        let eval = LaguerreEval::new(n, &grid);
        assert!(eval.recurrence_residual() < 1e-10, "{n}");
        assert_eq!(eval.function.len(), grid.len());
    }
}

#[test]
fn laguerre_inequalities_hold_on_the_sweep() {
    let cfg = QuadratureConfig::default();
    let mut grid = logspace(-3.0, 2.0, 200);
    grid.insert(0, 0.0);
    let r = laguerre_inequality_suite(50, &grid, &cfg).unwrap();
    assert!(r.szego.max_ratio <= 1.0 + 1e-12);
    assert!(r.lewandowski_szynal.max_ratio <= 1.0 + 1e-12);
    assert!(r.partial_sum_identity < 1e-12);
    assert!(r.quadrature_spot_check < 1e-10, "{}", r.quadrature_spot_check);
    assert_eq!(r.szego.checks, 51 * 201);
}

#[test]
fn christoffel_darboux_mass_and_tail() {
    let cfg = QuadratureConfig::default();
    for n in [0, 3, 10] {
        let mass = cd_total_mass(n, &cfg).unwrap();
        assert!((mass - (n as f64 + 1.0)).abs() < 1e-9, "{n}: {mass}");
    }
    let none = cd_tail_trace(4, 0.0, f64::INFINITY, &cfg).unwrap();
    assert_eq!(none.value, 0.0);
    let t = cd_tail_trace(5, 0.01, 30.0, &cfg).unwrap();
    let b = t.bound.unwrap();
    assert!(t.value <= b && b < 0.06 + 1.0, "{} vs {b}", t.value);
    assert!(t.head <= 0.06);
}

#[test]
fn odd_chain_small_examples() {
    let cfg = QuadratureConfig::default();
    let r = odd_hilbert_chain(1, 1.0, 1, &cfg).unwrap();
    assert!((r.left - 1.0).abs() < 1e-15);
    assert!((r.middle - 8.0 / 3.0).abs() < 1e-14);
    assert!((r.right - 8.0 / 3.0).abs() < 1e-9);
    let r = odd_hilbert_chain(4, 0.5, 2, &cfg).unwrap();
    assert!(r.left < r.middle && r.middle < r.right, "{r:?}");
    assert!((r.right / 4.0 - 2.1736406823).abs() < 1e-8, "{}", r.right / 4.0);
    for w in r.sections.windows(2) {
        assert!(w[0].1 <= w[1].1);
    }
}

#[test]
fn odd_chain_on_a_grid() {
    let cfg = QuadratureConfig::default();
    for n in [2, 8, 32] {
        for m in [1, 2, 3, 4, 8] {
            for alpha in [0.5, 1.0] {
                let r = odd_hilbert_chain(n, alpha, m, &cfg).unwrap();
                assert!(r.left <= r.middle && r.middle <= r.right * (1.0 + 1e-10));
            }
        }
    }
}

#[test]
fn carleman_elements_reproduce_the_odd_matrix() {
    let cfg = QuadratureConfig::default();
    assert!((carleman_matrix_elements(0, 0, &cfg).unwrap() - 2.0).abs() < 1e-9);
    assert!(carleman_matrix_elements(0, 1, &cfg).unwrap().abs() < 1e-9);
    assert!((carleman_matrix_elements(1, 1, &cfg).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    for j in 0..=12 {
        for k in (j..=12).step_by(3) {
            let v = carleman_matrix_elements(j, k, &cfg).unwrap();
            assert!((v - 2.0 * odd_hilbert_entry(j + k)).abs() < 1e-6, "({j},{k}): {v}");
        }
    }
}

#[test]
fn sinh_estimate_sweep() {
    let ys = logspace(-3.0, 2.0, 500);
    let deltas: Vec<f64> = (0..=10).map(|i| i as f64 / 30.0).collect();
    let r = sinh_inequality_check(&deltas, &ys).unwrap();
    assert_eq!(r.checks, 11 * 500);
    assert!(r.max_ratio <= 1.0);
}

#[test]
fn alpha_one_trace_chain() {
    let cfg = QuadratureConfig::default();
    let r = trace_chain_alpha1(4, 2, &cfg).unwrap();
    assert!(r.trace < r.bound);
    assert!((r.trace - r.trace_matrix).abs() < 1e-10 * r.trace);
    for n in [8, 16, 64] {
        for k in [1, 2, 4, 8, 16] {
            let r = trace_chain_alpha1(n, k, &cfg).unwrap();
            assert!((r.trace - r.trace_matrix).abs() < 1e-10 * r.trace, "{n} {k}");
        }
    }
}

#[test]
fn power_trace_bound_dominates() {
    let cfg = QuadratureConfig::default();
    let r = power_trace_bound(16, 1.0, 5, &cfg).unwrap();
    assert!(r.trace < r.bound);
    assert!(r.cut_off_measured <= r.cut_off_bound);
}

#[test]
fn cut_off_decomposition_grid() {
    let cfg = QuadratureConfig::default();
    for n in [2, 4, 8] {
        for m in [2, 4] {
            for (delta, l) in [(0.01, 40.0), (0.1, 60.0)] {
                let r = decomposition_check(n, m, delta, l, &cfg).unwrap();
                assert!(r.lhs <= r.rhs);
            }
        }
    }
}

#[test]
fn dyadic_bound_and_monotonicity() {
    for n in [1, 8, 64] {
        for alpha in [0.5, 1.0] {
            let s = hilbert_spectrum(HilbertSpec::new(n, alpha).unwrap());
            for big_m in [2, 4, 8] {
                let b = dyadic_product_bound(&s, big_m).unwrap();
                assert!(b.lhs <= b.rhs * (1.0 + 1e-12), "{n} {alpha} {big_m}: {b:?}");
            }
            let v = beta_monotonicity(&s, &[0.0, 0.25, 0.5, 0.9, 0.99, 1.0]).unwrap();
            assert_eq!(v[0], 0.0);
        }
    }
}

#[test]
fn beta_one_rows() {
    let spectra: Vec<_> = [1usize, 16, 64]
        .iter()
        .map(|&n| hilbert_spectrum(HilbertSpec::new(n, 1.0).unwrap()))
        .collect();
    let rep = beta1_experiment(1.0, &spectra).unwrap();
    let expect = (1.0 - 1.0 / std::f64::consts::PI).ln() / (2.0 * 0.25 * 3f64.ln());
    assert!((rep.rows[0].ratio - expect).abs() < 1e-14);
    for r in &rep.rows {
        let slack = 1e-12 * r.ratio.abs();
        assert!(
            r.lower.unwrap() <= r.ratio + slack && r.ratio <= r.upper.unwrap(),
            "{r:?}"
        );
    }
}

#[test]
fn even_power_rows() {
    let cfg = QuadratureConfig::default();
    let spec = HilbertSpec::new(6, 1.0).unwrap();
    let spectra = vec![hilbert_spectrum(spec)];
    for m in [1, 2, 4] {
        let rep = even_power_experiment(m, 1.0, &spectra, &cfg).unwrap();
        let dense = even_power_det_dense(&build_hilbert(spec), m);
        assert!((rep.rows[0].logdet.re - dense.ln()).abs() < 1e-12);
        assert!(dense >= 1.0);
    }
}
