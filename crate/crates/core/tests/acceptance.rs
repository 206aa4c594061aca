//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantity that decided it. Exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szego::asymptotics::{
    converge_experiment, gamma_closed, gamma_dyadic_partial_sum, gamma_even, gamma_fg, gamma_integral,
};
use szego::integrals::{i_even, i_even_bound, i_even_quad};
use szego::limit::{
    beta1_experiment, beta_monotonicity, cd_tail_trace, decomposition_check, dyadic_product_bound,
    even_power_experiment, laguerre_inequality_suite, odd_hilbert_chain, power_trace_bound, sinh_inequality_check,
    trace_chain_alpha1,
};
use szego::matrix::{
    build_hilbert, hilbert_spectrum, hilbert_spectrum_dense, logdet_shifted, perturbation_det,
    product_identity_partial, trace_norm, wouk_logdet, BetaParam, HilbertSpec, SpectralData,
};
use szego::operator::{carleman_trace_nystrom, carleman_trace_power, epe_trace, epe_trace_quad, equivalence_lists};
use szego::quadrature::QuadratureConfig;
use szego::report::ConvergenceReport;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dyadic(lo: u32, hi: u32, alpha: f64) -> Vec<SpectralData> {
    (lo..=hi)
        .map(|k| hilbert_spectrum(HilbertSpec::new(1 << k, alpha).expect("valid spec")))
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn coefficient_consistency() -> Outcome {
    let cfg = QuadratureConfig::default();
    let panel = [
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
    ];
    let mut worst: f64 = 0.0;
    for b in panel {
        let beta = BetaParam::new(b);
        let closed = gamma_closed(beta).map_err(err)?.value;
        let integral = gamma_integral(beta, &cfg).map_err(err)?.value;
        let fg = gamma_fg(b).value;
        worst = worst
            .max((closed - integral).norm())
            .max((closed - fg).norm())
            .max((integral - fg).norm());
    }
    let g0 = gamma_closed(BetaParam::real(0.0)).map_err(err)?.value;
    let gm1 = gamma_closed(BetaParam::real(-1.0)).map_err(err)?.value;
    let g1 = gamma_closed(BetaParam::real(1.0)).map_err(err)?.value;
    let anchors = g0 == c(0.0, 0.0) && gm1 == c(0.25, 0.0) && g1 == c(-0.75, 0.0);
    check(
        worst < 1e-10 && anchors,
        format!(
            "max pairwise gap {worst:.2e}; γ(0) = {}, γ(−1) = {}, γ(1) = {}",
            g0.re, gm1.re, g1.re
        ),
    )
}

fn residual_verdict(rep: &ConvergenceReport) -> (bool, String) {
    let ok = rep.summary.max_abs_residual.is_finite() && rep.summary.tail_slope < 0.02;
    (
        ok,
        format!(
            "max|r| = {:.4}, slope = {:.2e}",
            rep.summary.max_abs_residual, rep.summary.tail_slope
        ),
    )
}

fn main_theorem_residuals() -> Outcome {
    let cases = [
        (1.0, c(0.5, 0.0)),
        (1.0, c(-1.0, 0.0)),
        (0.5, c(0.9, 0.0)),
        (1.0, c(0.5, 0.5)),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (alpha, b) in cases {
        let spectra = dyadic(4, 13, alpha);
        let rep = converge_experiment(alpha, BetaParam::new(b), &spectra).map_err(err)?;
        let (ok, d) = residual_verdict(&rep);
        all &= ok;
        parts.push(format!("(α={alpha}, β={b}) {d}"));
    }
    check(all, parts.join("; "))
}

fn limit_trend() -> Outcome {
    let mut all = true;
    let mut parts = Vec::new();
    for alpha in [0.5, 1.0] {
        let rep = beta1_experiment(alpha, &dyadic(4, 13, alpha)).map_err(err)?;
        let dev: Vec<f64> = rep.rows.iter().map(|r| (r.ratio + 0.75).abs()).collect();
        let first = dev[0];
        let last = *dev.last().expect("rows");
        let closer = last < first;
        let tail = &dev[dev.len() - 5..];
        let monotone = tail.windows(2).all(|w| w[1] <= w[0] + 1e-3);
        let sandwiched = rep.rows.iter().all(|r| {
            r.lower.unwrap_or(f64::NEG_INFINITY) <= r.ratio * (1.0 - 1e-12)
                && r.ratio <= r.upper.unwrap_or(f64::INFINITY)
        });
        all &= closer && monotone && sandwiched;
        parts.push(format!(
            "α={alpha}: |ratio+3/4| {first:.4} → {last:.4}, last five {:?}, sandwich {sandwiched}",
            tail.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()
        ));
    }
    check(all, parts.join("; "))
}

fn even_power() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut all = true;
    let mut parts = Vec::new();
    let spectra = dyadic(4, 13, 1.0);
    for m in [1, 2] {
        let rep = even_power_experiment(m, 1.0, &spectra, &cfg).map_err(err)?;
        let (ok, d) = residual_verdict(&rep);
        all &= ok;
        parts.push(format!("m={m}: {d}"));
    }
    let g2 = gamma_even(1, &cfg).map_err(err)?;
    let gi = 2.0 * gamma_closed(BetaParam::new(c(0.0, 1.0))).map_err(err)?.value.re;
    let g2_ok = (g2 - gi).abs() < 1e-9;
    all &= g2_ok;
    parts.push(format!("|γ₂ − 2Re γ(i)| = {:.2e}", (g2 - gi).abs()));
    let sum = gamma_dyadic_partial_sum(25, &cfg).map_err(err)?;
    let sum_ok = (sum - 0.75).abs() < 1e-6;
    all &= sum_ok;
    parts.push(format!("Σ_{{m≤25}} γ_{{2^m}} = {sum:.10} (gap {:.2e})", 0.75 - sum));
    check(all, parts.join("; "))
}

fn max_gap(lists: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in lists {
        for b in lists {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
            }
        }
    }
    worst
}

fn operator_equivalence() -> Outcome {
    let coarse = equivalence_lists(8, 1.0, 5, 600).map_err(err)?;
    let fine = equivalence_lists(8, 1.0, 5, 1200).map_err(err)?;
    let g600 = max_gap(&coarse[..4]);
    let g1200 = max_gap(&fine[..4]);
    let ok = g600 < 1e-3 && g1200 <= g600;
    check(
        ok,
        format!(
            "top-5 max pairwise gap over H, G, K, K0: {g600:.3e} at order 600, {g1200:.3e} at order 1200; H–G {:.1e}, K–K0 {:.1e}, K–Gtilde {:.1e}",
            max_gap(&[fine[0].clone(), fine[1].clone()]),
            max_gap(&[fine[2].clone(), fine[3].clone()]),
            max_gap(&[fine[2].clone(), fine[4].clone()]),
        ),
    )
}

fn trace_formulas() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut epe: f64 = 0.0;
    for n in [1usize, 8, 64] {
        for alpha in [0.5, 1.0, 2.0] {
            let closed = epe_trace(n as f64, alpha).map_err(err)?;
            let formula = 0.5 * ((2.0 * n as f64 + alpha) / alpha).ln();
            let quad = epe_trace_quad(n, alpha, &cfg).map_err(err)?;
            epe = epe.max((closed - formula).abs()).max((closed - quad).abs());
        }
    }
    let mut carleman: f64 = 0.0;
    for m in [2u32, 4, 6] {
        let closed = carleman_trace_power(0.5, 8.0, m, &cfg).map_err(err)?;
        let nys = carleman_trace_nystrom(0.5, 8.0, m, 14.0, 8).map_err(err)?;
        carleman = carleman.max((closed - nys).abs() / closed);
    }
    let mut sech: f64 = 0.0;
    let mut bound_ok = true;
    for m in 1..=10u32 {
        sech = sech.max((i_even(m).map_err(err)? - i_even_quad(m, &cfg).map_err(err)?).abs());
        bound_ok &= i_even(m + 1).map_err(err)? <= i_even_bound(m);
    }
    check(
        epe < 1e-8 && carleman < 1e-3 && sech < 1e-10 && bound_ok,
        format!("epe gap {epe:.1e}; Carleman trace rel gap {carleman:.1e}; I_2m gap {sech:.1e}; bound {bound_ok}"),
    )
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * 0.25
}

fn inequality_suites() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut grid = logspace(-3.0, 2.0, 200);
    grid.insert(0, 0.0);
    let lag = laguerre_inequality_suite(50, &grid, &cfg).map_err(err)?;
    let deltas: Vec<f64> = (0..=10).map(|i| i as f64 / 30.0).collect();
    let sinh = sinh_inequality_check(&deltas, &logspace(-3.0, 2.0, 500)).map_err(err)?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut det_checks = 0;
    for _ in 0..200 {
        let a = random_symmetric(&mut rng, 5);
        let b = random_symmetric(&mut rng, 5);
        let id = DMatrix::<f64>::identity(5, 5);
        let da = (&id - &a).determinant();
        let db = (&id - &b).determinant();
        let ta = trace_norm(&a).map_err(err)?;
        let tb = trace_norm(&b).map_err(err)?;
        if da.abs() > ta.exp() * (1.0 + 1e-12) {
            return Err(format!("determinant estimate violated: {da} > e^{ta}"));
        }
        let rhs = trace_norm(&(&a - &b)).map_err(err)? * (ta + tb + 1.0).exp();
        if (da - db).abs() > rhs * (1.0 + 1e-12) {
            return Err(format!(
                "determinant Lipschitz estimate violated: {} > {rhs}",
                (da - db).abs()
            ));
        }
        det_checks += 2;
    }

    let mut chains = 0;
    for n in [1usize, 2, 4, 8, 16] {
        for m in [1u32, 2, 3, 4, 6, 8] {
            for alpha in [0.5, 1.0] {
                odd_hilbert_chain(n, alpha, m, &cfg).map_err(err)?;
                chains += 1;
            }
        }
    }
    for n in [2usize, 4, 8] {
        for m in [2u32, 4] {
            for (delta, l) in [(0.01, 40.0), (0.1, 60.0)] {
                decomposition_check(n, m, delta, l, &cfg).map_err(err)?;
                chains += 1;
            }
        }
    }
    for (n, delta, l) in [(5usize, 0.01, 30.0), (10, 0.001, 50.0), (2, 0.1, 20.0)] {
        cd_tail_trace(n, delta, l, &cfg).map_err(err)?;
        chains += 1;
    }
    for n in [4usize, 16, 64] {
        for k in [2u32, 4, 8] {
            trace_chain_alpha1(n, k, &cfg).map_err(err)?;
            chains += 1;
        }
    }
    power_trace_bound(16, 1.0, 5, &cfg).map_err(err)?;
    chains += 1;

    let mut mono = 0;
    for n in [8usize, 64, 512] {
        for alpha in [0.5, 1.0] {
            let s = hilbert_spectrum(HilbertSpec::new(n, alpha).map_err(err)?);
            beta_monotonicity(&s, &(0..=20).map(|i| i as f64 / 20.0).collect::<Vec<_>>()).map_err(err)?;
            for big_m in [2, 4, 8] {
                dyadic_product_bound(&s, big_m).map_err(err)?;
            }
            mono += 1;
        }
    }
    Ok(format!(
        "Laguerre {} + {} checks, sinh {} checks, {det_checks} determinant estimates, {chains} trace chains, {mono} monotone sweeps; zero violations",
        lag.szego.checks, lag.lewandowski_szynal.checks, sinh.checks
    ))
}

fn toolbox_identities() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut wouk: f64 = 0.0;
    for (n, alpha, beta) in [(4usize, 1.0, 0.5), (8, 0.5, 0.9), (16, 1.0, -1.0)] {
        let spec = HilbertSpec::new(n, alpha).map_err(err)?;
        let a = build_hilbert(spec) * (beta / PI);
        let w = wouk_logdet(&a, &cfg).map_err(err)?;
        let e = logdet_shifted(&hilbert_spectrum_dense(spec).map_err(err)?, BetaParam::real(beta)).map_err(err)?;
        wouk = wouk.max((w - e).norm());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pert: f64 = 0.0;
    for _ in 0..50 {
        let a = random_symmetric(&mut rng, 4) * 0.4;
        let b = random_symmetric(&mut rng, 4) * 0.4;
        let id = DMatrix::<f64>::identity(4, 4);
        let d = perturbation_det(&a, &b).map_err(err)?;
        let lhs = (&id - &b).determinant();
        let rhs = (&id - &a).determinant() * d;
        pert = pert.max((lhs - rhs).abs() / lhs.abs());
    }
    let spec = HilbertSpec::new(8, 1.0).map_err(err)?;
    let p = product_identity_partial(&(build_hilbert(spec) / PI), 12).map_err(err)?;
    let exact = (-logdet_shifted(&hilbert_spectrum_dense(spec).map_err(err)?, BetaParam::real(1.0))
        .map_err(err)?
        .re)
        .exp();
    let prod = (p - exact).abs() / exact;
    check(
        wouk < 1e-9 && pert < 1e-10 && prod < 1e-8,
        format!("Wouk gap {wouk:.1e}; perturbation identity {pert:.1e}; dyadic product {prod:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 coefficient consistency", coefficient_consistency),
        ("2 main-theorem residuals", main_theorem_residuals),
        ("3 beta = 1 trend", limit_trend),
        ("4 even-power corollary", even_power),
        ("5 operator-equivalence chain", operator_equivalence),
        ("6 trace formulas", trace_formulas),
        ("7 inequality suites", inequality_suites),
        ("8 toolbox identities", toolbox_identities),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
