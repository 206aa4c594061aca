//! Invariant suites behind `szego verify`. Each check returns a short
//! measurement on success and the offending quantity on failure.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szego::asymptotics::{gamma_closed, gamma_even, gamma_even_roots, gamma_fg, gamma_integral};
use szego::integrals::{i_beta, i_beta_quad, i_even, i_even_bound, i_even_quad};
use szego::limit::{
    beta_monotonicity, cd_tail_trace, dyadic_product_bound, laguerre_inequality_suite, odd_hilbert_chain,
    sinh_inequality_check, trace_chain_alpha1,
};
use szego::matrix::{
    build_hilbert, hilbert_spectrum, hilbert_spectrum_dense, logdet_shifted, perturbation_det,
    product_identity_partial, trace_norm, wouk_logdet, BetaParam, HilbertSpec,
};
use szego::operator::{
    carleman_trace_nystrom, carleman_trace_power, epe_trace, epe_trace_quad, howland_inner, howland_inner_quad,
    w_transform_check,
};
use szego::quadrature::{integrate_finite, integrate_line, integrate_semi_infinite, Decay, QuadratureConfig};

pub const SUITES: [&str; 6] = ["quadrature", "matrix", "asymptotics", "operator", "limit", "integrals"];

pub struct Ctx {
    pub cfg: QuadratureConfig,
    pub seed: u64,
}

type Outcome = Result<String, String>;

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub run: fn(&Ctx) -> Outcome,
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(gap: f64, tol: f64) -> Outcome {
    if gap <= tol {
        Ok(format!("gap {gap:.2e} ≤ {tol:.0e}"))
    } else {
        Err(format!("gap {gap:.3e} exceeds {tol:.0e}"))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const BETA_PANEL: [(f64, f64); 11] = [
    (-2.0, 0.0),
    (-1.0, 0.0),
    (-0.5, 0.0),
    (0.0, 0.0),
    (0.5, 0.0),
    (0.9, 0.0),
    (0.99, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (1.0, 2.0),
    (-3.0, 0.1),
];

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * (0.5 * scale)
}

// quadrature

fn gl_polynomial_exactness(ctx: &Ctx) -> Outcome {
    let v = integrate_finite(|x: f64| x.powi(7) - 3.0 * x.powi(4) + x, -1.0, 2.0, &ctx.cfg).map_err(s)?;
    let exact = (256.0 - 1.0) / 8.0 - 3.0 * (32.0 + 1.0) / 5.0 + (4.0 - 1.0) / 2.0;
    within((v - exact).abs(), 1e-12)
}

fn half_line_exponential(ctx: &Ctx) -> Outcome {
    let v = integrate_semi_infinite(|x: f64| (-x).exp(), Decay::Exponential { rate: 1.0 }, &ctx.cfg).map_err(s)?;
    within((v - 1.0).abs(), 1e-11)
}

fn line_sech(ctx: &Ctx) -> Outcome {
    let v = integrate_line(|x: f64| 1.0 / x.cosh(), Decay::Exponential { rate: 1.0 }, &ctx.cfg).map_err(s)?;
    within((v - PI).abs(), 1e-11)
}

fn algebraic_tail(ctx: &Ctx) -> Outcome {
    let v =
        integrate_semi_infinite(|x: f64| 1.0 / (1.0 + x * x), Decay::Algebraic { power: 2.0 }, &ctx.cfg).map_err(s)?;
    within((v - PI / 2.0).abs(), 1e-9)
}

// matrix

fn wouk_matches_eigen_sum(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, alpha, beta) in [(4usize, 1.0, 0.5), (8, 0.5, 0.9), (16, 1.0, -1.0)] {
        let spec = HilbertSpec::new(n, alpha).map_err(s)?;
        let w = wouk_logdet(&(build_hilbert(spec) * (beta / PI)), &ctx.cfg).map_err(s)?;
        let e = logdet_shifted(&hilbert_spectrum_dense(spec).map_err(s)?, BetaParam::real(beta)).map_err(s)?;
        worst = worst.max((w - e).norm());
    }
    within(worst, 1e-9)
}

fn perturbation_identity(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let id = DMatrix::<f64>::identity(4, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a = random_symmetric(&mut rng, 4, 0.2);
        let b = random_symmetric(&mut rng, 4, 0.2);
        let lhs = (&id - &b).determinant();
        let rhs = (&id - &a).determinant() * perturbation_det(&a, &b).map_err(s)?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs());
    }
    within(worst, 1e-10)
}

fn determinant_estimates(ctx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let id = DMatrix::<f64>::identity(5, 5);
    for i in 0..200 {
        let a = random_symmetric(&mut rng, 5, 0.5);
        let b = random_symmetric(&mut rng, 5, 0.5);
        let (ta, tb) = (trace_norm(&a).map_err(s)?, trace_norm(&b).map_err(s)?);
        let (da, db) = ((&id - &a).determinant(), (&id - &b).determinant());
        if da.abs() > ta.exp() * (1.0 + 1e-12) {
            return Err(format!("sample {i}: |det(I−A)| = {da} > e^‖A‖₁ = {}", ta.exp()));
        }
        let rhs = trace_norm(&(&a - &b)).map_err(s)? * (ta + tb + 1.0).exp();
        if (da - db).abs() > rhs * (1.0 + 1e-12) {
            return Err(format!(
                "sample {i}: |det(I−A) − det(I−B)| = {} > {rhs}",
                (da - db).abs()
            ));
        }
    }
    Ok("400 estimates hold".into())
}

fn product_identity(_: &Ctx) -> Outcome {
    let spec = HilbertSpec::new(8, 1.0).map_err(s)?;
    let p = product_identity_partial(&(build_hilbert(spec) / PI), 12).map_err(s)?;
    let ld = logdet_shifted(&hilbert_spectrum_dense(spec).map_err(s)?, BetaParam::real(1.0)).map_err(s)?;
    let exact = (-ld.re).exp();
    within((p - exact).abs() / exact, 1e-8)
}

fn low_rank_matches_dense(_: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, alpha) in [(64usize, 1.0), (100, 0.5), (128, 2.0)] {
        let spec = HilbertSpec::new(n, alpha).map_err(s)?;
        let fast = hilbert_spectrum(spec);
        let dense = hilbert_spectrum_dense(spec).map_err(s)?;
        for (x, y) in fast.eigenvalues.iter().zip(&dense.eigenvalues) {
            worst = worst.max((x - y).abs());
        }
    }
    within(worst, 1e-12)
}

// asymptotics

fn gamma_routes_agree(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for (re, im) in BETA_PANEL {
        let beta = BetaParam::new(c(re, im));
        let a = gamma_closed(beta).map_err(s)?.value;
        let b = gamma_integral(beta, &ctx.cfg).map_err(s)?.value;
        let f = gamma_fg(beta.value()).value;
        worst = worst.max((a - b).norm()).max((a - f).norm());
    }
    within(worst, 1e-10)
}

fn gamma_anchors(_: &Ctx) -> Outcome {
    let g = |x: f64| gamma_closed(BetaParam::real(x)).map(|v| v.value);
    let (g0, gm1, g1) = (g(0.0).map_err(s)?, g(-1.0).map_err(s)?, g(1.0).map_err(s)?);
    if g0 == c(0.0, 0.0) && gm1 == c(0.25, 0.0) && g1 == c(-0.75, 0.0) {
        Ok("γ(0) = 0, γ(−1) = 1/4, γ(1) = −3/4".into())
    } else {
        Err(format!("γ(0) = {g0}, γ(−1) = {gm1}, γ(1) = {g1}"))
    }
}

fn gamma_two_from_gamma_i(ctx: &Ctx) -> Outcome {
    let g2 = gamma_even(1, &ctx.cfg).map_err(s)?;
    let gi = gamma_closed(BetaParam::new(c(0.0, 1.0))).map_err(s)?.value.re;
    within((g2 - 2.0 * gi).abs(), 1e-9)
}

fn even_roots_match(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=6 {
        worst = worst.max((gamma_even(m, &ctx.cfg).map_err(s)? - gamma_even_roots(m).map_err(s)?).abs());
    }
    within(worst, 1e-9)
}

// operator

fn epe_trace_formula(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1usize, 8, 64] {
        for alpha in [0.5, 1.0, 2.0] {
            let closed = epe_trace(n as f64, alpha).map_err(s)?;
            worst = worst.max((closed - epe_trace_quad(n, alpha, &ctx.cfg).map_err(s)?).abs());
        }
    }
    within(worst, 1e-8)
}

fn carleman_trace(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [2u32, 4] {
        let closed = carleman_trace_power(0.5, 8.0, m, &ctx.cfg).map_err(s)?;
        let nys = carleman_trace_nystrom(0.5, 8.0, m, 14.0, 8).map_err(s)?;
        worst = worst.max((closed - nys).abs() / closed);
    }
    within(worst, 1e-3)
}

fn howland_inner_integral(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [0.1, 1.0, 5.0] {
        for alpha in [0.5, 1.0] {
            worst = worst.max((howland_inner(x, alpha) - howland_inner_quad(x, alpha, &ctx.cfg).map_err(s)?).abs());
        }
    }
    within(worst, 1e-9)
}

fn w_transform_isometry(ctx: &Ctx) -> Outcome {
    let r = w_transform_check(1.0, 8.0, 4, ctx.seed, &ctx.cfg).map_err(s)?;
    let norm = r.norm_residuals.iter().copied().fold(0.0, f64::max);
    if norm < 1e-10 && r.intertwining_residual < 1e-8 {
        Ok(format!("norm {norm:.1e}, intertwining {:.1e}", r.intertwining_residual))
    } else {
        Err(format!("norm {norm:.3e}, intertwining {:.3e}", r.intertwining_residual))
    }
}

// limit

fn laguerre_inequalities(ctx: &Ctx) -> Outcome {
    let mut grid: Vec<f64> = (0..120).map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / 119.0)).collect();
    grid.insert(0, 0.0);
    let r = laguerre_inequality_suite(50, &grid, &ctx.cfg).map_err(s)?;
    Ok(format!(
        "Szegő max ratio {:.4}, Lewandowski–Szynal max ratio {:.4}",
        r.szego.max_ratio, r.lewandowski_szynal.max_ratio
    ))
}

fn sinh_inequality(_: &Ctx) -> Outcome {
    let deltas: Vec<f64> = (0..=10).map(|i| i as f64 / 30.0).collect();
    let ys: Vec<f64> = (0..300).map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / 299.0)).collect();
    let r = sinh_inequality_check(&deltas, &ys).map_err(s)?;
    Ok(format!("{} checks, max ratio {:.4}", r.checks, r.max_ratio))
}

fn trace_chains(ctx: &Ctx) -> Outcome {
    for n in [2usize, 4, 8] {
        for m in [1u32, 2, 4] {
            odd_hilbert_chain(n, 1.0, m, &ctx.cfg).map_err(s)?;
        }
    }
    cd_tail_trace(5, 0.01, 30.0, &ctx.cfg).map_err(s)?;
    for k in [2u32, 4] {
        trace_chain_alpha1(16, k, &ctx.cfg).map_err(s)?;
    }
    Ok("odd-section, Christoffel–Darboux and α = 1 chains hold".into())
}

fn monotone_in_beta(_: &Ctx) -> Outcome {
    let betas: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for n in [8usize, 64] {
        let spec = hilbert_spectrum(HilbertSpec::new(n, 1.0).map_err(s)?);
        beta_monotonicity(&spec, &betas).map_err(s)?;
        dyadic_product_bound(&spec, 4).map_err(s)?;
    }
    Ok("log-determinant ratio monotone, dyadic bound holds".into())
}

// integrals

fn sech_powers(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=10u32 {
        worst = worst.max((i_even(m).map_err(s)? - i_even_quad(m, &ctx.cfg).map_err(s)?).abs());
        if i_even(m + 1).map_err(s)? > i_even_bound(m) {
            return Err(format!("I_{} exceeds 2/√{m}", 2 * m + 2));
        }
    }
    within(worst, 1e-10)
}

fn sech_recursion(_: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=30u32 {
        let ratio = 2.0 * m as f64 / (2.0 * m as f64 + 1.0);
        worst = worst.max((i_even(m + 1).map_err(s)? - ratio * i_even(m).map_err(s)?).abs());
    }
    within(worst, 1e-14)
}

fn log_integral(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for (re, im) in [(0.0, 0.0), (-1.0, 0.0), (0.5, 0.0), (0.0, 1.0), (1.0, 2.0)] {
        let beta = BetaParam::new(c(re, im));
        let closed = i_beta(beta).map_err(s)?;
        worst = worst.max((closed - i_beta_quad(beta, &ctx.cfg).map_err(s)?).norm());
        let gamma = gamma_closed(beta).map_err(s)?.value;
        worst = worst.max((gamma - closed * (2.0 / (PI * PI))).norm());
    }
    within(worst, 1e-10)
}

pub fn all_checks() -> Vec<Check> {
    vec![
        Check {
            suite: "quadrature",
            name: "polynomial exactness",
            run: gl_polynomial_exactness,
        },
        Check {
            suite: "quadrature",
            name: "half-line exponential",
            run: half_line_exponential,
        },
        Check {
            suite: "quadrature",
            name: "whole-line sech",
            run: line_sech,
        },
        Check {
            suite: "quadrature",
            name: "algebraic tail",
            run: algebraic_tail,
        },
        Check {
            suite: "matrix",
            name: "Wouk integral vs eigenvalue sum",
            run: wouk_matches_eigen_sum,
        },
        Check {
            suite: "matrix",
            name: "perturbation determinant identity",
            run: perturbation_identity,
        },
        Check {
            suite: "matrix",
            name: "determinant estimates",
            run: determinant_estimates,
        },
        Check {
            suite: "matrix",
            name: "dyadic product identity",
            run: product_identity,
        },
        Check {
            suite: "matrix",
            name: "low-rank spectrum vs dense",
            run: low_rank_matches_dense,
        },
        Check {
            suite: "asymptotics",
            name: "three routes to γ(β)",
            run: gamma_routes_agree,
        },
        Check {
            suite: "asymptotics",
            name: "γ anchor values",
            run: gamma_anchors,
        },
        Check {
            suite: "asymptotics",
            name: "γ₂ = 2 Re γ(i)",
            run: gamma_two_from_gamma_i,
        },
        Check {
            suite: "asymptotics",
            name: "γ_2m from roots of −1",
            run: even_roots_match,
        },
        Check {
            suite: "operator",
            name: "trace of E P E*",
            run: epe_trace_formula,
        },
        Check {
            suite: "operator",
            name: "Carleman power traces",
            run: carleman_trace,
        },
        Check {
            suite: "operator",
            name: "Howland inner integral",
            run: howland_inner_integral,
        },
        Check {
            suite: "operator",
            name: "W transform isometry",
            run: w_transform_isometry,
        },
        Check {
            suite: "limit",
            name: "Laguerre inequalities",
            run: laguerre_inequalities,
        },
        Check {
            suite: "limit",
            name: "sinh inequality",
            run: sinh_inequality,
        },
        Check {
            suite: "limit",
            name: "trace chains",
            run: trace_chains,
        },
        Check {
            suite: "limit",
            name: "monotonicity in β",
            run: monotone_in_beta,
        },
        Check {
            suite: "integrals",
            name: "I_2m closed vs quadrature",
            run: sech_powers,
        },
        Check {
            suite: "integrals",
            name: "I_2m recursion",
            run: sech_recursion,
        },
        Check {
            suite: "integrals",
            name: "I(β) and γ(β)",
            run: log_integral,
        },
    ]
}

/// Checks of one suite, or of all of them for `"all"`.
pub fn select(suite: &str) -> Result<Vec<Check>, String> {
    if suite == "all" {
        return Ok(all_checks());
    }
    if !SUITES.contains(&suite) {
        return Err(format!(
            "unknown suite {suite:?}; expected all or one of {}",
            SUITES.join(", ")
        ));
    }
    Ok(all_checks().into_iter().filter(|c| c.suite == suite).collect())
}
