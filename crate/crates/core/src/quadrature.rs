//! Deterministic numerical integration.
//!
//! Finite intervals are handled by globally adaptive composite Gauss–Legendre
//! panels: each panel carries a coarse estimate (one rule on the whole panel)
//! and a fine estimate (the same rule on both halves), and the panel with the
//! largest discrepancy is bisected until the summed discrepancy meets the
//! tolerance. Integrable endpoint singularities such as `ln x` at `0` are
//! absorbed by repeated bisection toward the singular endpoint.
//!
//! Semi-infinite and whole-line integrals are cut at a truncation radius whose
//! tail is bounded by a caller-declared [`Decay`] class. Exponentially decaying
//! integrands are truncated (the radius is doubled until the tail estimate is
//! below tolerance); algebraically decaying integrands have their tail mapped
//! onto `(0, 1]` with `x = R / t`.
//!
//! Nothing here is random or cached, so repeated calls with the same
//! configuration are bit-identical.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("no convergence after {panels} panels (estimate {estimate:e}, error {error:e})")]
    NonConvergence { panels: usize, estimate: f64, error: f64 },
    #[error("integrand decays slower than declared beyond x = {radius} (|f| = {observed:e}, allowed {allowed:e})")]
    DecayViolation { radius: f64, observed: f64, allowed: f64 },
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
}

pub type Result<T> = std::result::Result<T, QuadratureError>;

/// Controls every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss–Legendre points per panel.
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of panels of one adaptive integration.
    pub max_panels: usize,
    /// Where semi-infinite and whole-line domains are first cut.
    pub truncation_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            order: 32,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_panels: 2000,
            truncation_radius: 40.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(QuadratureError::InvalidConfig(format!(
                "order must be at least 2, got {}",
                self.order
            )));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(QuadratureError::InvalidConfig("tolerances must be nonnegative".into()));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(QuadratureError::InvalidConfig(
                "abs_tol and rel_tol cannot both be zero".into(),
            ));
        }
        if !(self.truncation_radius > 0.0 && self.truncation_radius.is_finite()) {
            return Err(QuadratureError::InvalidConfig(
                "truncation_radius must be positive and finite".into(),
            ));
        }
        if self.max_panels == 0 {
            return Err(QuadratureError::InvalidConfig("max_panels must be positive".into()));
        }
        Ok(())
    }

    /// Same configuration with both tolerances set to `tol`.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate)
    }
}

/// How an integrand decays beyond the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|f(x)| ≲ C e^{-rate·x}` (polynomial prefactors tolerated).
    Exponential { rate: f64 },
    /// `|f(x)| ≲ C x^{-power}` with `power > 1`.
    Algebraic { power: f64 },
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Composite rule over consecutive panels `edges[i]..edges[i+1]`.
    pub fn composite(&self, edges: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(self.len() * edges.len().saturating_sub(1));
        let mut ws = Vec::with_capacity(xs.capacity());
        for pair in edges.windows(2) {
            for (x, w) in self.on(pair[0], pair[1]) {
                xs.push(x);
                ws.push(w);
            }
        }
        (xs, ws)
    }

    fn apply<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, a: f64, b: f64) -> Result<T> {
        let mut acc = T::default();
        for (x, w) in self.on(a, b) {
            let v = f(x);
            if !v.is_finite_value() {
                return Err(QuadratureError::NonFinite { x });
            }
            acc = acc + v * w;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Panel<T> {
    a: f64,
    b: f64,
    left: T,
    right: T,
    err: f64,
}

/// Adaptive integrator bound to one configuration and its Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct Integrator {
    cfg: QuadratureConfig,
    rule: GaussLegendre,
}

impl Integrator {
    pub fn new(cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            rule: GaussLegendre::new(cfg.order),
            cfg,
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// `∫_a^b f`.
    pub fn finite<T: QuadValue, F: Fn(f64) -> T>(&self, f: F, a: f64, b: f64) -> Result<T> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(QuadratureError::InvalidInterval { a, b });
        }
        if a == b {
            return Ok(T::default());
        }
        self.adaptive(&f, &[a, b])
    }

    /// `∫` over consecutive panels given by `edges`, refined adaptively.
    pub fn over_edges<T: QuadValue, F: Fn(f64) -> T>(&self, f: F, edges: &[f64]) -> Result<T> {
        if edges.len() < 2 {
            return Ok(T::default());
        }
        for pair in edges.windows(2) {
            if !(pair[0].is_finite() && pair[1].is_finite()) || pair[0] > pair[1] {
                return Err(QuadratureError::InvalidInterval { a: pair[0], b: pair[1] });
            }
        }
        self.adaptive(&f, edges)
    }

    /// `∫_0^∞ f`.
    pub fn semi_infinite<T: QuadValue, F: Fn(f64) -> T>(&self, f: F, decay: Decay) -> Result<T> {
        self.from(f, 0.0, decay)
    }

    /// `∫_a^∞ f`.
    pub fn from<T: QuadValue, F: Fn(f64) -> T>(&self, f: F, a: f64, decay: Decay) -> Result<T> {
        if !a.is_finite() {
            return Err(QuadratureError::InvalidInterval { a, b: f64::INFINITY });
        }
        let radius = a + self.cfg.truncation_radius;
        match decay {
            Decay::Exponential { rate } => self.exponential_tail(&f, a, radius, rate),
            Decay::Algebraic { power } => self.algebraic_tail(&f, a, radius, power),
        }
    }

    /// `∫_ℝ f`, as `∫_0^∞ [f(x) + f(-x)] dx`.
    pub fn line<T: QuadValue, F: Fn(f64) -> T>(&self, f: F, decay: Decay) -> Result<T> {
        self.semi_infinite(|x| f(x) + f(-x), decay)
    }

    fn exponential_tail<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, a: f64, radius: f64, rate: f64) -> Result<T> {
        if !(rate > 0.0) {
            return Err(QuadratureError::InvalidConfig(
                "exponential decay rate must be positive".into(),
            ));
        }
        let mut edges = graded_edges(a, radius);
        let mut total = self.adaptive(f, &edges)?;
        let mut r = radius;
        for _ in 0..8 {
            let here = envelope(f, r, 1.0 / rate)?;
            let tail = here / rate;
            let target = self.cfg.target(total.magnitude());
            let step = 8.0 / rate;
            let beyond = envelope(f, r + step, 1.0 / rate)?;
            let allowed = 1e3 * here * (-rate * step).exp();
            if beyond > allowed && beyond > target {
                return Err(QuadratureError::DecayViolation {
                    radius: r + step,
                    observed: beyond,
                    allowed,
                });
            }
            if tail <= 0.1 * target {
                return Ok(total);
            }
            let next = r + (r - a).max(1.0);
            edges.clear();
            edges.extend(uniform_edges(r, next, ((next - r) / 4.0).ceil() as usize));
            total = total + self.adaptive(f, &edges)?;
            r = next;
        }
        let here = envelope(f, r, 1.0 / rate)?;
        Err(QuadratureError::NonConvergence {
            panels: 0,
            estimate: total.magnitude(),
            error: here / rate,
        })
    }

    fn algebraic_tail<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, a: f64, radius: f64, power: f64) -> Result<T> {
        if !(power > 1.0) {
            return Err(QuadratureError::InvalidConfig(
                "algebraic decay power must exceed 1".into(),
            ));
        }
        let head = self.adaptive(f, &graded_edges(a, radius))?;
        let here = f(radius).magnitude();
        let beyond = f(2.0 * radius).magnitude();
        let allowed = 8.0 * here * 2f64.powf(-power);
        if beyond > allowed && beyond > self.cfg.target(head.magnitude()) {
            return Err(QuadratureError::DecayViolation {
                radius: 2.0 * radius,
                observed: beyond,
                allowed,
            });
        }
        let shift = radius;
        let tail = self.adaptive(
            &|t: f64| {
                let x = shift / t;
                f(x) * (shift / (t * t))
            },
            &[0.0, 0.5, 1.0],
        )?;
        Ok(head + tail)
    }

    fn adaptive<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, edges: &[f64]) -> Result<T> {
        let mut panels: Vec<Panel<T>> = Vec::with_capacity(64);
        for pair in edges.windows(2) {
            if pair[1] > pair[0] {
                panels.push(self.fresh_panel(f, pair[0], pair[1])?);
            }
        }
        if panels.is_empty() {
            return Ok(T::default());
        }
        loop {
            let (estimate, error) = totals(&panels);
            if error <= self.cfg.target(estimate.magnitude()) {
                return Ok(sum_in_order(&mut panels));
            }
            if panels.len() >= self.cfg.max_panels {
                return Err(QuadratureError::NonConvergence {
                    panels: panels.len(),
                    estimate: estimate.magnitude(),
                    error,
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let p = panels.swap_remove(worst);
            let mid = 0.5 * (p.a + p.b);
            if !(mid > p.a && mid < p.b) {
                // Panel has shrunk to floating-point resolution.
                return Err(QuadratureError::NonConvergence {
                    panels: panels.len() + 1,
                    estimate: estimate.magnitude(),
                    error,
                });
            }
            panels.push(self.child_panel(f, p.a, mid, p.left)?);
            panels.push(self.child_panel(f, mid, p.b, p.right)?);
        }
    }

    fn fresh_panel<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, a: f64, b: f64) -> Result<Panel<T>> {
        let coarse = self.rule.apply(f, a, b)?;
        self.child_panel(f, a, b, coarse)
    }

    fn child_panel<T: QuadValue, F: Fn(f64) -> T>(&self, f: &F, a: f64, b: f64, coarse: T) -> Result<Panel<T>> {
        let mid = 0.5 * (a + b);
        let left = self.rule.apply(f, a, mid)?;
        let right = self.rule.apply(f, mid, b)?;
        let err = (left + right - coarse).magnitude();
        Ok(Panel { a, b, left, right, err })
    }
}

fn totals<T: QuadValue>(panels: &[Panel<T>]) -> (T, f64) {
    panels
        .iter()
        .fold((T::default(), 0.0), |(s, e), p| (s + p.left + p.right, e + p.err))
}

fn sum_in_order<T: QuadValue>(panels: &mut [Panel<T>]) -> T {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels.iter().fold(T::default(), |s, p| s + p.left + p.right)
}

/// Max of `|f|` over a few points just below `x`, so an oscillating integrand
/// caught near a zero is not mistaken for a negligible one.
fn envelope<T: QuadValue, F: Fn(f64) -> T>(f: &F, x: f64, width: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        let p = x - width * i as f64 / 4.0;
        let v = f(p);
        if !v.is_finite_value() {
            return Err(QuadratureError::NonFinite { x: p });
        }
        m = m.max(v.magnitude());
    }
    Ok(m)
}

/// `a, a+1/16, a+1/8, …` doubling up to `a+1`, then unit panels to `b`.
fn graded_edges(a: f64, b: f64) -> Vec<f64> {
    let mut edges = vec![a];
    let mut h = 1.0 / 16.0;
    while a + h < b && h < 1.0 {
        edges.push(a + h);
        h *= 2.0;
    }
    let mut x = a + 1.0;
    while x + 1.0 < b {
        x += 1.0;
        edges.push(x);
    }
    if *edges.last().unwrap_or(&a) < b {
        edges.push(b);
    }
    edges
}

fn uniform_edges(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let panels = panels.max(1);
    (0..=panels)
        .map(|i| {
            if i == panels {
                b
            } else {
                a + (b - a) * i as f64 / panels as f64
            }
        })
        .collect()
}

/// `∫_a^b f` with a fresh [`Integrator`].
pub fn integrate_finite<T: QuadValue, F: Fn(f64) -> T>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<T> {
    Integrator::new(*cfg)?.finite(f, a, b)
}

/// `∫_0^∞ f` with a fresh [`Integrator`].
pub fn integrate_semi_infinite<T: QuadValue, F: Fn(f64) -> T>(f: F, decay: Decay, cfg: &QuadratureConfig) -> Result<T> {
    Integrator::new(*cfg)?.semi_infinite(f, decay)
}

/// `∫_ℝ f` with a fresh [`Integrator`].
pub fn integrate_line<T: QuadValue, F: Fn(f64) -> T>(f: F, decay: Decay, cfg: &QuadratureConfig) -> Result<T> {
    Integrator::new(*cfg)?.line(f, decay)
}
