//! Finite Hilbert matrices, their spectra, and the determinant toolbox.
//!
//! Everything that depends on β goes through a [`SpectralData`]: the matrix is
//! diagonalized once per `(N, α)` and every shifted log-determinant is then a
//! sum over eigenvalues.
//!
//! `H_{N,α}` is numerically of very low rank (its eigenvalues decay
//! geometrically), so [`hilbert_spectrum`] compresses it with a completely
//! pivoted Cholesky factorization and diagonalizes only the small factor. The
//! eigenvalues below the stopping threshold are reported as `0.0`; their total
//! mass is kept in [`SpectralData::tail_trace`].

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{Integrator, QuadratureConfig, QuadratureError};
use crate::special::normalize_zero;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("invalid Hilbert matrix parameters: {0}")]
    InvalidSpec(String),
    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error("factor 1 − (β/π)λ vanishes for λ = {0}")]
    SingularFactor(f64),
    #[error("eigenvalue {0} lies on the cut [1, ∞)")]
    SpectrumOnCut(f64),
    #[error("linear solve failed: I − rA is singular at r = {0}")]
    LinearSolveFailure(f64),
    #[error("I − A is singular")]
    SingularIminusA,
    #[error("spectral norm {0} is not below 1")]
    NormAtLeastOne(f64),
    #[error("eigen-decomposition residual {residual:e} exceeds {bound:e}")]
    Residual { residual: f64, bound: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, MatrixError>;

/// Bumped whenever [`hilbert_spectrum`] can return different bits for the
/// same `(N, α)`. Keys on-disk spectral caches.
pub const SOLVER_VERSION: u32 = 1;

/// The pair `(N, α)` naming `H_{N,α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertSpec {
    pub n: usize,
    pub alpha: f64,
}

impl HilbertSpec {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(MatrixError::InvalidSpec("N must be at least 1".into()));
        }
        if !(alpha >= 0.5) || !alpha.is_finite() {
            return Err(MatrixError::InvalidSpec(format!(
                "alpha must be a finite number ≥ 1/2, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    /// `1/(j+k+α)`.
    pub fn entry(&self, j: usize, k: usize) -> f64 {
        1.0 / ((j + k) as f64 + self.alpha)
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BetaError {
    #[error("β = {0} lies on the forbidden cut (1, ∞)")]
    Forbidden(Complex64),
    #[error("β = 1 is on the boundary of the admissible region and is not accepted here")]
    Boundary,
}

/// Where β sits relative to the cut `[1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaClass {
    Interior,
    Boundary,
    Forbidden,
}

/// A complex Szegő parameter together with its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParam {
    value: Complex64,
    class: BetaClass,
}

impl BetaParam {
    pub fn new(value: Complex64) -> Self {
        let value = normalize_zero(value);
        let class = if value.im == 0.0 && value.re == 1.0 {
            BetaClass::Boundary
        } else if value.im == 0.0 && value.re > 1.0 {
            BetaClass::Forbidden
        } else {
            BetaClass::Interior
        };
        Self { value, class }
    }

    pub fn real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn class(&self) -> BetaClass {
        self.class
    }

    /// Rejects only the forbidden cut.
    pub fn allowed(self) -> std::result::Result<Self, BetaError> {
        match self.class {
            BetaClass::Forbidden => Err(BetaError::Forbidden(self.value)),
            _ => Ok(self),
        }
    }

    /// Rejects the cut and the boundary point β = 1.
    pub fn interior(self) -> std::result::Result<Self, BetaError> {
        match self.class {
            BetaClass::Forbidden => Err(BetaError::Forbidden(self.value)),
            BetaClass::Boundary => Err(BetaError::Boundary),
            BetaClass::Interior => Ok(self),
        }
    }
}

/// Eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// The Hilbert matrix the spectrum belongs to, if any.
    pub source: Option<HilbertSpec>,
    /// Trace mass not resolved into individual eigenvalues (zero for dense
    /// decompositions).
    pub tail_trace: f64,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub fn build_hilbert(spec: HilbertSpec) -> DMatrix<f64> {
    DMatrix::from_fn(spec.n, spec.n, |j, k| spec.entry(j, k))
}

/// Finite section of the odd Hilbert matrix `h_{j+k}` with `h_j = 1/(j+1)`
/// for even `j` and `0` for odd `j`.
pub fn build_odd_hilbert(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |j, k| {
        if (j + k) % 2 == 0 {
            1.0 / ((j + k) as f64 + 1.0)
        } else {
            0.0
        }
    })
}

fn check_square<T: nalgebra::Scalar>(a: &DMatrix<T>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(MatrixError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(())
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    check_square(a)?;
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for j in 0..a.nrows() {
        for k in 0..j {
            worst = worst.max((a[(j, k)] - a[(k, j)]).abs());
        }
    }
    let rel = worst / scale;
    if rel > 1e-14 {
        return Err(MatrixError::NotSymmetric(rel));
    }
    Ok(())
}

fn symmetrized(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Full spectrum of a symmetric matrix, with the residual of every eigenpair
/// checked against `1e-10·‖A‖`.
pub fn eigens(matrix: &DMatrix<f64>) -> Result<SpectralData> {
    let (data, _) = eigenpairs(matrix)?;
    Ok(data)
}

/// Eigenvalues (descending) and the matching eigenvectors as columns.
pub fn eigenpairs(matrix: &DMatrix<f64>) -> Result<(SpectralData, DMatrix<f64>)> {
    check_symmetric(matrix)?;
    let n = matrix.nrows();
    if n == 0 {
        return Ok((
            SpectralData {
                eigenvalues: vec![],
                source: None,
                tail_trace: 0.0,
            },
            DMatrix::zeros(0, 0),
        ));
    }
    let eig = SymmetricEigen::new(symmetrized(matrix));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bound = 1e-10 * norm.max(f64::MIN_POSITIVE);
    let resid = matrix * &vectors - &vectors * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&values));
    for c in 0..n {
        let r = resid.column(c).norm();
        if r > bound {
            return Err(MatrixError::Residual { residual: r, bound });
        }
    }
    Ok((
        SpectralData {
            eigenvalues: values,
            source: None,
            tail_trace: 0.0,
        },
        vectors,
    ))
}

/// Dense spectrum of `H_{N,α}`: `O(N³)`, used as a reference.
pub fn hilbert_spectrum_dense(spec: HilbertSpec) -> Result<SpectralData> {
    let mut data = eigens(&build_hilbert(spec))?;
    data.source = Some(spec);
    Ok(data)
}

/// Low-rank eigen-decomposition `H ≈ V·diag(λ)·Vᵀ` of a Hilbert matrix.
#[derive(Debug, Clone)]
pub struct LowRankSpectrum {
    pub values: Vec<f64>,
    /// `N × r`, orthonormal columns.
    pub vectors: DMatrix<f64>,
    /// Trace of `H − V·diag(λ)·Vᵀ` (sum of the Cholesky residual diagonal).
    pub tail_trace: f64,
}

/// Completely pivoted Cholesky of `H_{N,α}`, stopped once the largest
/// remaining diagonal falls below `1e-15/α`, followed by an eigen-
/// decomposition of the small factor.
pub fn hilbert_low_rank(spec: HilbertSpec) -> LowRankSpectrum {
    let n = spec.n;
    let stop = 1e-15 / spec.alpha;
    let mut diag: Vec<f64> = (0..n).map(|j| spec.entry(j, j)).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while let Some((p, &dp)) = diag
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains(i))
        .max_by(|a, b| a.1.total_cmp(b.1))
    {
        if dp <= stop {
            break;
        }
        let root = dp.sqrt();
        let mut col: Vec<f64> = (0..n).map(|i| spec.entry(i, p)).collect();
        for prev in &cols {
            let lp = prev[p];
            for (c, l) in col.iter_mut().zip(prev) {
                *c -= l * lp;
            }
        }
        for c in col.iter_mut() {
            *c /= root;
        }
        for &q in &pivots {
            col[q] = 0.0;
        }
        col[p] = root;
        for (d, c) in diag.iter_mut().zip(&col) {
            *d -= c * c;
        }
        diag[p] = 0.0;
        pivots.push(p);
        cols.push(col);
    }
    let tail_trace: f64 = diag
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains(i))
        .map(|(_, d)| d.max(0.0))
        .sum();
    let r = cols.len();
    if r == 0 {
        return LowRankSpectrum {
            values: vec![],
            vectors: DMatrix::zeros(n, 0),
            tail_trace,
        };
    }
    let l = DMatrix::from_fn(n, r, |i, k| cols[k][i]);
    let qr = l.qr();
    let q = qr.q();
    let rr = qr.r();
    let small = &rr * rr.transpose();
    let eig = SymmetricEigen::new(symmetrized(&small));
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let u = DMatrix::from_fn(r, r, |a, c| eig.eigenvectors[(a, order[c])]);
    LowRankSpectrum {
        values,
        vectors: q * u,
        tail_trace,
    }
}

/// Spectrum of `H_{N,α}` via [`hilbert_low_rank`], padded with zeros to
/// length `N`.
pub fn hilbert_spectrum(spec: HilbertSpec) -> SpectralData {
    let low = hilbert_low_rank(spec);
    let mut eigenvalues = low.values;
    eigenvalues.resize(spec.n, 0.0);
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    SpectralData {
        eigenvalues,
        source: Some(spec),
        tail_trace: low.tail_trace,
    }
}

/// `ln det(I − (β/π)H) = Σ ln(1 − (β/π)λ_i)` on the principal branch.
pub fn logdet_shifted(spec: &SpectralData, beta: BetaParam) -> Result<Complex64> {
    let beta = beta.allowed()?;
    let c = beta.value() / std::f64::consts::PI;
    let mut acc = Complex64::new(0.0, 0.0);
    for &lambda in &spec.eigenvalues {
        let factor = normalize_zero(Complex64::new(1.0, 0.0) - c * lambda);
        if factor.norm() < 1e-300 {
            return Err(MatrixError::SingularFactor(lambda));
        }
        acc += factor.ln();
    }
    Ok(normalize_zero(acc))
}

/// `Σ λ_i^m`.
pub fn trace_power(spec: &SpectralData, m: u32) -> f64 {
    spec.eigenvalues.iter().map(|l| l.powi(m as i32)).sum()
}

/// `tr(A^m)` by repeated multiplication.
pub fn matrix_trace_power(a: &DMatrix<f64>, m: u32) -> f64 {
    let mut p = DMatrix::identity(a.nrows(), a.ncols());
    for _ in 0..m {
        p = &p * a;
    }
    p.trace()
}

/// `Σ |λ_i|` of a symmetric matrix.
pub fn trace_norm(matrix: &DMatrix<f64>) -> Result<f64> {
    Ok(eigens(matrix)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Largest singular value.
pub fn spectral_norm(matrix: &DMatrix<f64>) -> f64 {
    if matrix.is_empty() {
        return 0.0;
    }
    matrix.clone().singular_values().iter().fold(0.0f64, |m, s| m.max(*s))
}

fn to_complex(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    a.map(|x| Complex64::new(x, 0.0))
}

/// `ln det(I − A) = −∫₀¹ tr[A(I − rA)⁻¹] dr`.
///
/// Symmetric inputs have their spectrum checked against the cut `[1, ∞)`
/// first; for other inputs a singular `I − rA` signals the violation.
pub fn wouk_logdet(a: &DMatrix<f64>, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_square(a)?;
    if check_symmetric(a).is_ok() {
        if let Some(&top) = eigens(a)?.eigenvalues.first() {
            if top >= 1.0 {
                return Err(MatrixError::SpectrumOnCut(top));
            }
        }
    }
    wouk_logdet_complex(&to_complex(a), cfg)
}

/// Complex-matrix version of [`wouk_logdet`]; no spectral pre-check.
pub fn wouk_logdet_complex(a: &DMatrix<Complex64>, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_square(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let integrator = Integrator::new(*cfg)?;
    let failure = std::cell::Cell::new(None);
    let value = integrator.finite(
        |r: f64| {
            let m = DMatrix::<Complex64>::identity(n, n) - a * Complex64::new(r, 0.0);
            match m.lu().solve(a) {
                Some(x) => x.trace(),
                None => {
                    failure.set(Some(r));
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        0.0,
        1.0,
    );
    if let Some(r) = failure.get() {
        return Err(MatrixError::LinearSolveFailure(r));
    }
    Ok(normalize_zero(-value?))
}

/// Perturbation determinant `Δ(A, B) = det(I − (I−A)⁻¹(B−A))`, so that
/// `det(I−B) = det(I−A)·Δ(A, B)`.
pub fn perturbation_det<T: ComplexField>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<T> {
    check_square(a)?;
    if a.shape() != b.shape() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let lu = (&id - a).lu();
    let x = lu.solve(&(b - a)).ok_or(MatrixError::SingularIminusA)?;
    let pivot_floor = x.iter().all(|v| v.clone().modulus().is_finite());
    if !pivot_floor {
        return Err(MatrixError::SingularIminusA);
    }
    Ok((id - x).determinant())
}

/// `ln Δ(A, B) = −∫₀¹ tr[(I − C(s))⁻¹(B − A)] ds` with `C(s) = (1−s)A + sB`.
pub fn perturbation_logdet_integral(a: &DMatrix<f64>, b: &DMatrix<f64>, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_square(a)?;
    if a.shape() != b.shape() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.nrows();
    let d = to_complex(&(b - a));
    let ac = to_complex(a);
    let integrator = Integrator::new(*cfg)?;
    let failure = std::cell::Cell::new(None);
    let value = integrator.finite(
        |s: f64| {
            let c = &ac + &d * Complex64::new(s, 0.0);
            let m = DMatrix::<Complex64>::identity(n, n) - c;
            match m.lu().solve(&d) {
                Some(x) => x.trace(),
                None => {
                    failure.set(Some(s));
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        0.0,
        1.0,
    );
    if let Some(s) = failure.get() {
        return Err(MatrixError::LinearSolveFailure(s));
    }
    Ok(normalize_zero(-value?))
}

/// `∏_{m=0}^{M} det(I + A^{2^m})`, the partial dyadic product converging to
/// `1/det(I − A)`.
pub fn product_identity_partial(a: &DMatrix<f64>, big_m: u32) -> Result<f64> {
    check_square(a)?;
    let norm = spectral_norm(a);
    if norm >= 1.0 {
        return Err(MatrixError::NormAtLeastOne(norm));
    }
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut power = a.clone();
    let mut product = 1.0;
    for m in 0..=big_m {
        product *= (&id + &power).determinant();
        if m == big_m || spectral_norm(&power) < 1e-280 {
            break;
        }
        power = &power * &power;
    }
    Ok(product)
}

/// `Σ_{m>M} tr A^{2^m}` for symmetric positive semidefinite `A`, summed until
/// the terms underflow.
pub fn dyadic_tail_trace(spec: &SpectralData, big_m: u32) -> f64 {
    let mut total = 0.0;
    for &l in &spec.eigenvalues {
        if l <= 0.0 {
            continue;
        }
        let mut p = l;
        for _ in 0..=big_m {
            p *= p;
        }
        while p > 1e-300 {
            total += p;
            p *= p;
        }
    }
    total
}

/// Norm bound on `(I − βA(s))⁻¹` for `0 ≤ A(s) ≤ I`: the minimum over the
/// applicable cases `Re β ≤ 0 → 1`, `0 < Re β < 1 → 1/(1 − Re β)`,
/// `Im β ≠ 0 → |β|/|Im β|`.
pub fn resolvent_bound(beta: BetaParam) -> Result<f64> {
    let beta = beta.interior()?;
    let b = beta.value();
    let mut best = f64::INFINITY;
    if b.re <= 0.0 {
        best = best.min(1.0);
    }
    if b.re > 0.0 && b.re < 1.0 {
        best = best.min(1.0 / (1.0 - b.re));
    }
    if b.im != 0.0 {
        best = best.min(b.norm() / b.im.abs());
    }
    Ok(best)
}
