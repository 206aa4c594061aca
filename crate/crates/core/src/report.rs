//! Row-per-N reports of the determinant experiments and their CSV/JSON
//! serialization.
//!
//! CSV numbers are written as `{:.16e}`, i.e. 17 significant digits. JSON uses
//! the shortest representation that parses back to the same `f64`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv buffer: {0}")]
    Buffer(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// `ln det(I − (β/π)H) − 2n·γ(β)` for interior β.
    Converge,
    /// `ln det(I − H/π)` and its ratio to `2n`.
    Limit,
    /// `ln det(I + (H/π)^{2m}) − 2n·γ_{2m}`.
    Even,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    /// `n_{α/2}(N) = ¼ ln((N + α/2)/(α/2))`.
    pub scale: f64,
    pub logdet: Complex64,
    pub residual: Complex64,
    /// `Re logdet / (2n)`.
    pub ratio: f64,
    /// Finite-N lower bound on `ratio` (limit experiment only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<f64>,
    /// Finite-N upper bound on `ratio` (limit experiment only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub max_abs_residual: f64,
    /// `|d residual / d ln N|` fitted over the last `tail_points` rows.
    pub tail_slope: f64,
    pub tail_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: ExperimentKind,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    /// The asymptotic coefficient the residuals are measured against.
    pub coefficient: Complex64,
    pub rows: Vec<ConvergenceRow>,
    pub summary: ConvergenceSummary,
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return 0.0;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..n {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Slope magnitude of a complex series against `ln N`, fitted separately on
/// real and imaginary parts.
pub fn tail_slope(rows: &[ConvergenceRow], points: usize) -> f64 {
    let tail = &rows[rows.len().saturating_sub(points)..];
    let xs: Vec<f64> = tail.iter().map(|r| (r.n as f64).ln()).collect();
    let re: Vec<f64> = tail.iter().map(|r| r.residual.re).collect();
    let im: Vec<f64> = tail.iter().map(|r| r.residual.im).collect();
    ls_slope(&xs, &re).hypot(ls_slope(&xs, &im))
}

impl ConvergenceReport {
    pub fn new(
        kind: ExperimentKind,
        alpha: f64,
        beta: Option<Complex64>,
        m: Option<u32>,
        coefficient: Complex64,
        rows: Vec<ConvergenceRow>,
    ) -> Self {
        let tail_points = 4.min(rows.len());
        let summary = ConvergenceSummary {
            max_abs_residual: rows.iter().map(|r| r.residual.norm()).fold(0.0, f64::max),
            tail_slope: tail_slope(&rows, tail_points),
            tail_points,
        };
        Self {
            kind,
            alpha,
            beta,
            m,
            coefficient,
            rows,
            summary,
        }
    }

    pub fn csv_header(&self) -> Vec<&'static str> {
        match self.kind {
            ExperimentKind::Converge | ExperimentKind::Even => {
                vec!["N", "n", "logdet_re", "logdet_im", "residual_re", "residual_im"]
            }
            ExperimentKind::Limit => vec![
                "N",
                "n",
                "logdet_re",
                "logdet_im",
                "residual_re",
                "residual_im",
                "ratio",
                "lower",
                "upper",
            ],
        }
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.csv_header())?;
        for r in &self.rows {
            let mut rec = vec![
                r.n.to_string(),
                fmt17(r.scale),
                fmt17(r.logdet.re),
                fmt17(r.logdet.im),
                fmt17(r.residual.re),
                fmt17(r.residual.im),
            ];
            if self.kind == ExperimentKind::Limit {
                rec.push(fmt17(r.ratio));
                rec.push(r.lower.map(fmt17).unwrap_or_default());
                rec.push(r.upper.map(fmt17).unwrap_or_default());
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Buffer(e.to_string()))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One-line summary: maximal residual and the tail slope.
    pub fn summary_line(&self) -> String {
        format!(
            "max|residual| = {} tail slope (last {} points) = {}",
            fmt17(self.summary.max_abs_residual),
            self.summary.tail_points,
            fmt17(self.summary.tail_slope)
        )
    }
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
