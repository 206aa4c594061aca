//! Flag parsing: complex β, N lists, dyadic ranges and kernel grids.

use num_complex::Complex64;
use szego::matrix::BetaParam;
use szego::quadrature::QuadratureConfig;

/// `"re"` or `"re,im"`. Values on the cut `(1, ∞)` are rejected here, so clap
/// reports them as usage errors.
pub fn parse_beta(s: &str) -> Result<BetaParam, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("invalid number {t:?} in β: {e}"));
    let value = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("β must be \"re\" or \"re,im\", got {s:?}")),
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(format!("β must be finite, got {s:?}"));
    }
    BetaParam::new(value).allowed().map_err(|e| e.to_string())
}

/// Matrix sizes of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

/// `"kmin..kmax"`, inclusive, giving `N = 2^k`.
pub fn parse_dyadic(s: &str) -> Result<SizeList, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("dyadic range must look like \"4..13\", got {s:?}"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad lower exponent: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad upper exponent: {e}"))?;
    if lo > hi || hi > 20 {
        return Err(format!("need kmin ≤ kmax ≤ 20, got {lo}..{hi}"));
    }
    Ok(SizeList((lo..=hi).map(|k| 1usize << k).collect()))
}

/// Comma-separated positive integers.
pub fn parse_n_list(s: &str) -> Result<SizeList, String> {
    let list = s
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(0) => Err("N must be positive".to_string()),
            Ok(n) => Ok(n),
            Err(e) => Err(format!("invalid N {t:?}: {e}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() {
        return Err("empty N list".into());
    }
    Ok(SizeList(list))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// `"a:b:count"`, endpoints included.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("grid must look like \"0.5:10:100\", got {s:?}"));
    };
    let start: f64 = a.trim().parse().map_err(|e| format!("bad grid start: {e}"))?;
    let stop: f64 = b.trim().parse().map_err(|e| format!("bad grid stop: {e}"))?;
    let count: usize = c.trim().parse().map_err(|e| format!("bad grid count: {e}"))?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err("grid needs finite endpoints and a positive count".into());
    }
    Ok(Grid { start, stop, count })
}

pub fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("invalid α: {e}"))?;
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(format!("α must be positive and finite, got {s}"))
    }
}

pub fn quadrature(order: usize, tol: f64) -> Result<QuadratureConfig, String> {
    let cfg = QuadratureConfig::default().with_order(order).with_tol(tol);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}
