//! Brute-force ground truth: dense tensor grids over small boxes.
//!
//! Grid values are attained values, so the grid minimum is never below the
//! true minimum and the grid maximum never above the true maximum.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::{EnvelopeResult, FuzzyBox, LevelDiagnostics};
use crate::expr::{EvalError, Expr};
use crate::interval::IntervalBox;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle supports at most {cap} dimensions, got {arity}")]
    ArityTooLarge { arity: usize, cap: usize },
    #[error("expression has {expected} variables but the box has {got} dimensions")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("{}{source}", alpha.map(|a| format!("at alpha = {a}: ")).unwrap_or_default())]
    Eval {
        alpha: Option<f64>,
        #[source]
        source: EvalError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    /// Points per dimension including both endpoints. `None` picks 2001,
    /// 401 or 101 for 1, 2 or 3 dimensions.
    pub points_per_dim: Option<usize>,
    pub max_dims: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            points_per_dim: None,
            max_dims: 3,
        }
    }
}

impl OracleConfig {
    pub fn points_for(&self, arity: usize) -> usize {
        self.points_per_dim.unwrap_or(match arity {
            0 | 1 => 2001,
            2 => 401,
            _ => 101,
        })
    }

    fn check(&self, f: &Expr, bx: &IntervalBox) -> Result<usize, OracleError> {
        if f.arity() != bx.arity() {
            return Err(OracleError::ArityMismatch {
                expected: f.arity(),
                got: bx.arity(),
            });
        }
        if bx.arity() > self.max_dims {
            return Err(OracleError::ArityTooLarge {
                arity: bx.arity(),
                cap: self.max_dims,
            });
        }
        let m = self.points_for(bx.arity());
        if m < 2 {
            return Err(OracleError::InvalidConfig(format!("points_per_dim must be at least 2, got {m}")));
        }
        Ok(m)
    }
}

/// Extremes found on the grid, with the points attaining them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub min: f64,
    pub max: f64,
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
    /// Largest grid spacing over all dimensions.
    pub step: f64,
    pub points: usize,
}

fn axis(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    let h = (hi - lo) / (m - 1) as f64;
    let mut nodes: Vec<f64> = (0..m).map(|k| lo + k as f64 * h).collect();
    nodes[m - 1] = hi;
    nodes
}

/// Visits every point of the tensor grid in lexicographic order.
fn for_each_point(
    bx: &IntervalBox,
    m: usize,
    mut visit: impl FnMut(&[f64]) -> Result<(), EvalError>,
) -> Result<(usize, f64), EvalError> {
    let axes: Vec<Vec<f64>> = bx.dims().iter().map(|d| axis(d.lo(), d.hi(), m)).collect();
    let step = bx.dims().iter().map(|d| d.width() / (m - 1) as f64).fold(0.0, f64::max);
    let mut idx = vec![0usize; axes.len()];
    let mut point: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut count = 0;
    loop {
        visit(&point)?;
        count += 1;
        let mut d = axes.len();
        loop {
            if d == 0 {
                return Ok((count, step));
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                point[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            point[d] = axes[d][0];
        }
    }
}

pub fn grid_scan(f: &Expr, bx: &IntervalBox, cfg: &OracleConfig) -> Result<GridScan, OracleError> {
    let m = cfg.check(f, bx)?;
    let mut scan = GridScan {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        argmin: Vec::new(),
        argmax: Vec::new(),
        step: 0.0,
        points: 0,
    };
    let (points, step) = for_each_point(bx, m, |x| {
        let v = f.eval(x)?;
        if v < scan.min {
            scan.min = v;
            scan.argmin = x.to_vec();
        }
        if v > scan.max {
            scan.max = v;
            scan.argmax = x.to_vec();
        }
        Ok(())
    })
    .map_err(|source| OracleError::Eval { alpha: None, source })?;
    scan.points = points;
    scan.step = step;
    Ok(scan)
}

/// Minimum and maximum of `f` over the uniform grid, boundary included.
pub fn grid_min_max(f: &Expr, bx: &IntervalBox, cfg: &OracleConfig) -> Result<(f64, f64), OracleError> {
    grid_scan(f, bx, cfg).map(|s| (s.min, s.max))
}

/// `L·h` with `L` the largest gradient norm seen on the grid and `h` the
/// grid step: an estimate of how far the grid extremes may sit from the
/// true ones.
pub fn grid_error_bound(f: &Expr, bx: &IntervalBox, cfg: &OracleConfig) -> Result<f64, OracleError> {
    let m = cfg.check(f, bx)?;
    let mut lipschitz = 0.0f64;
    let (_, step) = for_each_point(bx, m, |x| {
        let g = f.gradient(x)?;
        lipschitz = lipschitz.max(g.iter().map(|c| c * c).sum::<f64>().sqrt());
        Ok(())
    })
    .map_err(|source| OracleError::Eval { alpha: None, source })?;
    Ok(lipschitz * step)
}

/// [`grid_min_max`] at every level of the fuzzy box. No nestedness repair
/// is applied.
pub fn grid_envelope(f: &Expr, bx: &FuzzyBox, cfg: &OracleConfig) -> Result<EnvelopeResult, OracleError> {
    let grid = bx.grid().clone();
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    let mut levels = Vec::with_capacity(grid.len());
    for (j, &alpha) in grid.levels().iter().enumerate() {
        let scan = grid_scan(f, &bx.cut(j), cfg).map_err(|e| match e {
            OracleError::Eval { source, .. } => OracleError::Eval {
                alpha: Some(alpha),
                source,
            },
            other => other,
        })?;
        let mut diag = LevelDiagnostics::new(alpha);
        diag.n_candidates_min = scan.points;
        diag.n_candidates_max = scan.points;
        diag.argmin = scan.argmin;
        diag.argmax = scan.argmax;
        lower.push(scan.min);
        upper.push(scan.max);
        levels.push(diag);
    }
    Ok(EnvelopeResult::from_levels(&grid, lower, upper, levels, bx).expect("grid values are finite"))
}
