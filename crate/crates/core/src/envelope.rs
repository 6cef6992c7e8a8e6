//! Envelopes of functions over boxes of fuzzy intervals.
//!
//! Each engine works level by level: at membership level `α` the fuzzy box
//! is cut to the crisp box `×ᵢ[x̃ᵢ⁻(α), x̃ᵢ⁺(α)]` and a crisp range is computed
//! there. The per-level lower and upper values become the gradual endpoints
//! `z̃⁻` and `z̃⁺` of the result.
//!
//! * [`fuzzy_vertex_method`] evaluates the extreme configurations only and is
//!   exact for locally monotone functions.
//! * [`fuzzy_kkt_envelope`] minimizes and maximizes over every cut and works
//!   for any continuously differentiable function.
//! * [`axiomatic_fuzzy_eval`] applies naive interval arithmetic per cut and
//!   over-estimates whenever a variable occurs more than once.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::gradual::{AlphaGrid, FuzzyInterval, GradualError, GradualNumber, TOL_MONO};
use crate::interval::{extreme_configurations, IntervalBox, IntervalError};
use crate::optimizer::{optimize_on_box, OptimizeError, Sense, SolverConfig};

/// Nestedness repairs larger than this mark a level as uncertified.
pub const REPAIR_CERTIFY_LIMIT: f64 = 1e-4;
/// Crossing of `z̃⁻` over `z̃⁺` tolerated after repair.
pub const CROSSING_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("fuzzy box must have at least one dimension")]
    EmptyBox,
    #[error("expression has {expected} variables but the fuzzy box has {got} dimensions")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Gradual(#[from] GradualError),
    #[error("at alpha = {alpha}: {source}")]
    Interval {
        alpha: f64,
        #[source]
        source: IntervalError,
    },
    #[error("at alpha = {alpha}: {source}")]
    Eval {
        alpha: f64,
        #[source]
        source: EvalError,
    },
    #[error("at alpha = {alpha}: {source}")]
    Optimize {
        alpha: f64,
        #[source]
        source: OptimizeError,
    },
    #[error("lower envelope exceeds upper envelope by {gap:e} at alpha = {alpha}")]
    InvalidEnvelope { alpha: f64, gap: f64 },
    #[error("component {index} leaves its fuzzy interval at alpha = {alpha}")]
    OutsideBox { index: usize, alpha: f64 },
}

/// Product of fuzzy intervals sharing one α-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyBox {
    dims: Vec<FuzzyInterval>,
}

impl FuzzyBox {
    pub fn new(dims: Vec<FuzzyInterval>) -> Result<Self, EnvelopeError> {
        let Some(first) = dims.first() else {
            return Err(EnvelopeError::EmptyBox);
        };
        if dims[1..].iter().any(|d| d.grid() != first.grid()) {
            return Err(GradualError::GridMismatch.into());
        }
        Ok(FuzzyBox { dims })
    }

    pub fn dims(&self) -> &[FuzzyInterval] {
        &self.dims
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn grid(&self) -> &Arc<AlphaGrid> {
        self.dims[0].grid()
    }

    /// Crisp box at grid level `j`.
    pub fn cut(&self, j: usize) -> IntervalBox {
        IntervalBox::new(self.dims.iter().map(|d| d.cut(j)).collect()).expect("nonempty")
    }

    /// `true` when every cut has zero width in every dimension.
    pub fn is_pointlike(&self) -> bool {
        (0..self.grid().len()).all(|j| self.cut(j).dims().iter().all(|d| d.is_degenerate()))
    }

    /// The configuration whose component `i` at level `j` is
    /// `(1 − t)·x̃ᵢ⁻(αⱼ) + t·x̃ᵢ⁺(αⱼ)` with `t = weights[i][j]` clamped to `[0, 1]`.
    pub fn selection(&self, weights: &[Vec<f64>]) -> Result<FuzzyConfiguration, EnvelopeError> {
        let components = self
            .dims
            .iter()
            .zip(weights)
            .map(|(d, w)| {
                let values = (0..self.grid().len())
                    .map(|j| {
                        let cut = d.cut(j);
                        let t = w[j].clamp(0.0, 1.0);
                        cut.clamp((1.0 - t) * cut.lo() + t * cut.hi())
                    })
                    .collect();
                GradualNumber::new(self.grid().clone(), values)
            })
            .collect::<Result<Vec<_>, _>>()?;
        FuzzyConfiguration::new(self, components)
    }
}

/// A tuple of gradual numbers lying inside a [`FuzzyBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyConfiguration {
    components: Vec<GradualNumber>,
}

impl FuzzyConfiguration {
    pub fn new(bx: &FuzzyBox, components: Vec<GradualNumber>) -> Result<Self, EnvelopeError> {
        if components.len() != bx.arity() {
            return Err(EnvelopeError::ArityMismatch {
                expected: bx.arity(),
                got: components.len(),
            });
        }
        let levels = bx.grid().levels();
        for (index, (c, d)) in components.iter().zip(bx.dims()).enumerate() {
            if c.grid() != bx.grid() {
                return Err(GradualError::GridMismatch.into());
            }
            for (j, &v) in c.values().iter().enumerate() {
                if !d.cut(j).contains(v) {
                    return Err(EnvelopeError::OutsideBox {
                        index,
                        alpha: levels[j],
                    });
                }
            }
        }
        Ok(FuzzyConfiguration { components })
    }

    pub fn components(&self) -> &[GradualNumber] {
        &self.components
    }

    /// The gradual value `ḟ(Ω)`.
    pub fn evaluate(&self, f: &Expr) -> Result<GradualNumber, GradualError> {
        crate::gradual::gradual_extension(f, &self.components)
    }
}

/// Per-level solver diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelDiagnostics {
    pub alpha: f64,
    pub n_candidates_min: usize,
    pub n_candidates_max: usize,
    pub certified_min: bool,
    pub certified_max: bool,
    /// Largest adjustment made by [`enforce_nestedness`] at this level.
    pub repair: f64,
    /// Point attaining the lower value (empty when the engine has none).
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
}

impl LevelDiagnostics {
    pub(crate) fn new(alpha: f64) -> Self {
        LevelDiagnostics {
            alpha,
            n_candidates_min: 0,
            n_candidates_max: 0,
            certified_min: true,
            certified_max: true,
            repair: 0.0,
            argmin: Vec::new(),
            argmax: Vec::new(),
        }
    }

    pub fn certified(&self) -> bool {
        self.certified_min && self.certified_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeWarning {
    /// Lower and upper endpoints coincide although the box has width: the
    /// result is a single gradual number, typical of the vertex method on a
    /// non-monotone function.
    Degenerate,
    /// Endpoints violate monotonicity in α, so the result is not a fuzzy
    /// interval.
    NotNested,
}

/// Gradual endpoints `z̃⁻`, `z̃⁺` plus diagnostics, ordered by α.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    pub z_lower: GradualNumber,
    pub z_upper: GradualNumber,
    pub levels: Vec<LevelDiagnostics>,
    pub warnings: Vec<EnvelopeWarning>,
}

impl EnvelopeResult {
    pub fn grid(&self) -> &Arc<AlphaGrid> {
        self.z_lower.grid()
    }

    pub fn all_certified(&self) -> bool {
        self.levels.iter().all(LevelDiagnostics::certified)
    }

    pub fn max_repair(&self) -> f64 {
        self.levels.iter().map(|l| l.repair).fold(0.0, f64::max)
    }

    pub fn is_degenerate(&self) -> bool {
        self.warnings.contains(&EnvelopeWarning::Degenerate)
    }

    /// Converts the envelope to a fuzzy interval, failing when it is not nested.
    pub fn to_fuzzy_interval(&self) -> Result<FuzzyInterval, GradualError> {
        FuzzyInterval::new(self.z_lower.clone(), self.z_upper.clone())
    }

    pub(crate) fn from_levels(
        grid: &Arc<AlphaGrid>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        levels: Vec<LevelDiagnostics>,
        bx: &FuzzyBox,
    ) -> Result<Self, EnvelopeError> {
        let z_lower = GradualNumber::new(grid.clone(), lower)?;
        let z_upper = GradualNumber::new(grid.clone(), upper)?;
        let mut result = EnvelopeResult {
            z_lower,
            z_upper,
            levels,
            warnings: Vec::new(),
        };
        result.refresh_warnings(bx);
        Ok(result)
    }

    pub(crate) fn refresh_warnings(&mut self, bx: &FuzzyBox) {
        self.warnings.clear();
        let coincide = self
            .z_lower
            .values()
            .iter()
            .zip(self.z_upper.values())
            .all(|(l, u)| (u - l).abs() <= 1e-12 * (1.0 + l.abs()));
        if coincide && !bx.is_pointlike() {
            self.warnings.push(EnvelopeWarning::Degenerate);
        }
        if !self.z_lower.is_nondecreasing(TOL_MONO) || !self.z_upper.is_nonincreasing(TOL_MONO) {
            self.warnings.push(EnvelopeWarning::NotNested);
        }
    }
}

fn check_arity(f: &Expr, bx: &FuzzyBox) -> Result<(), EnvelopeError> {
    if f.arity() != bx.arity() {
        return Err(EnvelopeError::ArityMismatch {
            expected: f.arity(),
            got: bx.arity(),
        });
    }
    Ok(())
}

/// Range of `f` over the extreme fuzzy configurations, level by level.
///
/// Exact for functions that are continuous and locally monotone in each
/// argument. Otherwise the result may be too narrow or even a single
/// gradual number; it is returned as-is, with [`EnvelopeWarning`]s set.
pub fn fuzzy_vertex_method(f: &Expr, bx: &FuzzyBox) -> Result<EnvelopeResult, EnvelopeError> {
    check_arity(f, bx)?;
    let grid = bx.grid().clone();
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    let mut levels = Vec::with_capacity(grid.len());
    for (j, &alpha) in grid.levels().iter().enumerate() {
        let configs = extreme_configurations(&bx.cut(j))
            .map_err(|source| EnvelopeError::Interval { alpha, source })?;
        let mut diag = LevelDiagnostics::new(alpha);
        diag.n_candidates_min = configs.len();
        diag.n_candidates_max = configs.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for c in configs {
            let v = f
                .eval(c.values())
                .map_err(|source| EnvelopeError::Eval { alpha, source })?;
            if v < lo {
                lo = v;
                diag.argmin = c.values().to_vec();
            }
            if v > hi {
                hi = v;
                diag.argmax = c.values().to_vec();
            }
        }
        lower.push(lo);
        upper.push(hi);
        levels.push(diag);
    }
    EnvelopeResult::from_levels(&grid, lower, upper, levels, bx)
}

/// Envelope of `f` from the KKT points of the min and max problems on every
/// cut, followed by [`enforce_nestedness`].
///
/// Levels are solved in increasing α; each level also starts from the
/// previous level's minimizer and maximizer. A level where no start
/// converges keeps its best incumbent and is marked uncertified.
pub fn fuzzy_kkt_envelope(
    f: &Expr,
    bx: &FuzzyBox,
    cfg: &SolverConfig,
) -> Result<EnvelopeResult, EnvelopeError> {
    check_arity(f, bx)?;
    let grid = bx.grid().clone();
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    let mut levels = Vec::with_capacity(grid.len());
    let mut warm: Vec<Vec<f64>> = Vec::new();
    for (j, &alpha) in grid.levels().iter().enumerate() {
        let cut = bx.cut(j);
        let solve = |sense| {
            optimize_on_box(f, &cut, cfg, sense, &warm)
                .map_err(|source| EnvelopeError::Optimize { alpha, source })
        };
        let min = solve(Sense::Min)?;
        let max = solve(Sense::Max)?;
        let mut diag = LevelDiagnostics::new(alpha);
        diag.n_candidates_min = min.candidates.len();
        diag.n_candidates_max = max.candidates.len();
        diag.certified_min = min.certified;
        diag.certified_max = max.certified;
        diag.argmin = min.argopt.clone();
        diag.argmax = max.argopt.clone();
        warm = vec![min.argopt, max.argopt];
        lower.push(min.value);
        upper.push(max.value);
        levels.push(diag);
    }
    let raw = EnvelopeResult::from_levels(&grid, lower, upper, levels, bx)?;
    let mut repaired = enforce_nestedness(raw)?;
    repaired.refresh_warnings(bx);
    Ok(repaired)
}

/// Makes `z̃⁻` nondecreasing (running maximum in α) and `z̃⁺` nonincreasing
/// (running minimum).
///
/// The adjustment at each level is recorded in its diagnostics. An
/// adjustment above [`REPAIR_CERTIFY_LIMIT`] uncertifies that side at the
/// adjusted level and at the level whose value was propagated. Fails when
/// the repaired lower endpoint still exceeds the upper one by more than
/// [`CROSSING_TOLERANCE`].
pub fn enforce_nestedness(mut raw: EnvelopeResult) -> Result<EnvelopeResult, EnvelopeError> {
    let n = raw.z_lower.values().len();
    let mut lower = raw.z_lower.values().to_vec();
    let mut upper = raw.z_upper.values().to_vec();
    let mut repair = vec![0.0f64; n];
    let mut flag_min = vec![false; n];
    let mut flag_max = vec![false; n];

    let mut source = 0;
    for j in 1..n {
        if lower[j] < lower[source] {
            let delta = lower[source] - lower[j];
            lower[j] = lower[source];
            repair[j] = repair[j].max(delta);
            if delta > REPAIR_CERTIFY_LIMIT {
                flag_min[j] = true;
                flag_min[source] = true;
            }
        } else {
            source = j;
        }
    }
    let mut source = 0;
    for j in 1..n {
        if upper[j] > upper[source] {
            let delta = upper[j] - upper[source];
            upper[j] = upper[source];
            repair[j] = repair[j].max(delta);
            if delta > REPAIR_CERTIFY_LIMIT {
                flag_max[j] = true;
                flag_max[source] = true;
            }
        } else {
            source = j;
        }
    }

    let grid = raw.z_lower.grid().clone();
    for j in 0..n {
        let gap = lower[j] - upper[j];
        if gap > CROSSING_TOLERANCE {
            return Err(EnvelopeError::InvalidEnvelope {
                alpha: grid.levels()[j],
                gap,
            });
        }
        let diag = &mut raw.levels[j];
        diag.repair = repair[j];
        diag.certified_min &= !flag_min[j];
        diag.certified_max &= !flag_max[j];
    }
    raw.z_lower = GradualNumber::new(grid.clone(), lower)?;
    raw.z_upper = GradualNumber::new(grid, upper)?;
    raw.warnings.retain(|w| *w != EnvelopeWarning::NotNested);
    Ok(raw)
}

/// Per-cut naive interval evaluation, each occurrence of a variable treated
/// as an independent copy.
pub fn axiomatic_fuzzy_eval(f: &Expr, bx: &FuzzyBox) -> Result<EnvelopeResult, EnvelopeError> {
    check_arity(f, bx)?;
    let grid = bx.grid().clone();
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    let mut levels = Vec::with_capacity(grid.len());
    for (j, &alpha) in grid.levels().iter().enumerate() {
        let range = f
            .eval_interval(bx.cut(j).dims())
            .map_err(|source| EnvelopeError::Interval { alpha, source })?;
        lower.push(range.lo());
        upper.push(range.hi());
        levels.push(LevelDiagnostics::new(alpha));
    }
    EnvelopeResult::from_levels(&grid, lower, upper, levels, bx)
}
