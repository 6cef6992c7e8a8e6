//! Gradual numbers and fuzzy intervals built from pairs of them.
//!
//! A gradual number assigns a real value to every membership level
//! `α ∈ [0, 1]`. It is stored as samples on a shared [`AlphaGrid`] and read
//! between levels by linear interpolation. A fuzzy interval is an ordered
//! pair of gradual numbers whose lower endpoint is nondecreasing in `α` and
//! whose upper endpoint is nonincreasing, so that its α-cuts are nested.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::interval::Interval;

/// Slack allowed in the monotonicity of fuzzy-interval endpoints.
pub const TOL_MONO: f64 = 1e-9;
pub const DEFAULT_LEVELS: usize = 101;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradualError {
    #[error("invalid alpha grid: {0}")]
    InvalidGrid(String),
    #[error("gradual numbers are sampled on different alpha grids")]
    GridMismatch,
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at alpha = {alpha}")]
    NonFinite { alpha: f64 },
    #[error("divisor is zero at alpha = {alpha}")]
    DivisorZeroAtLevel { alpha: f64 },
    #[error("at alpha = {alpha}: {source}")]
    Domain {
        alpha: f64,
        #[source]
        source: EvalError,
    },
    #[error("{endpoint} endpoint is not monotone at alpha = {alpha}")]
    NotMonotone { endpoint: &'static str, alpha: f64 },
    #[error("lower endpoint exceeds upper endpoint at alpha = {alpha}")]
    NotNested { alpha: f64 },
    #[error("invalid L-R specification: {0}")]
    InvalidSpec(String),
    #[error("expression has {expected} variables but {got} arguments were given")]
    ArityMismatch { expected: usize, got: usize },
}

/// Strictly increasing membership levels from 0 to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    levels: Vec<f64>,
}

impl AlphaGrid {
    /// `n ≥ 2` evenly spaced levels `0, 1/(n-1), …, 1`.
    pub fn uniform(n: usize) -> Result<Self, GradualError> {
        if n < 2 {
            return Err(GradualError::InvalidGrid(format!(
                "need at least 2 levels, got {n}"
            )));
        }
        let last = (n - 1) as f64;
        let levels = (0..n)
            .map(|j| if j == n - 1 { 1.0 } else { j as f64 / last })
            .collect();
        Ok(AlphaGrid { levels })
    }

    pub fn from_levels(levels: Vec<f64>) -> Result<Self, GradualError> {
        if levels.len() < 2 {
            return Err(GradualError::InvalidGrid("need at least 2 levels".into()));
        }
        if levels[0] != 0.0 || *levels.last().unwrap() != 1.0 {
            return Err(GradualError::InvalidGrid(
                "levels must start at 0 and end at 1".into(),
            ));
        }
        if levels.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(GradualError::InvalidGrid(
                "levels must be strictly increasing".into(),
            ));
        }
        Ok(AlphaGrid { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Segment `j` with `levels[j] ≤ alpha ≤ levels[j+1]` and the
    /// interpolation weight of `levels[j+1]`. `alpha` is clamped to `[0, 1]`.
    fn locate(&self, alpha: f64) -> (usize, f64) {
        let alpha = alpha.clamp(0.0, 1.0);
        let n = self.levels.len();
        let j = self.levels.partition_point(|&a| a <= alpha).clamp(1, n - 1) - 1;
        let (a0, a1) = (self.levels[j], self.levels[j + 1]);
        (j, (alpha - a0) / (a1 - a0))
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid::uniform(DEFAULT_LEVELS).expect("default grid")
    }
}

/// A real value parametrized by the membership level.
#[derive(Debug, Clone, PartialEq)]
pub struct GradualNumber {
    grid: Arc<AlphaGrid>,
    values: Vec<f64>,
}

impl GradualNumber {
    pub fn new(grid: Arc<AlphaGrid>, values: Vec<f64>) -> Result<Self, GradualError> {
        if values.len() != grid.len() {
            return Err(GradualError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(GradualError::NonFinite {
                alpha: grid.levels[j],
            });
        }
        Ok(GradualNumber { grid, values })
    }

    /// Samples `assign` at every level of `grid`.
    pub fn from_fn(grid: Arc<AlphaGrid>, assign: impl Fn(f64) -> f64) -> Result<Self, GradualError> {
        let values = grid.levels.iter().map(|&a| assign(a)).collect();
        GradualNumber::new(grid, values)
    }

    pub fn constant(grid: Arc<AlphaGrid>, c: f64) -> Result<Self, GradualError> {
        GradualNumber::from_fn(grid, |_| c)
    }

    pub fn grid(&self) -> &Arc<AlphaGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at an arbitrary level, interpolating linearly between samples.
    pub fn at(&self, alpha: f64) -> f64 {
        let (j, t) = self.grid.locate(alpha);
        if t == 0.0 {
            return self.values[j];
        }
        if t == 1.0 {
            return self.values[j + 1];
        }
        (1.0 - t) * self.values[j] + t * self.values[j + 1]
    }

    fn check_grid(&self, other: &GradualNumber) -> Result<(), GradualError> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(GradualError::GridMismatch)
        }
    }

    fn zip_with(
        &self,
        other: &GradualNumber,
        op: impl Fn(f64, f64) -> f64,
    ) -> Result<GradualNumber, GradualError> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        GradualNumber::new(self.grid.clone(), values)
    }

    pub fn try_add(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn try_div(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.check_grid(other)?;
        if let Some(j) = other.values.iter().position(|&v| v == 0.0) {
            return Err(GradualError::DivisorZeroAtLevel {
                alpha: self.grid.levels[j],
            });
        }
        self.zip_with(other, |a, b| a / b)
    }

    pub fn try_min(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.zip_with(other, f64::min)
    }

    pub fn try_max(&self, other: &GradualNumber) -> Result<GradualNumber, GradualError> {
        self.zip_with(other, f64::max)
    }

    /// Partial order: `LessOrEqual` when `self(α) ≤ other(α)` at every level,
    /// `Greater` when `self(α) ≥ other(α)` everywhere and strictly somewhere.
    pub fn compare(&self, other: &GradualNumber) -> Result<GradualOrdering, GradualError> {
        self.check_grid(other)?;
        let pairs = || self.values.iter().zip(&other.values);
        Ok(if pairs().all(|(a, b)| a <= b) {
            GradualOrdering::LessOrEqual
        } else if pairs().all(|(a, b)| a >= b) {
            GradualOrdering::Greater
        } else {
            GradualOrdering::Incomparable
        })
    }

    /// `true` when the values are nondecreasing in α within `tol`.
    pub fn is_nondecreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - tol)
    }

    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Largest absolute difference between samples.
    pub fn max_abs_diff(&self, other: &GradualNumber) -> Result<f64, GradualError> {
        self.check_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Result of comparing two gradual numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradualOrdering {
    LessOrEqual,
    Greater,
    Incomparable,
}

pub fn gradual_add(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_add(b)
}

pub fn gradual_sub(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_sub(b)
}

pub fn gradual_mul(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_mul(b)
}

pub fn gradual_div(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_div(b)
}

pub fn gradual_min(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_min(b)
}

pub fn gradual_max(a: &GradualNumber, b: &GradualNumber) -> Result<GradualNumber, GradualError> {
    a.try_max(b)
}

pub fn gradual_le(a: &GradualNumber, b: &GradualNumber) -> Result<GradualOrdering, GradualError> {
    a.compare(b)
}

/// Lifts `f` to gradual arguments by evaluating it level by level.
pub fn gradual_extension(f: &Expr, args: &[GradualNumber]) -> Result<GradualNumber, GradualError> {
    if args.len() != f.arity() {
        return Err(GradualError::ArityMismatch {
            expected: f.arity(),
            got: args.len(),
        });
    }
    let Some(first) = args.first() else {
        let v = f.eval(&[]).map_err(|source| GradualError::Domain { alpha: 0.0, source })?;
        return GradualNumber::constant(Arc::new(AlphaGrid::default()), v);
    };
    for a in &args[1..] {
        first.check_grid(a)?;
    }
    let grid = first.grid.clone();
    let mut point = vec![0.0; args.len()];
    let mut values = Vec::with_capacity(grid.len());
    for (j, &alpha) in grid.levels.iter().enumerate() {
        for (p, a) in point.iter_mut().zip(args) {
            *p = a.values[j];
        }
        values.push(f.eval(&point).map_err(|source| GradualError::Domain { alpha, source })?);
    }
    GradualNumber::new(grid, values)
}

/// An interval of gradual numbers with nested α-cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyInterval {
    lower: GradualNumber,
    upper: GradualNumber,
}

impl FuzzyInterval {
    pub fn new(lower: GradualNumber, upper: GradualNumber) -> Result<Self, GradualError> {
        lower.check_grid(&upper)?;
        let levels = &lower.grid.levels;
        if let Some(j) = lower.values.windows(2).position(|w| w[1] < w[0] - TOL_MONO) {
            return Err(GradualError::NotMonotone {
                endpoint: "lower",
                alpha: levels[j + 1],
            });
        }
        if let Some(j) = upper.values.windows(2).position(|w| w[1] > w[0] + TOL_MONO) {
            return Err(GradualError::NotMonotone {
                endpoint: "upper",
                alpha: levels[j + 1],
            });
        }
        if let Some(j) = lower.values.iter().zip(&upper.values).position(|(l, u)| l > u) {
            return Err(GradualError::NotNested { alpha: levels[j] });
        }
        Ok(FuzzyInterval { lower, upper })
    }

    /// A fuzzy interval whose every cut is `[lo, hi]`.
    pub fn crisp(grid: Arc<AlphaGrid>, interval: Interval) -> Self {
        FuzzyInterval {
            lower: GradualNumber::constant(grid.clone(), interval.lo()).expect("finite"),
            upper: GradualNumber::constant(grid, interval.hi()).expect("finite"),
        }
    }

    pub fn lower(&self) -> &GradualNumber {
        &self.lower
    }

    pub fn upper(&self) -> &GradualNumber {
        &self.upper
    }

    pub fn grid(&self) -> &Arc<AlphaGrid> {
        &self.lower.grid
    }

    /// The α-cut at grid level `j`.
    pub fn cut(&self, j: usize) -> Interval {
        let (lo, hi) = (self.lower.values[j], self.upper.values[j]);
        // monotone slack can leave hi a hair below lo only if both are equal
        Interval::new(lo, hi.max(lo)).expect("validated fuzzy interval")
    }

    /// Membership degree of `x`: the largest α whose cut contains `x`, with
    /// linear interpolation between grid levels.
    pub fn membership(&self, x: f64) -> f64 {
        let levels = &self.grid().levels;
        let n = levels.len();
        let interp = |j: usize, v0: f64, v1: f64| {
            if v1 == v0 {
                levels[j + 1]
            } else {
                levels[j] + (x - v0) / (v1 - v0) * (levels[j + 1] - levels[j])
            }
        };
        let lo = &self.lower.values;
        let k = lo.partition_point(|&v| v <= x);
        let from_left = match k {
            0 => return 0.0,
            k if k == n => 1.0,
            k => interp(k - 1, lo[k - 1], lo[k]),
        };
        let hi = &self.upper.values;
        let k = hi.partition_point(|&v| v >= x);
        let from_right = match k {
            0 => return 0.0,
            k if k == n => 1.0,
            k => interp(k - 1, hi[k - 1], hi[k]),
        };
        from_left.min(from_right).clamp(0.0, 1.0)
    }

    pub fn support(&self) -> Interval {
        self.cut(0)
    }

    pub fn core(&self) -> Interval {
        self.cut(self.grid().len() - 1)
    }
}

pub fn membership(w: &FuzzyInterval, x: f64) -> f64 {
    w.membership(x)
}

/// Reference function of one side of an L-R fuzzy interval.
///
/// Every shape maps `u = 0` to 1 and reaches 0 at `u = 1`, so the support
/// is the core widened by exactly the spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `L(u) = max(0, 1 − u)`.
    Linear,
    /// `L(u) = max(0, 1 − u²)`.
    Quadratic,
    /// `L(u) = (e^{−r·u} − e^{−r}) / (1 − e^{−r})` on `[0, 1]`, zero beyond.
    Exponential(f64),
}

impl Shape {
    fn validate(&self) -> Result<(), GradualError> {
        match *self {
            Shape::Exponential(r) if !(r > 0.0 && r.is_finite()) => Err(GradualError::InvalidSpec(
                format!("exponential rate must be positive, got {r}"),
            )),
            _ => Ok(()),
        }
    }

    /// `L(u)` for `u ≥ 0`.
    pub fn reference(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let u = u.max(0.0);
        match *self {
            Shape::Linear => 1.0 - u,
            Shape::Quadratic => 1.0 - u * u,
            Shape::Exponential(r) => {
                let floor = (-r).exp();
                ((-r * u).exp() - floor) / (1.0 - floor)
            }
        }
    }

    /// `L⁻¹(α)` for `α ∈ [0, 1]`, in `[0, 1]`.
    pub fn inverse(&self, alpha: f64) -> f64 {
        let alpha = alpha.clamp(0.0, 1.0);
        let u = match *self {
            Shape::Linear => 1.0 - alpha,
            Shape::Quadratic => (1.0 - alpha).sqrt(),
            Shape::Exponential(r) => {
                let floor = (-r).exp();
                -(alpha * (1.0 - floor) + floor).ln() / r
            }
        };
        u.clamp(0.0, 1.0)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Linear => f.write_str("linear"),
            Shape::Quadratic => f.write_str("quadratic"),
            Shape::Exponential(r) => write!(f, "exponential({r})"),
        }
    }
}

/// Core, spreads and side shapes of an L-R fuzzy interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrSpec {
    pub core_lo: f64,
    pub core_hi: f64,
    pub spread_left: f64,
    pub spread_right: f64,
    pub shape_left: Shape,
    pub shape_right: Shape,
}

impl LrSpec {
    /// Symmetric linear (triangular or trapezoidal) fuzzy interval.
    pub fn linear(core_lo: f64, core_hi: f64, spread_left: f64, spread_right: f64) -> Self {
        LrSpec {
            core_lo,
            core_hi,
            spread_left,
            spread_right,
            shape_left: Shape::Linear,
            shape_right: Shape::Linear,
        }
    }

    pub fn validate(&self) -> Result<(), GradualError> {
        let all = [self.core_lo, self.core_hi, self.spread_left, self.spread_right];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GradualError::InvalidSpec("values must be finite".into()));
        }
        if self.core_lo > self.core_hi {
            return Err(GradualError::InvalidSpec(format!(
                "core [{}, {}] is reversed",
                self.core_lo, self.core_hi
            )));
        }
        if self.spread_left < 0.0 || self.spread_right < 0.0 {
            return Err(GradualError::InvalidSpec("spreads must be non-negative".into()));
        }
        self.shape_left.validate()?;
        self.shape_right.validate()
    }

    /// Closed-form membership function.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.core_lo {
            if self.spread_left == 0.0 {
                0.0
            } else {
                self.shape_left.reference((self.core_lo - x) / self.spread_left)
            }
        } else if x > self.core_hi {
            if self.spread_right == 0.0 {
                0.0
            } else {
                self.shape_right.reference((x - self.core_hi) / self.spread_right)
            }
        } else {
            1.0
        }
    }
}

/// Samples the gradual endpoints `core_lo − L⁻¹(α)·spread_left` and
/// `core_hi + R⁻¹(α)·spread_right` on `grid`.
pub fn from_lr(spec: &LrSpec, grid: Arc<AlphaGrid>) -> Result<FuzzyInterval, GradualError> {
    spec.validate()?;
    let lower = GradualNumber::from_fn(grid.clone(), |a| {
        spec.core_lo - spec.shape_left.inverse(a) * spec.spread_left
    })?;
    let upper = GradualNumber::from_fn(grid, |a| {
        spec.core_hi + spec.shape_right.inverse(a) * spec.spread_right
    })?;
    FuzzyInterval::new(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid() -> Arc<AlphaGrid> {
        Arc::new(AlphaGrid::default())
    }

    /// The triangular fuzzy number with endpoints α/2 and 1 − α/2.
    fn half_triangle() -> FuzzyInterval {
        from_lr(&LrSpec::linear(0.5, 0.5, 0.5, 0.5), grid()).unwrap()
    }

    fn assert_curve(g: &GradualNumber, expected: impl Fn(f64) -> f64, tol: f64) {
        for (&a, &v) in g.grid().levels().iter().zip(g.values()) {
            assert!((v - expected(a)).abs() <= tol, "at alpha {a}: {v} vs {}", expected(a));
        }
    }

    #[test]
    fn grids() {
        let g = AlphaGrid::uniform(101).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g.levels()[0], 0.0);
        assert_eq!(g.levels()[50], 0.5);
        assert_eq!(g.levels()[100], 1.0);
        assert!(AlphaGrid::uniform(1).is_err());
        assert!(AlphaGrid::from_levels(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(AlphaGrid::from_levels(vec![0.1, 1.0]).is_err());
        assert!(AlphaGrid::from_levels(vec![0.0, 0.3, 1.0]).is_ok());
    }

    #[test]
    fn lr_endpoints() {
        let x = half_triangle();
        assert_curve(x.lower(), |a| 0.5 * a, 1e-15);
        assert_curve(x.upper(), |a| 1.0 - 0.5 * a, 1e-15);

        let crisp = from_lr(&LrSpec::linear(-1.0, 2.0, 0.0, 0.0), grid()).unwrap();
        assert_curve(crisp.lower(), |_| -1.0, 0.0);
        assert_curve(crisp.upper(), |_| 2.0, 0.0);

        let tri = from_lr(&LrSpec::linear(0.0, 0.0, 1.0, 1.0), grid()).unwrap();
        assert_eq!(tri.support(), Interval::new(-1.0, 1.0).unwrap());
        // L⁻¹(0) = 1, and membership vanishes at the support ends
        assert_eq!(tri.membership(-1.0), 0.0);
        assert_eq!(tri.membership(1.0), 0.0);
        assert!(tri.membership(-1.0 + 1e-9) > 0.0);
    }

    #[test]
    fn lr_rejects_bad_specs() {
        assert!(from_lr(&LrSpec::linear(0.0, 1.0, -1.0, 0.0), grid()).is_err());
        assert!(from_lr(&LrSpec::linear(1.0, 0.0, 0.0, 0.0), grid()).is_err());
        let mut s = LrSpec::linear(0.0, 1.0, 1.0, 1.0);
        s.shape_right = Shape::Exponential(0.0);
        assert!(from_lr(&s, grid()).is_err());
    }

    #[test]
    fn shapes_invert() {
        for shape in [Shape::Linear, Shape::Quadratic, Shape::Exponential(3.0)] {
            assert_abs_diff_eq!(shape.inverse(0.0), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(shape.inverse(1.0), 0.0, epsilon = 1e-15);
            for k in 0..=20 {
                let a = k as f64 / 20.0;
                assert_abs_diff_eq!(shape.reference(shape.inverse(a)), a, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn arithmetic() {
        let x = half_triangle();
        let sum = gradual_add(x.lower(), x.upper()).unwrap();
        assert_curve(&sum, |_| 1.0, 1e-15);
        let zero = gradual_sub(x.lower(), x.lower()).unwrap();
        assert_curve(&zero, |_| 0.0, 0.0);
        let sq = gradual_mul(x.lower(), x.lower()).unwrap();
        assert_curve(&sq, |a| 0.25 * a * a, 1e-16);
        assert!(matches!(
            gradual_div(x.upper(), x.lower()),
            Err(GradualError::DivisorZeroAtLevel { alpha }) if alpha == 0.0
        ));
        let q = gradual_div(x.lower(), x.upper()).unwrap();
        assert_curve(&q, |a| 0.5 * a / (1.0 - 0.5 * a), 1e-15);
        let other = GradualNumber::constant(Arc::new(AlphaGrid::uniform(11).unwrap()), 1.0).unwrap();
        assert!(matches!(gradual_add(x.lower(), &other), Err(GradualError::GridMismatch)));
        let m = gradual_min(x.lower(), x.upper()).unwrap();
        assert_eq!(&m, x.lower());
        let m = gradual_max(x.lower(), x.upper()).unwrap();
        assert_eq!(&m, x.upper());
    }

    #[test]
    fn partial_order() {
        let g = grid();
        let lo = GradualNumber::from_fn(g.clone(), |a| 0.25 * a * a).unwrap();
        let hi = GradualNumber::from_fn(g.clone(), |a| 1.0 - a + 0.25 * a * a).unwrap();
        assert_eq!(gradual_le(&lo, &hi).unwrap(), GradualOrdering::LessOrEqual);
        assert_eq!(gradual_le(&hi, &lo).unwrap(), GradualOrdering::Greater);
        assert_eq!(gradual_le(&lo, &lo).unwrap(), GradualOrdering::LessOrEqual);
        let up = GradualNumber::from_fn(g.clone(), |a| a).unwrap();
        let down = GradualNumber::from_fn(g, |a| 1.0 - a).unwrap();
        assert_eq!(gradual_le(&up, &down).unwrap(), GradualOrdering::Incomparable);
    }

    #[test]
    fn extension() {
        let x = half_triangle();
        let sq = Expr::parse("x^2", &["x"]).unwrap();
        assert_curve(&gradual_extension(&sq, &[x.lower().clone()]).unwrap(), |a| 0.25 * a * a, 1e-16);
        assert_curve(
            &gradual_extension(&sq, &[x.upper().clone()]).unwrap(),
            |a| 1.0 - a + 0.25 * a * a,
            1e-15,
        );
        let p = Expr::parse("x*(1-x)", &["x"]).unwrap();
        assert_curve(
            &gradual_extension(&p, &[x.lower().clone()]).unwrap(),
            |a| 0.5 * a - 0.25 * a * a,
            1e-16,
        );
        let log = Expr::parse("log(x)", &["x"]).unwrap();
        assert!(matches!(
            gradual_extension(&log, &[x.lower().clone()]),
            Err(GradualError::Domain { alpha, .. }) if alpha == 0.0
        ));
        assert!(gradual_extension(&p, &[]).is_err());
    }

    #[test]
    fn membership_examples() {
        let x = half_triangle();
        assert_eq!(membership(&x, 0.5), 1.0);
        assert_eq!(membership(&x, 0.0), 0.0);
        assert_eq!(membership(&x, -0.1), 0.0);
        assert_eq!(membership(&x, 1.2), 0.0);
        assert_abs_diff_eq!(x.lower().at(0.5), 0.25);
        assert_abs_diff_eq!(membership(&x, 0.25), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(membership(&x, 0.875), 0.25, epsilon = 1e-15);
        let trap = from_lr(&LrSpec::linear(1.0, 2.0, 1.0, 0.5), grid()).unwrap();
        assert_eq!(trap.membership(1.5), 1.0);
        let crisp = from_lr(&LrSpec::linear(1.0, 2.0, 0.0, 0.0), grid()).unwrap();
        assert_eq!(crisp.membership(1.0), 1.0);
        assert_eq!(crisp.membership(0.999), 0.0);
    }

    #[test]
    fn interpolation() {
        let g = Arc::new(AlphaGrid::uniform(3).unwrap());
        let r = GradualNumber::new(g, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(r.at(0.25), 0.5);
        assert_eq!(r.at(0.75), 2.5);
        assert_eq!(r.at(1.0), 4.0);
        assert_eq!(r.at(-3.0), 0.0);
    }

    #[test]
    fn fuzzy_interval_validation() {
        let g = Arc::new(AlphaGrid::uniform(3).unwrap());
        let lo = GradualNumber::new(g.clone(), vec![0.0, 0.5, 0.4]).unwrap();
        let hi = GradualNumber::new(g.clone(), vec![2.0, 1.5, 1.0]).unwrap();
        assert!(matches!(FuzzyInterval::new(lo, hi.clone()), Err(GradualError::NotMonotone { endpoint: "lower", .. })));
        let lo = GradualNumber::new(g.clone(), vec![0.0, 0.5, 1.2]).unwrap();
        assert!(matches!(FuzzyInterval::new(lo, hi.clone()), Err(GradualError::NotNested { .. })));
        // slack within TOL_MONO is accepted
        let lo = GradualNumber::new(g.clone(), vec![0.0, 0.5, 0.5 - 1e-10]).unwrap();
        assert!(FuzzyInterval::new(lo, hi).is_ok());
        assert!(GradualNumber::new(g, vec![0.0, f64::NAN, 1.0]).is_err());
    }

    fn arb_shape() -> impl Strategy<Value = Shape> {
        prop_oneof![
            Just(Shape::Linear),
            Just(Shape::Quadratic),
            (0.1f64..8.0).prop_map(Shape::Exponential)
        ]
    }

    fn arb_spec() -> impl Strategy<Value = LrSpec> {
        (-5.0f64..5.0, 0.0f64..3.0, 0.0f64..2.0, 0.0f64..2.0, arb_shape(), arb_shape()).prop_map(
            |(c, w, l, r, sl, sr)| LrSpec {
                core_lo: c,
                core_hi: c + w,
                spread_left: l,
                spread_right: r,
                shape_left: sl,
                shape_right: sr,
            },
        )
    }

    fn arb_gradual() -> impl Strategy<Value = GradualNumber> {
        proptest::collection::vec(-3.0f64..3.0, 11)
            .prop_map(|v| GradualNumber::new(Arc::new(AlphaGrid::uniform(11).unwrap()), v).unwrap())
    }

    proptest! {
        #[test]
        fn lr_output_is_a_fuzzy_interval(spec in arb_spec()) {
            let w = from_lr(&spec, grid()).unwrap();
            prop_assert!(w.lower().is_nondecreasing(TOL_MONO));
            prop_assert!(w.upper().is_nonincreasing(TOL_MONO));
            for j in 0..w.grid().len() {
                prop_assert!(w.lower().values()[j] <= w.upper().values()[j]);
            }
        }

        #[test]
        fn membership_matches_closed_form(
            c in -5.0f64..5.0, width in 0.0f64..3.0,
            l in 0.01f64..2.0, r in 0.01f64..2.0,
            samples in proptest::collection::vec(0.0f64..1.0, 1000),
        ) {
            let spec = LrSpec::linear(c, c + width, l, r);
            let w = from_lr(&spec, grid()).unwrap();
            let (lo, hi) = (c - l - 0.5, c + width + r + 0.5);
            for t in samples {
                let x = lo + t * (hi - lo);
                prop_assert!((w.membership(x) - spec.membership(x)).abs() <= 1e-6,
                    "x = {}: {} vs {}", x, w.membership(x), spec.membership(x));
            }
        }

        #[test]
        fn arithmetic_is_pointwise(a in arb_gradual(), b in arb_gradual()) {
            let s = a.try_add(&b).unwrap();
            let d = a.try_sub(&b).unwrap();
            let m = a.try_mul(&b).unwrap();
            for j in 0..11 {
                let (x, y) = (a.values()[j], b.values()[j]);
                prop_assert_eq!(s.values()[j], x + y);
                prop_assert_eq!(d.values()[j], x - y);
                prop_assert_eq!(m.values()[j], x * y);
            }
            if let Ok(q) = a.try_div(&b) {
                for j in 0..11 {
                    prop_assert_eq!(q.values()[j], a.values()[j] / b.values()[j]);
                }
            }
        }

        #[test]
        fn order_laws(a in arb_gradual(), b in arb_gradual(), c in arb_gradual()) {
            use GradualOrdering::LessOrEqual as Le;
            prop_assert_eq!(a.compare(&a).unwrap(), Le);
            let lo = a.try_min(&b).unwrap();
            let hi = a.try_max(&b).unwrap();
            prop_assert_eq!(lo.compare(&hi).unwrap(), Le);
            if a.compare(&b).unwrap() == Le && b.compare(&a).unwrap() == Le {
                prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
            }
            // transitivity on a forced chain lo ≤ hi ≤ max(hi, c)
            let top = hi.try_max(&c).unwrap();
            prop_assert_eq!(hi.compare(&top).unwrap(), Le);
            prop_assert_eq!(lo.compare(&top).unwrap(), Le);
        }
    }
}
