//! Crisp interval arithmetic, boxes of intervals, and the vertex method.
//!
//! Endpoints are plain `f64` values with round-to-nearest semantics. No
//! outward rounding is performed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::expr::{EvalError, Expr};

/// Default cap on the arity accepted by [`extreme_configurations`].
pub const DEFAULT_MAX_VERTEX_ARITY: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("invalid interval [{lo}, {hi}]: endpoints must be finite with lo <= hi")]
    Invalid { lo: f64, hi: f64 },
    #[error("divisor interval [{lo}, {hi}] contains zero")]
    DivisorContainsZero { lo: f64, hi: f64 },
    #[error("{op} is undefined on part of {interval}")]
    DomainViolation { op: &'static str, interval: Interval },
    #[error("box must have at least one dimension")]
    EmptyBox,
    #[error("arity {arity} exceeds the vertex enumeration cap of {cap}")]
    ArityTooLarge { arity: usize, cap: usize },
    #[error("configuration has {got} values but the box has {expected} dimensions")]
    ArityMismatch { expected: usize, got: usize },
    #[error("configuration value {value} lies outside dimension {dim} ({interval})")]
    Infeasible { dim: usize, value: f64, interval: Interval },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(IntervalError::Invalid { lo, hi })
        }
    }

    /// The degenerate interval `[c, c]`.
    ///
    /// # Panics
    ///
    /// Panics if `c` is not finite.
    pub fn point(c: f64) -> Self {
        assert!(c.is_finite(), "degenerate interval endpoint must be finite");
        Interval { lo: c, hi: c }
    }

    /// Smallest interval containing every value in `values`.
    fn hull(values: &[f64]) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `true` when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && 0.0 <= rhs.hi {
            return Err(IntervalError::DivisorContainsZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        Ok(Interval::hull(&[
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ]))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::hull(&[
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

pub fn interval_add(a: Interval, b: Interval) -> Interval {
    a + b
}

pub fn interval_sub(a: Interval, b: Interval) -> Interval {
    a - b
}

pub fn interval_mul(a: Interval, b: Interval) -> Interval {
    a * b
}

pub fn interval_div(a: Interval, b: Interval) -> Result<Interval, IntervalError> {
    a.checked_div(b)
}

/// Cartesian product of intervals, one per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self, IntervalError> {
        if dims.is_empty() {
            return Err(IntervalError::EmptyBox);
        }
        Ok(IntervalBox { dims })
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn lower_corner(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::lo).collect()
    }

    pub fn upper_corner(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::hi).collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dims.len() && self.dims.iter().zip(point).all(|(d, &x)| d.contains(x))
    }

    /// Coordinatewise projection onto the box.
    pub fn project(&self, point: &[f64]) -> Vec<f64> {
        self.dims.iter().zip(point).map(|(d, &x)| d.clamp(x)).collect()
    }

    pub fn project_in_place(&self, point: &mut [f64]) {
        for (x, d) in point.iter_mut().zip(&self.dims) {
            *x = d.clamp(*x);
        }
    }

    /// Validates `values` against the box and wraps them as a configuration.
    pub fn configuration(&self, values: Vec<f64>) -> Result<Configuration, IntervalError> {
        if values.len() != self.dims.len() {
            return Err(IntervalError::ArityMismatch {
                expected: self.dims.len(),
                got: values.len(),
            });
        }
        for (dim, (d, &value)) in self.dims.iter().zip(&values).enumerate() {
            if !d.contains(value) {
                return Err(IntervalError::Infeasible {
                    dim,
                    value,
                    interval: *d,
                });
            }
        }
        Ok(Configuration { values })
    }
}

/// A point of an [`IntervalBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    values: Vec<f64>,
}

impl Configuration {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Every configuration whose coordinates are all interval endpoints.
///
/// The `2ⁿ` endpoint choices are enumerated in binary order (bit `i` selects
/// `hi` for dimension `i`), then exact duplicates produced by degenerate
/// dimensions are dropped.
pub fn extreme_configurations(bx: &IntervalBox) -> Result<Vec<Configuration>, IntervalError> {
    extreme_configurations_capped(bx, DEFAULT_MAX_VERTEX_ARITY)
}

pub fn extreme_configurations_capped(
    bx: &IntervalBox,
    cap: usize,
) -> Result<Vec<Configuration>, IntervalError> {
    let mut out: Vec<Configuration> = raw_vertices(bx, cap)?
        .into_iter()
        .map(|values| Configuration { values })
        .collect();
    let mut seen = Vec::with_capacity(out.len());
    out.retain(|c| {
        if seen.contains(&c.values) {
            false
        } else {
            seen.push(c.values.clone());
            true
        }
    });
    Ok(out)
}

/// All `2ⁿ` endpoint tuples, duplicates included.
pub(crate) fn raw_vertices(bx: &IntervalBox, cap: usize) -> Result<Vec<Vec<f64>>, IntervalError> {
    let n = bx.arity();
    if n > cap {
        return Err(IntervalError::ArityTooLarge { arity: n, cap });
    }
    Ok((0..1usize << n)
        .map(|mask| vertex(bx, mask))
        .collect())
}

pub(crate) fn vertex(bx: &IntervalBox, mask: usize) -> Vec<f64> {
    bx.dims
        .iter()
        .enumerate()
        .map(|(i, d)| if mask >> i & 1 == 1 { d.hi } else { d.lo })
        .collect()
}

/// Range of `f` over `bx` assuming `f` is monotone in each argument.
///
/// Monotonicity is not checked. For non-monotone functions the result can
/// under-estimate the true range; use the box optimizer instead.
pub fn vertex_method(f: &Expr, bx: &IntervalBox) -> Result<Interval, IntervalError> {
    if f.arity() != bx.arity() {
        return Err(IntervalError::ArityMismatch {
            expected: f.arity(),
            got: bx.arity(),
        });
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for config in extreme_configurations(bx)? {
        let v = f.eval(config.values())?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Interval::new(lo, hi)
}
