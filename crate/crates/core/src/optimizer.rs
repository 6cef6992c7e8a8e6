//! Range of a differentiable function over a box via its KKT points.
//!
//! The minimum of `f` over `×ᵢ[loᵢ, hiᵢ]` is the smallest objective among
//! points satisfying the first-order conditions of the bound-constrained
//! problem; the maximum is the same construction applied to `-f`. A point is
//! accepted as a KKT point when its projected-gradient residual
//! `‖x − P(x − ∇f(x))‖∞` is at most `tol_kkt`; the bound multipliers are then
//! read off the gradient.
//!
//! Univariate problems enumerate the candidates exactly: both endpoints plus
//! every bracketed root of `f′`. Higher arities run projected gradient descent
//! from many starts (box vertices plus a Latin hypercube), which is a
//! heuristic: the set of KKT points it returns is a finite sample of what may
//! be an infinite set.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::interval::{self, Interval, IntervalBox};

/// Candidates closer than this in the ∞-norm are merged.
pub const DEDUP_TOLERANCE: f64 = 1e-7;
/// Sufficient-decrease constant of the Armijo line search.
pub const ARMIJO_C: f64 = 1e-4;
/// Vertices used as starts; boxes with more vertices get a random subset.
pub const MAX_VERTEX_STARTS: usize = 32;
/// Cap on the default start count.
pub const MAX_DEFAULT_STARTS: usize = 64;
/// Largest move of one descent iteration, as a fraction of the widest box side.
pub const MAX_MOVE_FRACTION: f64 = 0.1;

const MAX_HALVINGS: usize = 60;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("expression has {expected} variables but the box has {got} dimensions")]
    ArityMismatch { expected: usize, got: usize },
    #[error("point is not feasible for the box")]
    Infeasible,
    #[error("KKT residual {residual:e} exceeds tolerance {tol:e}")]
    NotAKktPoint { residual: f64, tol: f64 },
    #[error("no start converged to a KKT point; best incumbent {best_value} is not certified")]
    NoConvergedCandidate { best_value: f64, best_point: Vec<f64> },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

impl Sense {
    /// `+1` for minimization, `-1` for maximization.
    fn sign(self) -> f64 {
        match self {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        }
    }

    /// `true` when `a` is strictly better than `b`.
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Min => a < b,
            Sense::Max => a > b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol_kkt: f64,
    pub tol_step: f64,
    pub max_iters: usize,
    /// Start count for multi-start descent; `None` means `min(8n + 2ⁿ, 64)`.
    pub n_starts: Option<usize>,
    pub seed: u64,
    /// Uniform cells used to bracket roots of `f′` in one dimension.
    pub grid_1d: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_kkt: 1e-8,
            tol_step: 1e-10,
            max_iters: 500,
            n_starts: None,
            seed: 0,
            grid_1d: 1024,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let bad = |m: &str| Err(OptimizeError::InvalidConfig(m.to_owned()));
        if !(self.tol_kkt > 0.0 && self.tol_kkt.is_finite()) {
            return bad("tol_kkt must be positive");
        }
        if !(self.tol_step > 0.0 && self.tol_step.is_finite()) {
            return bad("tol_step must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.n_starts == Some(0) {
            return bad("n_starts must be at least 1");
        }
        if self.grid_1d == 0 {
            return bad("grid_1d must be at least 1");
        }
        Ok(())
    }

    pub fn starts_for(&self, arity: usize) -> usize {
        self.n_starts.unwrap_or_else(|| {
            let vertices = 1usize.checked_shl(arity as u32).unwrap_or(usize::MAX);
            (8 * arity).saturating_add(vertices).min(MAX_DEFAULT_STARTS)
        })
    }
}

/// A configuration satisfying the KKT system, with its bound multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktPoint {
    pub x: Vec<f64>,
    /// Multipliers of `xᵢ − loᵢ ≥ 0`.
    pub lambda_lower: Vec<f64>,
    /// Multipliers of `hiᵢ − xᵢ ≥ 0`.
    pub lambda_upper: Vec<f64>,
    pub residual: f64,
    /// `f(x)` in the caller's sign, whatever the sense.
    pub objective: f64,
}

impl KktPoint {
    /// `‖s·∇f − λ_lower + λ_upper‖∞` with `s = ±1` for the sense.
    pub fn stationarity_error(&self, gradient: &[f64], sense: Sense) -> f64 {
        gradient
            .iter()
            .zip(&self.lambda_lower)
            .zip(&self.lambda_upper)
            .map(|((g, l), u)| (sense.sign() * g - l + u).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of dual feasibility, primal feasibility and
    /// complementary slackness.
    pub fn condition_violation(&self, bx: &IntervalBox) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, d) in bx.dims().iter().enumerate() {
            let (x, l, u) = (self.x[i], self.lambda_lower[i], self.lambda_upper[i]);
            worst = worst
                .max(-l)
                .max(-u)
                .max(d.lo() - x)
                .max(x - d.hi())
                .max((l * (x - d.lo())).abs())
                .max((u * (d.hi() - x)).abs());
        }
        worst
    }
}

/// Finite representatives of the KKT set for one optimization sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub points: Vec<KktPoint>,
    pub sense: Sense,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The candidate with the best objective for the set's sense.
    pub fn best(&self) -> Option<&KktPoint> {
        self.points.iter().fold(None, |acc: Option<&KktPoint>, p| match acc {
            Some(a) if !self.sense.better(p.objective, a.objective) => Some(a),
            _ => Some(p),
        })
    }
}

/// Outcome of a box optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxOptimum {
    /// Optimal objective in the caller's sign.
    pub value: f64,
    pub argopt: Vec<f64>,
    pub candidates: CandidateSet,
    /// `false` when the value does not come from a converged KKT point.
    pub certified: bool,
}

impl BoxOptimum {
    pub fn require_certified(self) -> Result<BoxOptimum, OptimizeError> {
        if self.certified {
            Ok(self)
        } else {
            Err(OptimizeError::NoConvergedCandidate {
                best_value: self.value,
                best_point: self.argopt,
            })
        }
    }
}

fn check_point(f: &Expr, bx: &IntervalBox, x: &[f64]) -> Result<(), OptimizeError> {
    check_arity(f, bx)?;
    if !bx.contains(x) {
        return Err(OptimizeError::Infeasible);
    }
    Ok(())
}

fn check_arity(f: &Expr, bx: &IntervalBox) -> Result<(), OptimizeError> {
    if f.arity() != bx.arity() {
        return Err(OptimizeError::ArityMismatch {
            expected: f.arity(),
            got: bx.arity(),
        });
    }
    Ok(())
}

/// `‖x − P(x − s·g)‖∞`.
fn projected_residual(bx: &IntervalBox, x: &[f64], g: &[f64], sign: f64) -> f64 {
    bx.dims()
        .iter()
        .zip(x)
        .zip(g)
        .map(|((d, &xi), &gi)| (xi - d.clamp(xi - sign * gi)).abs())
        .fold(0.0, f64::max)
}

/// Multipliers implied by the gradient `s·g` at `x`.
fn multipliers(bx: &IntervalBox, x: &[f64], g: &[f64], sign: f64) -> (Vec<f64>, Vec<f64>) {
    let mut lower = vec![0.0; x.len()];
    let mut upper = vec![0.0; x.len()];
    for (i, d) in bx.dims().iter().enumerate() {
        let gs = sign * g[i];
        if x[i] == d.lo() {
            lower[i] = gs.max(0.0);
        }
        if x[i] == d.hi() {
            upper[i] = (-gs).max(0.0);
        }
    }
    (lower, upper)
}

/// Projected-gradient KKT residual of `x` for minimizing `f` over `bx`.
///
/// Zero exactly when `x` satisfies the KKT system with the multipliers of
/// [`recover_multipliers`].
pub fn kkt_residual(f: &Expr, bx: &IntervalBox, x: &[f64]) -> Result<f64, OptimizeError> {
    kkt_residual_for(f, bx, x, Sense::Min)
}

pub fn kkt_residual_for(
    f: &Expr,
    bx: &IntervalBox,
    x: &[f64],
    sense: Sense,
) -> Result<f64, OptimizeError> {
    check_point(f, bx, x)?;
    let g = f.gradient(x)?;
    Ok(projected_residual(bx, x, &g, sense.sign()))
}

/// Bound multipliers `(λ_lower, λ_upper)` of a KKT point for minimization.
pub fn recover_multipliers(
    f: &Expr,
    bx: &IntervalBox,
    x: &[f64],
    tol_kkt: f64,
) -> Result<(Vec<f64>, Vec<f64>), OptimizeError> {
    recover_multipliers_for(f, bx, x, tol_kkt, Sense::Min)
}

pub fn recover_multipliers_for(
    f: &Expr,
    bx: &IntervalBox,
    x: &[f64],
    tol_kkt: f64,
    sense: Sense,
) -> Result<(Vec<f64>, Vec<f64>), OptimizeError> {
    check_point(f, bx, x)?;
    let g = f.gradient(x)?;
    let residual = projected_residual(bx, x, &g, sense.sign());
    if residual > tol_kkt {
        return Err(OptimizeError::NotAKktPoint {
            residual,
            tol: tol_kkt,
        });
    }
    Ok(multipliers(bx, x, &g, sense.sign()))
}

/// Builds a [`KktPoint`] if `x` passes the residual test.
fn kkt_point(
    f: &Expr,
    bx: &IntervalBox,
    x: Vec<f64>,
    sense: Sense,
    tol_kkt: f64,
) -> Result<Option<KktPoint>, EvalError> {
    let (objective, g) = f.value_and_gradient(&x)?;
    let residual = projected_residual(bx, &x, &g, sense.sign());
    if residual > tol_kkt {
        return Ok(None);
    }
    let (lambda_lower, lambda_upper) = multipliers(bx, &x, &g, sense.sign());
    Ok(Some(KktPoint {
        x,
        lambda_lower,
        lambda_upper,
        residual,
        objective,
    }))
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn inf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sorts lexicographically, then keeps the first of every cluster of points
/// within [`DEDUP_TOLERANCE`] of an already kept point.
fn dedup_points(mut points: Vec<KktPoint>) -> Vec<KktPoint> {
    points.sort_by(|a, b| lexicographic(&a.x, &b.x));
    let mut kept: Vec<KktPoint> = Vec::with_capacity(points.len());
    for p in points {
        if kept.iter().all(|k| inf_distance(&k.x, &p.x) > DEDUP_TOLERANCE) {
            kept.push(p);
        }
    }
    kept
}

/// KKT points of a univariate `f` on `interval` for the given sense.
///
/// Interior candidates are roots of `f′` bracketed by sign changes on a
/// uniform grid of `cfg.grid_1d` cells and bisected to `cfg.tol_step`; grid
/// nodes where `f′` vanishes exactly are taken as they are. Endpoints are
/// included when they satisfy the KKT conditions for `sense`.
pub fn enumerate_kkt_1d(
    f: &Expr,
    interval: Interval,
    sense: Sense,
    cfg: &SolverConfig,
) -> Result<CandidateSet, OptimizeError> {
    cfg.validate()?;
    let bx = IntervalBox::new(vec![interval]).map_err(|_| OptimizeError::Infeasible)?;
    check_arity(f, &bx)?;
    let (lo, hi) = (interval.lo(), interval.hi());
    let derivative = |x: f64| f.gradient(&[x]).map(|g| g[0]);

    let mut xs = vec![lo, hi];
    if hi > lo {
        let cells = cfg.grid_1d;
        let node = |k: usize| {
            if k == cells {
                hi
            } else {
                lo + (hi - lo) * k as f64 / cells as f64
            }
        };
        let mut left = (lo, derivative(lo)?);
        for k in 1..=cells {
            let x = node(k);
            let right = (x, derivative(x)?);
            if left.1 == 0.0 {
                xs.push(left.0);
            } else if left.1 * right.1 < 0.0 {
                xs.push(bisect_root(&derivative, left, right, cfg)?);
            }
            left = right;
        }
    }

    let mut points = Vec::new();
    for x in xs {
        if let Some(p) = kkt_point(f, &bx, vec![x], sense, cfg.tol_kkt)? {
            points.push(p);
        }
    }
    Ok(CandidateSet {
        points: dedup_points(points),
        sense,
    })
}

fn bisect_root(
    derivative: &dyn Fn(f64) -> Result<f64, EvalError>,
    (mut a, mut ga): (f64, f64),
    (mut b, _): (f64, f64),
    cfg: &SolverConfig,
) -> Result<f64, EvalError> {
    let mut mid = 0.5 * (a + b);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = derivative(mid)?;
        if gm == 0.0 || (b - a <= cfg.tol_step && gm.abs() <= cfg.tol_kkt) {
            break;
        }
        if ga * gm < 0.0 {
            b = mid;
        } else {
            a = mid;
            ga = gm;
        }
    }
    Ok(mid)
}

/// Minimum of `f` over `bx`.
pub fn minimize_on_box(
    f: &Expr,
    bx: &IntervalBox,
    cfg: &SolverConfig,
) -> Result<BoxOptimum, OptimizeError> {
    optimize_on_box(f, bx, cfg, Sense::Min, &[])
}

/// Maximum of `f` over `bx`, found as the minimum of `-f`.
pub fn maximize_on_box(
    f: &Expr,
    bx: &IntervalBox,
    cfg: &SolverConfig,
) -> Result<BoxOptimum, OptimizeError> {
    optimize_on_box(f, bx, cfg, Sense::Max, &[])
}

/// Optimizes `f` over `bx` in the given sense. `warm_starts` are projected
/// onto the box and tried in addition to the regular start set; they are
/// ignored for univariate problems.
pub fn optimize_on_box(
    f: &Expr,
    bx: &IntervalBox,
    cfg: &SolverConfig,
    sense: Sense,
    warm_starts: &[Vec<f64>],
) -> Result<BoxOptimum, OptimizeError> {
    cfg.validate()?;
    check_arity(f, bx)?;
    if bx.arity() == 1 {
        return optimize_1d(f, bx.dims()[0], cfg, sense);
    }

    let mut starts = start_points(bx, cfg);
    starts.extend(warm_starts.iter().map(|w| bx.project(w)));

    let mut converged = Vec::new();
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let run = descend(f, bx, start, sense, cfg)?;
        if incumbent.as_ref().is_none_or(|(v, _)| sense.better(run.objective, *v)) {
            incumbent = Some((run.objective, run.x.clone()));
        }
        if run.converged {
            if let Some(p) = kkt_point(f, bx, run.x, sense, cfg.tol_kkt)? {
                converged.push(p);
            }
        }
    }
    let candidates = CandidateSet {
        points: dedup_points(converged),
        sense,
    };
    let (inc_value, inc_point) = incumbent.expect("at least one start");
    Ok(assemble(candidates, inc_value, inc_point, sense))
}

/// Picks the best certified candidate unless an uncertified iterate beats it
/// by more than rounding noise.
fn assemble(candidates: CandidateSet, inc_value: f64, inc_point: Vec<f64>, sense: Sense) -> BoxOptimum {
    let beats = |best: f64| {
        let slack = 1e-12 * (1.0 + best.abs());
        sense.better(inc_value, best - sense.sign() * slack)
    };
    match candidates.best() {
        Some(best) if !beats(best.objective) => BoxOptimum {
            value: best.objective,
            argopt: best.x.clone(),
            candidates,
            certified: true,
        },
        _ => BoxOptimum {
            value: inc_value,
            argopt: inc_point,
            candidates,
            certified: false,
        },
    }
}

fn optimize_1d(
    f: &Expr,
    interval: Interval,
    cfg: &SolverConfig,
    sense: Sense,
) -> Result<BoxOptimum, OptimizeError> {
    let candidates = enumerate_kkt_1d(f, interval, sense, cfg)?;
    // incumbent over the grid nodes, so a missed root cannot hide a better value
    let cells = if interval.is_degenerate() { 0 } else { cfg.grid_1d };
    let mut inc = (f.eval(&[interval.lo()])?, interval.lo());
    for k in 1..=cells {
        let x = if k == cells {
            interval.hi()
        } else {
            interval.lo() + interval.width() * k as f64 / cells as f64
        };
        let v = f.eval(&[x])?;
        if sense.better(v, inc.0) {
            inc = (v, x);
        }
    }
    Ok(assemble(candidates, inc.0, vec![inc.1], sense))
}

/// Box vertices (all of them up to [`MAX_VERTEX_STARTS`], otherwise a random
/// subset of that size) followed by Latin-hypercube interior points filling
/// the remainder of the start budget.
fn start_points(bx: &IntervalBox, cfg: &SolverConfig) -> Vec<Vec<f64>> {
    let n = bx.arity();
    let budget = cfg.starts_for(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = Vec::with_capacity(budget.max(MAX_VERTEX_STARTS));

    let all_vertices = n < usize::BITS as usize && (1usize << n) <= MAX_VERTEX_STARTS;
    if all_vertices {
        starts.extend((0..1usize << n).map(|mask| interval::vertex(bx, mask)));
    } else {
        while starts.len() < MAX_VERTEX_STARTS {
            let v: Vec<f64> = bx
                .dims()
                .iter()
                .map(|d| if rng.gen_bool(0.5) { d.hi() } else { d.lo() })
                .collect();
            if !starts.contains(&v) {
                starts.push(v);
            }
        }
    }

    let interior = budget.saturating_sub(starts.len());
    if interior > 0 {
        let strata: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut p: Vec<usize> = (0..interior).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        #[allow(clippy::needless_range_loop)]
        for k in 0..interior {
            let point = bx
                .dims()
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let u: f64 = rng.gen();
                    d.clamp(d.lo() + d.width() * (strata[i][k] as f64 + u) / interior as f64)
                })
                .collect();
            starts.push(point);
        }
    }
    starts
}

struct Descent {
    x: Vec<f64>,
    objective: f64,
    converged: bool,
}

/// Projected gradient descent on `s·f` with Barzilai–Borwein trial steps and
/// Armijo backtracking by halving along the projection arc.
fn descend(
    f: &Expr,
    bx: &IntervalBox,
    mut x: Vec<f64>,
    sense: Sense,
    cfg: &SolverConfig,
) -> Result<Descent, EvalError> {
    let sign = sense.sign();
    let (value, mut g) = f.value_and_gradient(&x)?;
    let mut fx = sign * value;
    g.iter_mut().for_each(|gi| *gi *= sign);
    let mut step: f64 = 1.0;
    let mut last_move = f64::INFINITY;
    let reach = MAX_MOVE_FRACTION * bx.dims().iter().map(|d| d.width()).fold(0.0, f64::max);

    for _ in 0..cfg.max_iters {
        if projected_residual(bx, &x, &g, 1.0) <= cfg.tol_kkt {
            if let Some(done) = snap_to_bounds(f, bx, &x, &g, sign, cfg)? {
                return Ok(done);
            }
            return Ok(Descent { x, objective: sign * fx, converged: true });
        }
        if last_move <= cfg.tol_step {
            break;
        }
        let mut accepted = None;
        // long projected steps jump across basins; keep each move local
        let g_max = g.iter().fold(0.0f64, |m, gi| m.max(gi.abs()));
        let mut t = if g_max > 0.0 { step.min(reach / g_max) } else { step };
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = bx
                .dims()
                .iter()
                .zip(&x)
                .zip(&g)
                .map(|((d, &xi), &gi)| d.clamp(xi - t * gi))
                .collect();
            let predicted: f64 = trial.iter().zip(&x).zip(&g).map(|((a, b), gi)| (a - b) * gi).sum();
            let ft = sign * f.eval(&trial)?;
            // below the rounding floor of f the Armijo test cannot discriminate
            let noise = 8.0 * f64::EPSILON * (1.0 + fx.abs());
            if ft <= fx + ARMIJO_C * predicted || (predicted.abs() <= noise && ft <= fx + noise) {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft)) = accepted else { break };

        let (_, mut g_new) = f.value_and_gradient(&trial)?;
        g_new.iter_mut().for_each(|gi| *gi *= sign);
        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let ss: f64 = s.iter().map(|v| v * v).sum();
        let sy: f64 = s.iter().zip(g_new.iter().zip(&g)).map(|(si, (a, b))| si * (a - b)).sum();
        step = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e12) } else { (2.0 * t).min(1e12) };
        last_move = inf_distance(&trial, &x);
        x = trial;
        fx = ft;
        g = g_new;
    }
    let converged = projected_residual(bx, &x, &g, 1.0) <= cfg.tol_kkt;
    if converged {
        if let Some(done) = snap_to_bounds(f, bx, &x, &g, sign, cfg)? {
            return Ok(done);
        }
    }
    Ok(Descent { x, objective: sign * fx, converged })
}

/// Moves coordinates lying within `tol_kkt` of a bound that the descent
/// direction points at exactly onto it, so that their multipliers are
/// recovered. Returns `None` when nothing moved or the moved point fails
/// the residual test.
fn snap_to_bounds(
    f: &Expr,
    bx: &IntervalBox,
    x: &[f64],
    g: &[f64],
    sign: f64,
    cfg: &SolverConfig,
) -> Result<Option<Descent>, EvalError> {
    let mut snapped = x.to_vec();
    let mut moved = false;
    for (i, d) in bx.dims().iter().enumerate() {
        let xi = x[i];
        if g[i] > 0.0 && xi != d.lo() && xi - d.lo() <= cfg.tol_kkt {
            snapped[i] = d.lo();
            moved = true;
        } else if g[i] < 0.0 && xi != d.hi() && d.hi() - xi <= cfg.tol_kkt {
            snapped[i] = d.hi();
            moved = true;
        }
    }
    if !moved {
        return Ok(None);
    }
    let (value, mut g_new) = f.value_and_gradient(&snapped)?;
    g_new.iter_mut().for_each(|gi| *gi *= sign);
    if projected_residual(bx, &snapped, &g_new, 1.0) > cfg.tol_kkt {
        return Ok(None);
    }
    Ok(Some(Descent {
        x: snapped,
        objective: value,
        converged: true,
    }))
}
