//! Point evaluation, forward-mode gradients and naive interval evaluation.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use thiserror::Error;

use super::{BinaryOp, Expr, Node, UnaryOp};
use crate::interval::{Interval, IntervalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainReason {
    LogOfNonPositive,
    SqrtOfNegative,
    DivisionByZero,
    /// General power `a^b` needs `a > 0`.
    PowerOfNonPositive,
    /// Derivative does not exist at the point (e.g. `sqrt` at zero).
    NotDifferentiable,
    NonFinite,
}

impl fmt::Display for DomainReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainReason::LogOfNonPositive => "log of a non-positive value",
            DomainReason::SqrtOfNegative => "sqrt of a negative value",
            DomainReason::DivisionByZero => "division by zero",
            DomainReason::PowerOfNonPositive => "non-integer power of a non-positive base",
            DomainReason::NotDifferentiable => "not differentiable here",
            DomainReason::NonFinite => "non-finite result",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    /// `node` is the printed subexpression that failed.
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: DomainReason },
    #[error("point has {got} coordinates but the expression has {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
}

/// Value type the tree walker can evaluate over.
trait Scalar: Copy {
    fn constant(c: f64) -> Self;
    fn value(self) -> f64;
    /// Tangent component; zero for plain reals.
    fn tangent(self) -> f64;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, k: i32) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(self) -> f64 {
        self
    }
    fn tangent(self) -> f64 {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, k: i32) -> Self {
        small_powi(self, k)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// `x^k`, by repeated multiplication for the small exponents common in
/// polynomials.
fn small_powi(x: f64, k: i32) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        2 => x * x,
        3 => x * x * x,
        4 => {
            let s = x * x;
            s * s
        }
        _ => x.powi(k),
    }
}

/// Dual number `v + d·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dual {
    v: f64,
    d: f64,
}

impl Scalar for Dual {
    fn constant(c: f64) -> Self {
        Dual { v: c, d: 0.0 }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn tangent(self) -> f64 {
        self.d
    }
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
    fn mul(self, o: Self) -> Self {
        Dual {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
        }
    }
    fn div(self, o: Self) -> Self {
        Dual {
            v: self.v / o.v,
            d: (self.d * o.v - self.v * o.d) / (o.v * o.v),
        }
    }
    fn neg(self) -> Self {
        Dual { v: -self.v, d: -self.d }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual { v: e, d: e * self.d }
    }
    fn ln(self) -> Self {
        Dual {
            v: self.v.ln(),
            d: self.d / self.v,
        }
    }
    fn sin(self) -> Self {
        Dual {
            v: self.v.sin(),
            d: self.v.cos() * self.d,
        }
    }
    fn cos(self) -> Self {
        Dual {
            v: self.v.cos(),
            d: -self.v.sin() * self.d,
        }
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d = if self.d == 0.0 { 0.0 } else { self.d / (2.0 * s) };
        Dual { v: s, d }
    }
    fn powi(self, k: i32) -> Self {
        let d = match k {
            0 => 0.0,
            _ if self.d == 0.0 => 0.0,
            _ => k as f64 * small_powi(self.v, k - 1) * self.d,
        };
        Dual { v: small_powi(self.v, k), d }
    }
    fn is_finite(self) -> bool {
        self.v.is_finite() && self.d.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Instr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp),
    Binary(BinaryOp),
    PowI(i32),
}

/// Postfix form of the tree for fast repeated evaluation.
///
/// Performs the same domain checks as the tree walker but only reports
/// failure; callers re-walk the tree to build the error.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tape {
    code: Vec<Instr>,
    depth: usize,
}

impl Tape {
    pub(crate) fn compile(root: &Node) -> Tape {
        fn emit(node: &Node, code: &mut Vec<Instr>, height: usize, depth: &mut usize) {
            *depth = (*depth).max(height + 1);
            match node {
                Node::Const(c) => code.push(Instr::Const(*c)),
                Node::Var(i) => code.push(Instr::Var(*i)),
                Node::Unary(op, child) => {
                    emit(child, code, height, depth);
                    code.push(Instr::Unary(*op));
                }
                Node::Binary(BinaryOp::Pow, lhs, rhs) if rhs.as_integer().is_some() => {
                    emit(lhs, code, height, depth);
                    code.push(Instr::PowI(rhs.as_integer().unwrap()));
                }
                Node::Binary(op, lhs, rhs) => {
                    emit(lhs, code, height, depth);
                    emit(rhs, code, height + 1, depth);
                    code.push(Instr::Binary(*op));
                }
            }
        }
        let mut code = Vec::new();
        let mut depth = 0;
        emit(root, &mut code, 0, &mut depth);
        Tape { code, depth }
    }

    fn run<T: Scalar>(&self, var: impl Fn(usize) -> T) -> Option<T> {
        const INLINE: usize = 32;
        if self.depth <= INLINE {
            self.exec(&mut [T::constant(0.0); INLINE], var)
        } else {
            self.exec(&mut vec![T::constant(0.0); self.depth], var)
        }
    }

    fn exec<T: Scalar>(&self, stack: &mut [T], var: impl Fn(usize) -> T) -> Option<T> {
        let mut sp = 0;
        for ins in &self.code {
            let out = match *ins {
                Instr::Const(c) => T::constant(c),
                Instr::Var(i) => var(i),
                Instr::Unary(op) => {
                    sp -= 1;
                    let a = stack[sp];
                    match op {
                        UnaryOp::Neg => a.neg(),
                        UnaryOp::Exp => a.exp(),
                        UnaryOp::Log if a.value() <= 0.0 => return None,
                        UnaryOp::Log => a.ln(),
                        UnaryOp::Sin => a.sin(),
                        UnaryOp::Cos => a.cos(),
                        UnaryOp::Sqrt if a.value() < 0.0 => return None,
                        UnaryOp::Sqrt if a.value() == 0.0 && a.tangent() != 0.0 => return None,
                        UnaryOp::Sqrt => a.sqrt(),
                    }
                }
                Instr::PowI(k) => {
                    sp -= 1;
                    let a = stack[sp];
                    if k < 0 && a.value() == 0.0 {
                        return None;
                    }
                    a.powi(k)
                }
                Instr::Binary(op) => {
                    sp -= 2;
                    let (a, b) = (stack[sp], stack[sp + 1]);
                    match op {
                        BinaryOp::Add => a.add(b),
                        BinaryOp::Sub => a.sub(b),
                        BinaryOp::Mul => a.mul(b),
                        BinaryOp::Div if b.value() == 0.0 => return None,
                        BinaryOp::Div => a.div(b),
                        BinaryOp::Pow if a.value() > 0.0 => b.mul(a.ln()).exp(),
                        BinaryOp::Pow
                            if a.value() == 0.0 && b.value() > 0.0 && a.tangent() == 0.0 && b.tangent() == 0.0 =>
                        {
                            T::constant(0.0)
                        }
                        BinaryOp::Pow => return None,
                    }
                }
            };
            if !out.is_finite() {
                return None;
            }
            stack[sp] = out;
            sp += 1;
        }
        (sp == 1).then(|| stack[0])
    }
}

impl Expr {
    fn check_arity(&self, n: usize) -> Result<(), EvalError> {
        if n == self.arity() {
            Ok(())
        } else {
            Err(EvalError::ArityMismatch {
                expected: self.arity(),
                got: n,
            })
        }
    }

    fn domain(&self, node: &Node, reason: DomainReason) -> EvalError {
        EvalError::Domain {
            node: self.node_text(node),
            reason,
        }
    }

    /// Evaluates `f` at `point`, one coordinate per declared variable.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.check_arity(point.len())?;
        match self.tape.run(|i| point[i]) {
            Some(v) => Ok(v),
            None => self.walk(&self.root, &|i| point[i]),
        }
    }

    /// Partial derivatives of `f` at `point` by forward-mode differentiation,
    /// one tangent sweep per variable.
    pub fn gradient(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.value_and_gradient(point).map(|(_, g)| g)
    }

    pub fn value_and_gradient(&self, point: &[f64]) -> Result<(f64, Vec<f64>), EvalError> {
        self.check_arity(point.len())?;
        if point.is_empty() {
            return Ok((self.eval(point)?, Vec::new()));
        }
        let mut grad = Vec::with_capacity(point.len());
        let mut value = 0.0;
        for seed in 0..point.len() {
            let seeded = |i: usize| Dual {
                v: point[i],
                d: if i == seed { 1.0 } else { 0.0 },
            };
            let r = match self.tape.run(seeded) {
                Some(r) => r,
                None => self.walk(&self.root, &seeded)?,
            };
            value = r.v;
            grad.push(r.d);
        }
        Ok((value, grad))
    }

    fn walk<T: Scalar>(&self, node: &Node, var: &dyn Fn(usize) -> T) -> Result<T, EvalError> {
        let out = match node {
            Node::Const(c) => T::constant(*c),
            Node::Var(i) => var(*i),
            Node::Unary(op, child) => {
                let a = self.walk(child, var)?;
                match op {
                    UnaryOp::Neg => a.neg(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Log => {
                        if a.value() <= 0.0 {
                            return Err(self.domain(node, DomainReason::LogOfNonPositive));
                        }
                        a.ln()
                    }
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Sqrt => {
                        if a.value() < 0.0 {
                            return Err(self.domain(node, DomainReason::SqrtOfNegative));
                        }
                        if a.value() == 0.0 && a.tangent() != 0.0 {
                            return Err(self.domain(node, DomainReason::NotDifferentiable));
                        }
                        a.sqrt()
                    }
                }
            }
            Node::Binary(op, lhs, rhs) => {
                let a = self.walk(lhs, var)?;
                if *op == BinaryOp::Pow {
                    if let Some(k) = rhs.as_integer() {
                        if k < 0 && a.value() == 0.0 {
                            return Err(self.domain(node, DomainReason::DivisionByZero));
                        }
                        a.powi(k)
                    } else {
                        let b = self.walk(rhs, var)?;
                        self.general_pow(node, a, b)?
                    }
                } else {
                    let b = self.walk(rhs, var)?;
                    match op {
                        BinaryOp::Add => a.add(b),
                        BinaryOp::Sub => a.sub(b),
                        BinaryOp::Mul => a.mul(b),
                        BinaryOp::Div => {
                            if b.value() == 0.0 {
                                return Err(self.domain(node, DomainReason::DivisionByZero));
                            }
                            a.div(b)
                        }
                        BinaryOp::Pow => unreachable!(),
                    }
                }
            }
        };
        if !out.is_finite() {
            return Err(self.domain(node, DomainReason::NonFinite));
        }
        Ok(out)
    }

    /// `a^b = exp(b·ln a)` for `a > 0`; `0^b = 0` for `b > 0` when no tangent
    /// flows through the base or exponent.
    fn general_pow<T: Scalar>(&self, node: &Node, a: T, b: T) -> Result<T, EvalError> {
        if a.value() > 0.0 {
            return Ok(b.mul(a.ln()).exp());
        }
        if a.value() == 0.0 && b.value() > 0.0 {
            if a.tangent() == 0.0 && b.tangent() == 0.0 {
                return Ok(T::constant(0.0));
            }
            return Err(self.domain(node, DomainReason::NotDifferentiable));
        }
        Err(self.domain(node, DomainReason::PowerOfNonPositive))
    }

    /// Evaluates `f` with interval arithmetic, treating every occurrence of
    /// a variable as independent.
    ///
    /// Arithmetic follows the four endpoint rules; `x^k` for a constant
    /// integer `k ≥ 1` is `k - 1` interval multiplications, and negative `k`
    /// is a reciprocal of that. Elementary functions use their exact range
    /// over the argument interval.
    pub fn eval_interval(&self, dims: &[Interval]) -> Result<Interval, IntervalError> {
        self.check_arity(dims.len())?;
        self.walk_interval(&self.root, dims)
    }

    fn walk_interval(&self, node: &Node, dims: &[Interval]) -> Result<Interval, IntervalError> {
        let domain = |op: &'static str, interval: Interval| IntervalError::DomainViolation {
            op,
            interval,
        };
        let out = match node {
            Node::Const(c) => Interval::point(*c),
            Node::Var(i) => dims[*i],
            Node::Unary(op, child) => {
                let a = self.walk_interval(child, dims)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Exp => Interval::new(a.lo().exp(), a.hi().exp())?,
                    UnaryOp::Log => {
                        if a.lo() <= 0.0 {
                            return Err(domain("log", a));
                        }
                        Interval::new(a.lo().ln(), a.hi().ln())?
                    }
                    UnaryOp::Sqrt => {
                        if a.lo() < 0.0 {
                            return Err(domain("sqrt", a));
                        }
                        Interval::new(a.lo().sqrt(), a.hi().sqrt())?
                    }
                    UnaryOp::Sin => sin_range(a),
                    UnaryOp::Cos => sin_range(Interval::new(a.lo() + FRAC_PI_2, a.hi() + FRAC_PI_2)?),
                }
            }
            Node::Binary(op, lhs, rhs) => {
                let a = self.walk_interval(lhs, dims)?;
                match op {
                    BinaryOp::Add => a + self.walk_interval(rhs, dims)?,
                    BinaryOp::Sub => a - self.walk_interval(rhs, dims)?,
                    BinaryOp::Mul => a * self.walk_interval(rhs, dims)?,
                    BinaryOp::Div => a.checked_div(self.walk_interval(rhs, dims)?)?,
                    BinaryOp::Pow => match rhs.as_integer() {
                        Some(0) => Interval::point(1.0),
                        Some(k) => {
                            let mut acc = a;
                            for _ in 1..k.unsigned_abs() {
                                acc = acc * a;
                            }
                            if k < 0 {
                                Interval::point(1.0).checked_div(acc)?
                            } else {
                                acc
                            }
                        }
                        None => {
                            if a.lo() <= 0.0 {
                                return Err(domain("pow", a));
                            }
                            let b = self.walk_interval(rhs, dims)?;
                            let log_a = Interval::new(a.lo().ln(), a.hi().ln())?;
                            let t = b * log_a;
                            Interval::new(t.lo().exp(), t.hi().exp())?
                        }
                    },
                }
            }
        };
        Interval::new(out.lo(), out.hi())
    }
}

/// Exact range of `sin` over `a`, up to rounding of the endpoint values.
fn sin_range(a: Interval) -> Interval {
    // a few ulps of the argument move sin by that much in absolute terms
    let pad = 4.0 * f64::EPSILON * a.lo().abs().max(a.hi().abs());
    let a = Interval::new(a.lo() - pad, a.hi() + pad).expect("padded interval is ordered");
    if a.width() >= 2.0 * PI {
        return Interval::new(-1.0, 1.0).expect("unit interval");
    }
    let s0 = a.lo().sin();
    let s1 = a.hi().sin();
    let mut lo = s0.min(s1);
    let mut hi = s0.max(s1);
    // smallest t ≥ lo with t ≡ phase (mod 2π)
    let hits = |phase: f64| {
        let k = ((a.lo() - phase) / (2.0 * PI)).ceil();
        phase + k * 2.0 * PI <= a.hi()
    };
    if hits(FRAC_PI_2) {
        hi = 1.0;
    }
    if hits(-FRAC_PI_2) {
        lo = -1.0;
    }
    Interval::new(lo, hi).expect("sin range is ordered")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::tests::arb_node;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x_expr(src: &str) -> Expr {
        Expr::parse(src, &["x"]).unwrap()
    }

    fn central_difference(f: &Expr, point: &[f64], i: usize, h: f64) -> f64 {
        let mut p = point.to_vec();
        p[i] = point[i] + h;
        let up = f.eval(&p).unwrap();
        p[i] = point[i] - h;
        let down = f.eval(&p).unwrap();
        (up - down) / (2.0 * h)
    }

    #[test]
    fn evaluates_worked_values() {
        let f = x_expr("x*(1-x)");
        assert_eq!(f.eval(&[0.25]).unwrap(), 3.0 / 16.0);
        assert_eq!(f.eval(&[0.5]).unwrap(), 0.25);
        let c = x_expr("3.5");
        assert_eq!(c.eval(&[17.0]).unwrap(), 3.5);
        assert_eq!(c.gradient(&[17.0]).unwrap(), vec![0.0]);
        let c = Expr::parse("2", &["x", "y", "z"]).unwrap();
        assert_eq!(c.gradient(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn gradient_of_logistic_parabola() {
        let f = x_expr("x*(1-x)");
        assert_eq!(f.gradient(&[0.5]).unwrap(), vec![0.0]);
        let g = f.gradient(&[0.0]).unwrap()[0];
        assert_eq!(g, 1.0);
        assert!((g - central_difference(&f, &[0.0], 0, 1e-6)).abs() < 1e-9);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let f = x_expr("1 + log(x)");
        match f.eval(&[-1.0]) {
            Err(EvalError::Domain { node, reason }) => {
                assert_eq!(node, "log(x)");
                assert_eq!(reason, DomainReason::LogOfNonPositive);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            x_expr("sqrt(x)").eval(&[-0.5]),
            Err(EvalError::Domain { reason: DomainReason::SqrtOfNegative, .. })
        ));
        assert!(matches!(
            x_expr("1/(x-1)").eval(&[1.0]),
            Err(EvalError::Domain { reason: DomainReason::DivisionByZero, .. })
        ));
        assert!(matches!(
            x_expr("x^-1").eval(&[0.0]),
            Err(EvalError::Domain { reason: DomainReason::DivisionByZero, .. })
        ));
        assert!(matches!(
            x_expr("exp(exp(x))").eval(&[10.0]),
            Err(EvalError::Domain { reason: DomainReason::NonFinite, .. })
        ));
        assert!(matches!(
            x_expr("x").eval(&[1.0, 2.0]),
            Err(EvalError::ArityMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn powers() {
        let f = x_expr("x^3");
        assert_eq!(f.eval(&[-2.0]).unwrap(), -8.0);
        assert_eq!(f.gradient(&[-2.0]).unwrap(), vec![12.0]);
        let f = x_expr("x^0");
        assert_eq!(f.value_and_gradient(&[0.0]).unwrap(), (1.0, vec![0.0]));
        let f = x_expr("x^0.5");
        assert!((f.eval(&[4.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((f.gradient(&[4.0]).unwrap()[0] - 0.25).abs() < 1e-15);
        assert_eq!(f.eval(&[0.0]).unwrap(), 0.0);
        assert!(f.gradient(&[0.0]).is_err());
        assert!(matches!(
            f.eval(&[-1.0]),
            Err(EvalError::Domain { reason: DomainReason::PowerOfNonPositive, .. })
        ));
        // variable exponent: d/dx 2^x = ln 2 · 2^x
        let f = x_expr("2^x");
        let g = f.gradient(&[3.0]).unwrap()[0];
        assert!((g - 8.0 * 2f64.ln()).abs() < 1e-12);
        assert!(x_expr("sqrt(x)").gradient(&[0.0]).is_err());
        assert_eq!(x_expr("sqrt(x)").eval(&[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences_multivariate() {
        let f = Expr::parse("x*y^2 + sin(x*z) - exp(y)/(1+z^2) + sqrt(x+2)*log(y+3)", &["x", "y", "z"])
            .unwrap();
        let p = [0.3, -0.7, 1.1];
        let g = f.gradient(&p).unwrap();
        for (i, gi) in g.iter().enumerate() {
            let fd = central_difference(&f, &p, i, 1e-6);
            assert!((gi - fd).abs() <= 1e-6 * gi.abs().max(1.0), "partial {i}: {gi} vs {fd}");
        }
    }

    /// Random expressions whose every operation stays well inside its
    /// domain for points in `[-1, 1]ⁿ`.
    fn random_safe_expr(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> Node {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.6) {
                Node::Var(rng.gen_range(0..n))
            } else {
                Node::Const(rng.gen_range(-2.0..2.0))
            };
        }
        let child = |rng: &mut ChaCha8Rng| random_safe_expr(rng, n, depth - 1);
        // inputs to log/sqrt/div are shifted squares: a^2 + 0.5 ≥ 0.5
        let positive = |rng: &mut ChaCha8Rng| {
            let a = child(rng);
            Node::binary(
                BinaryOp::Add,
                Node::binary(BinaryOp::Pow, a, Node::Const(2.0)),
                Node::Const(0.5),
            )
        };
        match rng.gen_range(0..10) {
            0 => Node::binary(BinaryOp::Add, child(rng), child(rng)),
            1 => Node::binary(BinaryOp::Sub, child(rng), child(rng)),
            2 | 3 => Node::binary(BinaryOp::Mul, child(rng), child(rng)),
            4 => Node::binary(BinaryOp::Div, child(rng), positive(rng)),
            5 => Node::binary(BinaryOp::Pow, child(rng), Node::Const(rng.gen_range(2..4) as f64)),
            6 => Node::unary(UnaryOp::Sin, child(rng)),
            7 => Node::unary(UnaryOp::Cos, child(rng)),
            8 => Node::unary(if rng.gen_bool(0.5) { UnaryOp::Log } else { UnaryOp::Sqrt }, positive(rng)),
            _ => Node::unary(UnaryOp::Exp, Node::binary(BinaryOp::Mul, Node::Const(0.5), child(rng))),
        }
    }

    #[test]
    fn gradient_agrees_with_central_differences_on_random_expressions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x005e_edad);
        let vars: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let h = 1e-6;
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.gen_range(1..=3);
            let f = Expr::from_node(random_safe_expr(&mut rng, n, 4), vars[..n].to_vec());
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = f.gradient(&p).unwrap();
            for (i, gi) in g.iter().enumerate() {
                let fd = central_difference(&f, &p, i, h);
                // relative error with a unit floor so near-zero partials are
                // compared absolutely
                let rel = (gi - fd).abs() / gi.abs().max(1.0);
                assert!(rel <= 1e-6, "{f} at {p:?}: partial {i} AD {gi} vs FD {fd}");
            }
            checked += 1;
        }
    }

    #[test]
    fn interval_evaluation_treats_copies_independently() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let f = x_expr("x - x");
        assert_eq!(f.eval_interval(&[unit]).unwrap(), Interval::new(-1.0, 1.0).unwrap());
        let f = x_expr("x*(1-x)");
        assert_eq!(f.eval_interval(&[unit]).unwrap(), unit);
        let sym = Interval::new(-1.0, 1.0).unwrap();
        // x^2 is x*x, not the tighter [0, 1]
        assert_eq!(x_expr("x^2").eval_interval(&[sym]).unwrap(), sym);
        assert!(matches!(
            x_expr("1/x").eval_interval(&[sym]),
            Err(IntervalError::DivisorContainsZero { .. })
        ));
        assert!(matches!(
            x_expr("x^-2").eval_interval(&[sym]),
            Err(IntervalError::DivisorContainsZero { .. })
        ));
        assert!(x_expr("log(x)").eval_interval(&[unit]).is_err());
    }

    #[test]
    fn sin_and_cos_ranges() {
        let r = sin_range(Interval::new(0.0, PI).unwrap());
        assert_eq!(r.hi(), 1.0);
        assert!(r.lo().abs() < 1e-14);
        let r = sin_range(Interval::new(3.0, 3.5).unwrap());
        assert!((r.lo() - 3.5f64.sin()).abs() < 1e-14 && r.lo() <= 3.5f64.sin());
        assert!((r.hi() - 3f64.sin()).abs() < 1e-14 && r.hi() >= 3f64.sin());
        let c = x_expr("cos(x)").eval_interval(&[Interval::new(-0.5, 4.0).unwrap()]).unwrap();
        assert_eq!(c.hi(), 1.0);
        assert_eq!(c.lo(), -1.0);
    }

    proptest! {
        #[test]
        fn interval_evaluation_encloses_point_values(
            root in arb_node(2),
            lo in proptest::array::uniform2(-2.0f64..2.0),
            w in proptest::array::uniform2(0.0f64..1.5),
            t in proptest::array::uniform2(0.0f64..=1.0),
        ) {
            let vars = vec!["x".to_string(), "y".to_string()];
            let f = Expr::from_node(root, vars);
            let dims = [Interval::new(lo[0], lo[0] + w[0]).unwrap(), Interval::new(lo[1], lo[1] + w[1]).unwrap()];
            let p = [lo[0] + t[0] * w[0], lo[1] + t[1] * w[1]];
            if let (Ok(enclosure), Ok(v)) = (f.eval_interval(&dims), f.eval(&p)) {
                let slack = 1e-9 * (1.0 + v.abs());
                prop_assert!(enclosure.lo() - slack <= v && v <= enclosure.hi() + slack,
                    "{} at {:?}: {} not in {}", f, p, v, enclosure);
            }
        }

        #[test]
        fn eval_is_deterministic(root in arb_node(2), p in proptest::array::uniform2(-3.0f64..3.0)) {
            let f = Expr::from_node(root, vec!["x".into(), "y".into()]);
            let a = f.eval(&p);
            let b = f.eval(&p);
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                _ => prop_assert!(false),
            }
        }
    }
}
