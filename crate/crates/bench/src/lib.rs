//! Problem builders shared by the benchmarks.

use std::sync::Arc;

use fuzzkkt_core::{from_lr, AlphaGrid, Expr, FuzzyBox, LrSpec};

/// Triangular fuzzy number `(0, 1/2, 1)` in every dimension.
pub fn triangle_box(arity: usize, levels: usize) -> FuzzyBox {
    let grid = Arc::new(AlphaGrid::uniform(levels).expect("at least two levels"));
    let dims = (0..arity)
        .map(|_| from_lr(&LrSpec::linear(0.5, 0.5, 0.5, 0.5), grid.clone()).expect("valid L-R"))
        .collect();
    FuzzyBox::new(dims).expect("shared grid")
}

pub fn parabola() -> Expr {
    Expr::parse("x*(1-x)", &["x"]).expect("valid expression")
}

/// A smooth non-monotone function of two variables.
pub fn wavy() -> Expr {
    Expr::parse("sin(3*x)*y - x^2*y + cos(2*y)", &["x", "y"]).expect("valid expression")
}
