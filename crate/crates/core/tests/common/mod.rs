#![allow(dead_code)]

use std::sync::Arc;

use fuzzkkt_core::{from_lr, AlphaGrid, Expr, FuzzyBox, Interval, IntervalBox, LrSpec, Shape};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense polynomial of total degree `degree`, coefficients in [-2, 2], in Horner form.
pub fn random_polynomial(rng: &mut ChaCha8Rng, vars: &[&str], degree: u32) -> Expr {
    fn horner(rng: &mut ChaCha8Rng, vars: &[&str], degree: u32) -> String {
        let Some((&last, rest)) = vars.split_last() else {
            return format!("({})", rng.gen_range(-2.0..=2.0));
        };
        let mut acc = horner(rng, rest, 0);
        for j in 1..=degree {
            acc = format!("({acc} * {last} + {})", horner(rng, rest, j));
        }
        acc
    }
    Expr::parse(&horner(rng, vars, degree), vars).unwrap()
}

pub fn random_box(rng: &mut ChaCha8Rng, arity: usize, max_width: f64) -> IntervalBox {
    let dims = (0..arity)
        .map(|_| {
            let lo = rng.gen_range(-1.5..1.0);
            Interval::new(lo, lo + rng.gen_range(0.05..max_width)).unwrap()
        })
        .collect();
    IntervalBox::new(dims).unwrap()
}

pub fn random_shape(rng: &mut ChaCha8Rng) -> Shape {
    match rng.gen_range(0..3) {
        0 => Shape::Linear,
        1 => Shape::Quadratic,
        _ => Shape::Exponential(rng.gen_range(0.5..3.0)),
    }
}

pub fn random_fuzzy_box(rng: &mut ChaCha8Rng, arity: usize, grid: &Arc<AlphaGrid>) -> FuzzyBox {
    let dims = (0..arity)
        .map(|_| {
            let core_lo = rng.gen_range(-1.0..1.0);
            let lr = LrSpec {
                core_lo,
                core_hi: core_lo + rng.gen_range(0.0..0.5),
                spread_left: rng.gen_range(0.0..0.5),
                spread_right: rng.gen_range(0.0..0.5),
                shape_left: random_shape(rng),
                shape_right: random_shape(rng),
            };
            from_lr(&lr, grid.clone()).unwrap()
        })
        .collect();
    FuzzyBox::new(dims).unwrap()
}
