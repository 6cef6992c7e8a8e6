mod common;

use fuzzkkt_core::oracle::{grid_error_bound, grid_scan};
use fuzzkkt_core::{maximize_on_box, minimize_on_box, Expr, Interval, IntervalBox, OracleConfig, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["x", "y", "z"];

#[test]
fn random_polynomials_agree_with_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0_12ac1e);
    let cfg = SolverConfig::default();
    let oracle = OracleConfig::default();
    for case in 0..40 {
        let arity = 1 + case % 3;
        let degree = rng.gen_range(1..=4);
        let f = common::random_polynomial(&mut rng, &VARS[..arity], degree);
        // 101 points per side in three dimensions: keep boxes narrow so grid error stays below 1e-4
        let width = [2.5, 2.0, 0.6][arity - 1];
        let bx = common::random_box(&mut rng, arity, width);
        let min = minimize_on_box(&f, &bx, &cfg).unwrap();
        let max = maximize_on_box(&f, &bx, &cfg).unwrap();
        let scan = grid_scan(&f, &bx, &oracle).unwrap();
        assert!(min.value <= max.value);
        assert!(min.value <= scan.min + 1e-12, "case {case}: {} vs grid {}", min.value, scan.min);
        assert!(max.value >= scan.max - 1e-12, "case {case}: {} vs grid {}", max.value, scan.max);
        assert!((min.value - scan.min).abs() <= 1e-4, "case {case}: min {} vs {}", min.value, scan.min);
        assert!((max.value - scan.max).abs() <= 1e-4, "case {case}: max {} vs {}", max.value, scan.max);
        let bound = grid_error_bound(&f, &bx, &oracle).unwrap();
        assert!(scan.min - min.value <= bound && max.value - scan.max <= bound);
    }
}

#[test]
fn x_exp_x_matches_closed_form() {
    let f = Expr::parse("x*exp(x)", &["x"]).unwrap();
    let bx = IntervalBox::new(vec![Interval::new(-2.0, 1.0).unwrap()]).unwrap();
    let cfg = SolverConfig::default();
    let min = minimize_on_box(&f, &bx, &cfg).unwrap();
    let max = maximize_on_box(&f, &bx, &cfg).unwrap();
    assert!((min.value + (-1.0f64).exp()).abs() <= 1e-12);
    assert!((max.value - 1f64.exp()).abs() <= 1e-12);
    let scan = grid_scan(&f, &bx, &OracleConfig::default()).unwrap();
    assert!((min.value - scan.min).abs() <= 1e-6 && (max.value - scan.max).abs() <= 1e-6);
}
