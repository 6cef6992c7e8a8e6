//! Worked examples with closed-form envelopes.

use crate::envelope::EnvelopeResult;
use crate::gradual::LrSpec;
use crate::problem::{run, GridSpec, Levels, Method, ProblemSpec, RunSpecError, VariableSpec};

/// A problem together with its exact envelope.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub lower: fn(f64) -> f64,
    pub upper: fn(f64) -> f64,
    pub tol: f64,
    /// The engine must flag its result as a single gradual number.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tol: f64,
    pub certified: bool,
    pub degenerate_ok: bool,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tol && self.certified && self.degenerate_ok
    }
}

/// Triangular fuzzy number with endpoints `α/2` and `1 − α/2`.
pub fn half_triangle(name: &str) -> VariableSpec {
    VariableSpec::fuzzy(name, &LrSpec::linear(0.5, 0.5, 0.5, 0.5))
}

fn spec(expression: &str, variable: VariableSpec, method: Method) -> ProblemSpec {
    ProblemSpec {
        expression: expression.into(),
        variables: vec![variable],
        grid: GridSpec {
            levels: Levels::Count(101),
        },
        solver: Default::default(),
        method,
        oracle: Default::default(),
    }
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "crisp parabola, KKT",
            spec: spec("x*(1-x)", VariableSpec::crisp("x", 0.0, 1.0), Method::Kkt),
            lower: |_| 0.0,
            upper: |_| 0.25,
            tol: 1e-9,
            degenerate: false,
        },
        Fixture {
            name: "fuzzy square, vertex method",
            spec: spec("x^2", half_triangle("x"), Method::Vertex),
            lower: |a| 0.25 * a * a,
            upper: |a| 1.0 - a + 0.25 * a * a,
            tol: 1e-9,
            degenerate: false,
        },
        Fixture {
            name: "fuzzy parabola, vertex method (degenerate)",
            spec: spec("x*(1-x)", half_triangle("x"), Method::Vertex),
            lower: |a| 0.5 * a - 0.25 * a * a,
            upper: |a| 0.5 * a - 0.25 * a * a,
            tol: 1e-9,
            degenerate: true,
        },
        Fixture {
            name: "fuzzy parabola, KKT envelope",
            spec: spec("x*(1-x)", half_triangle("x"), Method::Kkt),
            lower: |a| 0.5 * a - 0.25 * a * a,
            upper: |_| 0.25,
            tol: 1e-6,
            degenerate: false,
        },
    ]
}

impl Fixture {
    pub fn check(&self, result: &EnvelopeResult) -> FixtureReport {
        let alphas = result.grid().levels();
        let max_deviation = alphas
            .iter()
            .zip(result.z_lower.values().iter().zip(result.z_upper.values()))
            .map(|(&a, (&lo, &hi))| (lo - (self.lower)(a)).abs().max((hi - (self.upper)(a)).abs()))
            .fold(0.0, f64::max);
        FixtureReport {
            name: self.name,
            max_deviation,
            tol: self.tol,
            certified: result.all_certified(),
            degenerate_ok: result.is_degenerate() == self.degenerate,
        }
    }

    pub fn run(&self) -> Result<(EnvelopeResult, FixtureReport), RunSpecError> {
        let result = run(&self.spec)?;
        let report = self.check(&result);
        Ok((result, report))
    }
}
