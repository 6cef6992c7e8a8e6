//! Ranges of functions over boxes of fuzzy intervals.
//!
//! The crate evaluates `f(x₁, …, xₙ)` when each argument is an interval or a
//! fuzzy interval. Crisp ranges come from interval arithmetic, the vertex
//! method or an enumeration of KKT points of the box-constrained min and max
//! problems. Fuzzy ranges repeat the crisp computation on every α-cut.
//!
//! ```
//! use std::sync::Arc;
//! use fuzzkkt_core::{from_lr, fuzzy_kkt_envelope, AlphaGrid, Expr, FuzzyBox, LrSpec, SolverConfig};
//!
//! let grid = Arc::new(AlphaGrid::uniform(11).unwrap());
//! let x = from_lr(&LrSpec::linear(0.5, 0.5, 0.5, 0.5), grid).unwrap();
//! let f = Expr::parse("x*(1-x)", &["x"]).unwrap();
//! let env = fuzzy_kkt_envelope(&f, &FuzzyBox::new(vec![x]).unwrap(), &SolverConfig::default()).unwrap();
//! assert!((env.z_upper.at(0.3) - 0.25).abs() < 1e-9);
//! ```

pub mod envelope;
pub mod export;
pub mod expr;
pub mod fixtures;
pub mod gradual;
pub mod interval;
pub mod optimizer;
pub mod oracle;
pub mod problem;

pub use envelope::{
    axiomatic_fuzzy_eval, enforce_nestedness, fuzzy_kkt_envelope, fuzzy_vertex_method, EnvelopeError,
    EnvelopeResult, EnvelopeWarning, FuzzyBox, FuzzyConfiguration, LevelDiagnostics,
};
pub use export::{envelope_csv, envelope_svg, write_envelope_csv, write_plot_svg};
pub use expr::{EvalError, Expr, ParseError};
pub use gradual::{
    from_lr, gradual_extension, AlphaGrid, FuzzyInterval, GradualError, GradualNumber, GradualOrdering, LrSpec,
    Shape,
};
pub use interval::{
    extreme_configurations, vertex_method, Configuration, Interval, IntervalBox, IntervalError,
};
pub use optimizer::{
    enumerate_kkt_1d, kkt_residual, maximize_on_box, minimize_on_box, optimize_on_box, recover_multipliers,
    BoxOptimum, KktPoint, OptimizeError, Sense, SolverConfig,
};
pub use oracle::{grid_envelope, grid_min_max, OracleConfig, OracleError};
pub use problem::{load_spec, run, Method, Problem, ProblemSpec, SpecError};
