//! JSON problem specifications and the dispatcher that runs them.
//!
//! ```json
//! {
//!   "expression": "x*(1-x)",
//!   "variables": [
//!     {"name": "x", "kind": "fuzzy", "core": [0.5, 0.5],
//!      "spread_left": 0.5, "spread_right": 0.5, "shape": "linear"}
//!   ],
//!   "grid": {"levels": 101},
//!   "solver": {"seed": 7},
//!   "method": "kkt"
//! }
//! ```
//!
//! Crisp variables are written `{"name": "y", "kind": "crisp", "lo": 0, "hi": 1}`
//! and become zero-spread fuzzy intervals. `grid.levels` is either a level
//! count or an explicit list from 0 to 1.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::{
    axiomatic_fuzzy_eval, fuzzy_kkt_envelope, fuzzy_vertex_method, EnvelopeError, EnvelopeResult, FuzzyBox,
};
use crate::expr::{check_variable_name, Expr};
use crate::gradual::{from_lr, AlphaGrid, FuzzyInterval, LrSpec, Shape, DEFAULT_LEVELS};
use crate::interval::{Interval, DEFAULT_MAX_VERTEX_ARITY};
use crate::oracle::{grid_envelope, OracleConfig, OracleError};
use crate::optimizer::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Kkt,
    Vertex,
    Axiomatic,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Kkt => "kkt",
            Method::Vertex => "vertex",
            Method::Axiomatic => "axiomatic",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    Crisp,
    Fuzzy,
}

/// One declared variable. Crisp variables use `lo`/`hi`; fuzzy ones use
/// the L-R fields. `shape` sets both sides and is overridden by
/// `shape_left`/`shape_right`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub kind: VariableKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_left: Option<Shape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_right: Option<Shape>,
}

impl VariableSpec {
    pub fn crisp(name: &str, lo: f64, hi: f64) -> Self {
        VariableSpec {
            name: name.to_owned(),
            kind: VariableKind::Crisp,
            lo: Some(lo),
            hi: Some(hi),
            core: None,
            spread_left: None,
            spread_right: None,
            shape: None,
            shape_left: None,
            shape_right: None,
        }
    }

    pub fn fuzzy(name: &str, lr: &LrSpec) -> Self {
        let (shape, shape_left, shape_right) = if lr.shape_left == lr.shape_right {
            (Some(lr.shape_left), None, None)
        } else {
            (None, Some(lr.shape_left), Some(lr.shape_right))
        };
        VariableSpec {
            name: name.to_owned(),
            kind: VariableKind::Fuzzy,
            lo: None,
            hi: None,
            core: Some([lr.core_lo, lr.core_hi]),
            spread_left: Some(lr.spread_left),
            spread_right: Some(lr.spread_right),
            shape,
            shape_left,
            shape_right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Levels {
    Count(usize),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub levels: Levels,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            levels: Levels::Count(DEFAULT_LEVELS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub expression: String,
    pub variables: Vec<VariableSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub oracle: OracleConfig,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl SpecError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SpecError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Field path of the offending value, or `None` for IO errors.
    pub fn path(&self) -> Option<&str> {
        match self {
            SpecError::Invalid { path, .. } => Some(path),
            SpecError::Io { .. } => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A validated problem ready to run.
#[derive(Debug, Clone)]
pub struct Problem {
    pub expr: Expr,
    pub fuzzy_box: FuzzyBox,
    pub method: Method,
    pub solver: SolverConfig,
    pub oracle: OracleConfig,
}

impl ProblemSpec {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<ProblemSpec, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ProblemSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { String::new() } else { path };
            SpecError::at(path, e.into_inner())
        })?;
        spec.build()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn alpha_grid(&self) -> Result<AlphaGrid, SpecError> {
        match &self.grid.levels {
            Levels::Count(n) => AlphaGrid::uniform(*n),
            Levels::List(levels) => AlphaGrid::from_levels(levels.clone()),
        }
        .map_err(|e| SpecError::at("grid.levels", e))
    }

    /// Checks every field and assembles the expression and fuzzy box.
    pub fn build(&self) -> Result<Problem, SpecError> {
        let grid = Arc::new(self.alpha_grid()?);
        let mut names: Vec<&str> = Vec::with_capacity(self.variables.len());
        let mut dims = Vec::with_capacity(self.variables.len());
        for (i, var) in self.variables.iter().enumerate() {
            let path = |field: &str| format!("variables[{i}].{field}");
            check_variable_name(&var.name).map_err(|e| SpecError::at(path("name"), e.message))?;
            if names.contains(&var.name.as_str()) {
                return Err(SpecError::at(path("name"), format!("duplicate variable '{}'", var.name)));
            }
            names.push(&var.name);
            dims.push(build_variable(var, &grid, path)?);
        }
        if self.variables.is_empty() {
            return Err(SpecError::at("variables", "at least one variable is required"));
        }
        let expr = Expr::parse(&self.expression, &names).map_err(|e| SpecError::at("expression", e))?;
        self.solver.validate().map_err(|e| SpecError::at("solver", e))?;
        let n = names.len();
        match self.method {
            Method::Vertex if n > DEFAULT_MAX_VERTEX_ARITY => {
                return Err(SpecError::at(
                    "variables",
                    format!("vertex method supports at most {DEFAULT_MAX_VERTEX_ARITY} variables, got {n}"),
                ))
            }
            Method::Oracle if n > self.oracle.max_dims => {
                return Err(SpecError::at(
                    "variables",
                    format!("oracle supports at most {} variables, got {n}", self.oracle.max_dims),
                ))
            }
            Method::Oracle if self.oracle.points_for(n) < 2 => {
                return Err(SpecError::at("oracle.points_per_dim", "must be at least 2"))
            }
            _ => {}
        }
        let fuzzy_box = FuzzyBox::new(dims).map_err(|e| SpecError::at("variables", e))?;
        Ok(Problem {
            expr,
            fuzzy_box,
            method: self.method,
            solver: self.solver.clone(),
            oracle: self.oracle.clone(),
        })
    }
}

fn build_variable(
    var: &VariableSpec,
    grid: &Arc<AlphaGrid>,
    path: impl Fn(&str) -> String,
) -> Result<FuzzyInterval, SpecError> {
    let finite = |field: &str, v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SpecError::at(path(field), "must be finite"))
        }
    };
    let require = |field: &str, v: Option<f64>| match v {
        Some(v) => finite(field, v),
        None => Err(SpecError::at(path(field), format!("required for {} variables", kind_name(var.kind)))),
    };
    let forbid = |field: &str, present: bool| {
        if present {
            Err(SpecError::at(path(field), format!("not allowed for {} variables", kind_name(var.kind))))
        } else {
            Ok(())
        }
    };
    match var.kind {
        VariableKind::Crisp => {
            forbid("core", var.core.is_some())?;
            forbid("spread_left", var.spread_left.is_some())?;
            forbid("spread_right", var.spread_right.is_some())?;
            forbid("shape", var.shape.is_some())?;
            forbid("shape_left", var.shape_left.is_some())?;
            forbid("shape_right", var.shape_right.is_some())?;
            let lo = require("lo", var.lo)?;
            let hi = require("hi", var.hi)?;
            let iv = Interval::new(lo, hi).map_err(|_| SpecError::at(path("hi"), format!("must be at least lo = {lo}")))?;
            Ok(FuzzyInterval::crisp(grid.clone(), iv))
        }
        VariableKind::Fuzzy => {
            forbid("lo", var.lo.is_some())?;
            forbid("hi", var.hi.is_some())?;
            let [core_lo, core_hi] = var
                .core
                .ok_or_else(|| SpecError::at(path("core"), "required for fuzzy variables"))?;
            finite("core", core_lo)?;
            finite("core", core_hi)?;
            if core_lo > core_hi {
                return Err(SpecError::at(path("core"), format!("[{core_lo}, {core_hi}] is reversed")));
            }
            let spread = |field: &str, v: Option<f64>| {
                let v = require(field, v)?;
                if v < 0.0 {
                    Err(SpecError::at(path(field), format!("spread must be non-negative, got {v}")))
                } else {
                    Ok(v)
                }
            };
            let spread_left = spread("spread_left", var.spread_left)?;
            let spread_right = spread("spread_right", var.spread_right)?;
            let side = |field: &str, specific: Option<Shape>| {
                let (field, shape) = match specific {
                    Some(s) => (field, s),
                    None => ("shape", var.shape.unwrap_or(Shape::Linear)),
                };
                match shape {
                    Shape::Exponential(r) if !(r > 0.0 && r.is_finite()) => {
                        Err(SpecError::at(path(field), format!("exponential rate must be positive, got {r}")))
                    }
                    s => Ok(s),
                }
            };
            let lr = LrSpec {
                core_lo,
                core_hi,
                spread_left,
                spread_right,
                shape_left: side("shape_left", var.shape_left)?,
                shape_right: side("shape_right", var.shape_right)?,
            };
            from_lr(&lr, grid.clone()).map_err(|e| SpecError::at(path("core"), e))
        }
    }
}

fn kind_name(kind: VariableKind) -> &'static str {
    match kind {
        VariableKind::Crisp => "crisp",
        VariableKind::Fuzzy => "fuzzy",
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<ProblemSpec, SpecError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ProblemSpec::from_json(&text)
}

impl Problem {
    pub fn run(&self) -> Result<EnvelopeResult, RunError> {
        let (f, bx) = (&self.expr, &self.fuzzy_box);
        Ok(match self.method {
            Method::Kkt => fuzzy_kkt_envelope(f, bx, &self.solver)?,
            Method::Vertex => fuzzy_vertex_method(f, bx)?,
            Method::Axiomatic => axiomatic_fuzzy_eval(f, bx)?,
            Method::Oracle => grid_envelope(f, bx, &self.oracle)?,
        })
    }
}

/// Validates `spec` and runs the selected engine.
pub fn run(spec: &ProblemSpec) -> Result<EnvelopeResult, RunSpecError> {
    let problem = spec.build()?;
    Ok(problem.run()?)
}

#[derive(Debug, Error)]
pub enum RunSpecError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Run(#[from] RunError),
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_TRIANGLE: &str = r#"{
        "expression": "x*(1-x)",
        "variables": [{"name": "x", "kind": "fuzzy", "core": [0.5, 0.5],
                       "spread_left": 0.5, "spread_right": 0.5, "shape": "linear"}]
    }"#;

    fn err_path(text: &str) -> String {
        ProblemSpec::from_json(text).unwrap_err().path().unwrap().to_owned()
    }

    #[test]
    fn defaults_are_filled() {
        let spec = ProblemSpec::from_json(HALF_TRIANGLE).unwrap();
        assert_eq!(spec.method, Method::Kkt);
        assert_eq!(spec.grid.levels, Levels::Count(101));
        assert_eq!(spec.solver, SolverConfig::default());
    }

    #[test]
    fn errors_carry_field_paths() {
        assert_eq!(err_path(&HALF_TRIANGLE.replace("x*(1-x)", "x*y")), "expression");
        assert_eq!(err_path(&HALF_TRIANGLE.replace("\"spread_left\": 0.5", "\"spread_left\": -1")), "variables[0].spread_left");
        assert_eq!(
            err_path(&HALF_TRIANGLE.replace("\"expression\"", "\"method\": \"newton\", \"expression\"")),
            "method"
        );
        assert_eq!(err_path(&HALF_TRIANGLE.replace("\"linear\"", "\"cubic\"")), "variables[0].shape");
        assert_eq!(err_path(&HALF_TRIANGLE.replace("\"expression\"", "\"grid\": {\"levels\": 1}, \"expression\"")), "grid.levels");
        let crisp = r#"{"expression": "x", "variables": [{"name": "x", "kind": "crisp", "lo": 2, "hi": 1}]}"#;
        assert_eq!(err_path(crisp), "variables[0].hi");
        let dup = r#"{"expression": "x", "variables": [{"name": "x", "kind": "crisp", "lo": 0, "hi": 1},
                                                     {"name": "x", "kind": "crisp", "lo": 0, "hi": 1}]}"#;
        assert_eq!(err_path(dup), "variables[1].name");
        let missing = r#"{"expression": "x", "variables": [{"name": "x", "kind": "fuzzy", "core": [0, 1]}]}"#;
        assert_eq!(err_path(missing), "variables[0].spread_left");
        let mixed = r#"{"expression": "x", "variables": [{"name": "x", "kind": "crisp", "lo": 0, "hi": 1, "core": [0, 1]}]}"#;
        assert_eq!(err_path(mixed), "variables[0].core");
        let reserved = r#"{"expression": "1", "variables": [{"name": "exp", "kind": "crisp", "lo": 0, "hi": 1}]}"#;
        assert_eq!(err_path(reserved), "variables[0].name");
    }

    #[test]
    fn round_trip() {
        let mut spec = ProblemSpec::from_json(HALF_TRIANGLE).unwrap();
        spec.variables.push(VariableSpec::crisp("y", -1.0, 2.0));
        spec.variables.push(VariableSpec::fuzzy(
            "z",
            &LrSpec {
                shape_right: Shape::Exponential(2.0),
                ..LrSpec::linear(0.0, 1.0, 0.5, 0.25)
            },
        ));
        spec.expression = "x*(1-x) + y*z".into();
        spec.grid.levels = Levels::List(vec![0.0, 0.25, 1.0]);
        spec.method = Method::Vertex;
        spec.solver.seed = 9;
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn dispatches_to_each_engine() {
        let spec = ProblemSpec::from_json(HALF_TRIANGLE).unwrap();
        let kkt = run(&spec).unwrap();
        for (j, &a) in kkt.grid().levels().iter().enumerate() {
            assert!((kkt.z_lower.values()[j] - (0.5 * a - 0.25 * a * a)).abs() <= 1e-6);
            assert!((kkt.z_upper.values()[j] - 0.25).abs() <= 1e-6);
        }

        let square = ProblemSpec {
            expression: "x^2".into(),
            method: Method::Vertex,
            ..spec.clone()
        };
        let v = run(&square).unwrap();
        for (j, &a) in v.grid().levels().iter().enumerate() {
            assert!((v.z_lower.values()[j] - 0.25 * a * a).abs() <= 1e-12);
            assert!((v.z_upper.values()[j] - (1.0 - a + 0.25 * a * a)).abs() <= 1e-12);
        }

        let dep = ProblemSpec {
            expression: "x - x".into(),
            variables: vec![VariableSpec::crisp("x", 0.0, 1.0)],
            method: Method::Axiomatic,
            ..spec.clone()
        };
        let a = run(&dep).unwrap();
        assert!(a.z_lower.values().iter().all(|&v| v == -1.0));
        assert!(a.z_upper.values().iter().all(|&v| v == 1.0));

        let oracle = ProblemSpec {
            method: Method::Oracle,
            ..spec
        };
        let o = run(&oracle).unwrap();
        assert!(o.z_lower.max_abs_diff(&kkt.z_lower).unwrap() <= 1e-6);
    }

    #[test]
    fn runtime_errors_name_the_level() {
        let spec = ProblemSpec {
            expression: "1/(x - 0.5)".into(),
            method: Method::Axiomatic,
            ..ProblemSpec::from_json(HALF_TRIANGLE).unwrap()
        };
        let msg = run(&spec).unwrap_err().to_string();
        assert!(msg.contains("alpha = 0"), "{msg}");
    }
}
