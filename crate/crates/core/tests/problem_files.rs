use fuzzkkt_core::export::CSV_HEADER;
use fuzzkkt_core::{envelope_csv, load_spec, run, write_envelope_csv, write_plot_svg, SpecError};

const SPEC: &str = r#"{
  "expression": "x*(1-x) + 0.5*y",
  "variables": [
    {"name": "x", "kind": "fuzzy", "core": [0.5, 0.5], "spread_left": 0.5, "spread_right": 0.5, "shape": "linear"},
    {"name": "y", "kind": "crisp", "lo": -1, "hi": 1}
  ],
  "grid": {"levels": 11},
  "solver": {"seed": 3}
}"#;

#[test]
fn load_run_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, SPEC).unwrap();
    let spec = load_spec(&path).unwrap();
    let result = run(&spec).unwrap();
    assert_eq!(result.levels.len(), 11);
    // y contributes [-0.5, 0.5] at every level
    for (j, &a) in result.grid().levels().iter().enumerate() {
        assert!((result.z_lower.values()[j] - (0.5 * a - 0.25 * a * a - 0.5)).abs() <= 1e-9);
        assert!((result.z_upper.values()[j] - 0.75).abs() <= 1e-9);
    }

    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    write_envelope_csv(&result, &csv).unwrap();
    write_plot_svg(&result, &svg).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), 12);

    let again = envelope_csv(&run(&load_spec(&path).unwrap()).unwrap());
    assert_eq!(again, text);
}

#[test]
fn missing_file_and_bad_json() {
    assert!(matches!(load_spec("/nonexistent/spec.json"), Err(SpecError::Io { .. })));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"expression\": \"x\", \"variables\": [{\"name\": \"x\", \"kind\": \"blurry\"}]}").unwrap();
    let err = load_spec(&path).unwrap_err();
    assert_eq!(err.path(), Some("variables[0].kind"));
}
