use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fuzzkkt_core::fixtures;
use fuzzkkt_core::problem::{Levels, Method, RunError};
use fuzzkkt_core::{load_spec, write_envelope_csv, write_plot_svg, EnvelopeResult, ProblemSpec, SpecError};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_SPEC: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "fuzzkkt", version, about = "Envelopes of functions over fuzzy intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a problem spec and write its envelope as CSV.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compare the KKT envelope with the brute-force grid envelope.
    OracleCheck {
        #[command(flatten)]
        spec: SpecArgs,
        /// Largest accepted absolute deviation.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Run the built-in worked examples and report pass/fail.
    PaperExamples,
}

#[derive(Args)]
struct SpecArgs {
    /// JSON problem spec.
    #[arg(long)]
    spec: PathBuf,
    /// Override the solver seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of uniform α levels.
    #[arg(long)]
    levels: Option<usize>,
}

enum Failure {
    Check(String),
    Spec(SpecError),
    Runtime(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Check(m) => (EXIT_FAILED_CHECK, m),
            Failure::Spec(e) => (EXIT_SPEC, format!("spec error: {e}")),
            Failure::Runtime(m) => (EXIT_RUNTIME, format!("error: {m}")),
        };
        eprintln!("{msg}");
        ExitCode::from(code)
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e)
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl SpecArgs {
    fn load(&self) -> Result<ProblemSpec, Failure> {
        let mut spec = load_spec(&self.spec)?;
        if let Some(seed) = self.seed {
            spec.solver.seed = seed;
        }
        if let Some(levels) = self.levels {
            spec.grid.levels = Levels::Count(levels);
        }
        Ok(spec)
    }
}

fn run_method(spec: &ProblemSpec, method: Method) -> Result<EnvelopeResult, Failure> {
    let spec = ProblemSpec {
        method,
        ..spec.clone()
    };
    Ok(spec.build()?.run()?)
}

fn eval(args: &SpecArgs, out: &PathBuf, svg: Option<&PathBuf>) -> Result<(), Failure> {
    let spec = args.load()?;
    let result = run_method(&spec, spec.method)?;
    write_envelope_csv(&result, out).map_err(|e| Failure::Runtime(format!("writing {}: {e}", out.display())))?;
    if let Some(svg) = svg {
        write_plot_svg(&result, svg).map_err(|e| Failure::Runtime(format!("writing {}: {e}", svg.display())))?;
    }
    for w in &result.warnings {
        eprintln!("warning: {w:?}");
    }
    let uncertified: Vec<String> = result
        .levels
        .iter()
        .filter(|l| !l.certified())
        .map(|l| l.alpha.to_string())
        .collect();
    println!(
        "{} levels written to {} (method {}, max repair {:e})",
        result.levels.len(),
        out.display(),
        spec.method,
        result.max_repair()
    );
    if uncertified.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("uncertified at alpha = {}", uncertified.join(", "))))
    }
}

fn oracle_check(args: &SpecArgs, tol: f64) -> Result<(), Failure> {
    let spec = args.load()?;
    let kkt = run_method(&spec, Method::Kkt)?;
    let oracle = run_method(&spec, Method::Oracle)?;
    let dev_lo = kkt.z_lower.max_abs_diff(&oracle.z_lower).expect("same grid");
    let dev_hi = kkt.z_upper.max_abs_diff(&oracle.z_upper).expect("same grid");
    let dev = dev_lo.max(dev_hi);
    println!("max deviation {dev:e} (lower {dev_lo:e}, upper {dev_hi:e}, tol {tol:e})");
    if dev <= tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("deviation {dev:e} exceeds {tol:e}")))
    }
}

fn paper_examples() -> Result<(), Failure> {
    let mut failed = 0;
    for fx in fixtures::all() {
        match fx.run() {
            Ok((_, report)) => {
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} {}: max deviation {:e} (tol {:e}), certified {}, degeneracy {}",
                    report.name,
                    report.max_deviation,
                    report.tol,
                    report.certified,
                    if report.degenerate_ok { "as expected" } else { "unexpected" }
                );
                failed += usize::from(!report.passed());
            }
            Err(e) => {
                println!("FAIL {}: {e}", fx.name);
                failed += 1;
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} example(s) failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval { spec, out, svg } => eval(spec, out, svg.as_ref()),
        Command::OracleCheck { spec, tol } => oracle_check(spec, *tol),
        Command::PaperExamples => paper_examples(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
