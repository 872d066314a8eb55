//! Command-line front end: parse spec files, run analyses, emit JSON
//! reports, and run the re-verification suites.
//!
//! Exit codes: 0 success; 1 failed verification or internal error; 2 input
//! or schema violation; 3 a cap was exceeded (for `analyze` a partial report
//! with `incomplete` markers is still written).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use ietlab::classify::{
    abelianization, classify, non_isomorphism, ClassifyOptions, FinitePart, Report, Solvability,
};
use ietlab::constructions::{catalog, catalog_entry, solvable_tower, TowerLevelRepr};
use ietlab::error::IetError;
use ietlab::haq::{HaqSpec, HaqSpecRepr, RotationAmountRepr};
use ietlab::verify::{run_suites, SuiteOutcome, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "ietlab",
    version,
    about = "Exact classification of groups generated by irrational rotations and rational interval exchanges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the group described by a spec file and emit a full report.
    ///
    /// The report JSON goes to --output when given (with a human-readable
    /// summary on stdout), otherwise to stdout (summary on stderr).
    Analyze {
        spec: PathBuf,
        /// Report file path.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Compute only the abelianization of a spec's group.
    Abelianization {
        spec: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Collect non-isomorphism evidence between two specs.
    ///
    /// An empty evidence array means the implemented criteria found nothing;
    /// it never asserts the groups are isomorphic.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Evidence file path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Build a named example: a solvable tower level or a catalog spec.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Run a named re-verification suite, or all of them.
    Verify {
        /// One of: conjugation, w0, morphism, profiles, wreath-ab,
        /// breakpoints, tower, all.
        suite: String,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Level n of the solvable tower (1 ≤ n ≤ 6), with recomputed order and
    /// derived length.
    Tower { n: u32 },
    /// A catalog spec by name (see `catalog list`).
    Catalog { name: String },
}

#[derive(Args)]
struct Tuning {
    /// Cap on elements enumerated in subgroup computations
    /// (default 200000; the IETLAB_CLOSURE_CAP env var overrides the
    /// default, this flag overrides both).
    #[arg(long)]
    closure_cap: Option<usize>,
    /// Maximum number of commutator blocks in a witness word (default 6).
    #[arg(long)]
    witness_budget: Option<usize>,
    /// JSON array of probe rotation amounts, e.g.
    /// '["a1",{"rat":"0","irr":[17]}]' (default: one probe per grid
    /// interval).
    #[arg(long)]
    probes: Option<String>,
}

type CliResult<T> = Result<T, (u8, String)>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Analyze {
            spec,
            output,
            tuning,
        } => analyze_command(&spec, output.as_deref(), &tuning),
        Command::Abelianization { spec, tuning } => abelianization_command(&spec, &tuning),
        Command::Compare {
            a,
            b,
            output,
            tuning,
        } => compare_command(&a, &b, output.as_deref(), &tuning),
        Command::Construct { what } => match what {
            Construct::Tower { n } => {
                let level = solvable_tower(n).map_err(domain)?;
                emit_json(None, &TowerLevelRepr::of(&level))?;
                Ok(0)
            }
            Construct::Catalog { name } => {
                if name == "list" {
                    for entry in catalog() {
                        println!("{}", entry.name);
                    }
                    return Ok(0);
                }
                let spec = catalog_entry(&name).map_err(|e| {
                    let names: Vec<String> = catalog().into_iter().map(|e| e.name).collect();
                    (2u8, format!("{e}; available: {}", names.join(", ")))
                })?;
                emit_json(None, &HaqSpecRepr::of(&spec))?;
                Ok(0)
            }
        },
        Command::Verify { suite } => verify_command(&suite),
    }
}

fn analyze_command(spec_path: &Path, output: Option<&Path>, tuning: &Tuning) -> CliResult<u8> {
    let spec = load_spec(spec_path)?;
    let options = build_options(tuning, &spec)?;
    let report = classify(&spec, &options).map_err(domain)?;
    let summary = report_summary(&report);
    match output {
        Some(path) => {
            write_json(path, &report)?;
            println!("{summary}");
            println!("report written to {}", path.display());
        }
        None => {
            emit_json(None, &report)?;
            eprintln!("{summary}");
        }
    }
    Ok(if report.incomplete.is_empty() { 0 } else { 3 })
}

fn abelianization_command(spec_path: &Path, tuning: &Tuning) -> CliResult<u8> {
    let spec = load_spec(spec_path)?;
    let options = build_options(tuning, &spec)?;
    let ab = abelianization(&spec, &options).map_err(domain)?;
    emit_json(None, &ab)?;
    Ok(0)
}

fn compare_command(
    a_path: &Path,
    b_path: &Path,
    output: Option<&Path>,
    tuning: &Tuning,
) -> CliResult<u8> {
    let a = load_spec(a_path)?;
    let b = load_spec(b_path)?;
    let options = build_options(tuning, &a)?;
    let evidence = non_isomorphism(&a, &b, &options).map_err(domain)?;
    match output {
        Some(path) => {
            write_json(path, &evidence)?;
            println!("{} piece(s) of evidence written to {}", evidence.len(), path.display());
        }
        None => emit_json(None, &evidence)?,
    }
    Ok(0)
}

fn verify_command(suite: &str) -> CliResult<u8> {
    let outcomes = run_suites(suite, DEFAULT_SEED).map_err(domain)?;
    let mut all_passed = true;
    for outcome in &outcomes {
        print_suite(outcome);
        all_passed &= outcome.passed;
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn print_suite(outcome: &SuiteOutcome) {
    println!(
        "suite {}: {}",
        outcome.suite,
        if outcome.passed { "PASS" } else { "FAIL" }
    );
    for property in &outcome.properties {
        if property.passed {
            println!("  {}: PASS ({} cases)", property.property, property.cases);
        } else {
            println!(
                "  {}: FAIL after {} cases",
                property.property, property.cases
            );
            if let Some(dump) = &property.counterexample {
                println!("    counterexample: {dump}");
            }
        }
    }
}

// ----------------------------------------------------------------------
// Plumbing
// ----------------------------------------------------------------------

fn domain(e: IetError) -> (u8, String) {
    let code = match e {
        IetError::Schema(_)
        | IetError::BadPermutation(..)
        | IetError::DegreeMismatch(..)
        | IetError::BadModulus(_)
        | IetError::BadRational(..)
        | IetError::SquareRadicand(_)
        | IetError::DependentRadicands(..)
        | IetError::RadicandTooSmall(_)
        | IetError::EmptyBasis
        | IetError::CoefficientCount { .. }
        | IetError::DependentRotations
        | IetError::RationalRotationGenerator
        | IetError::UnknownCatalogEntry(_)
        | IetError::TowerRange(_) => 2,
        IetError::ClosureCapExceeded { .. }
        | IetError::QuotientTooLarge(_)
        | IetError::OrderCapExceeded(_)
        | IetError::ProbeSearchExhausted(_) => 3,
        _ => 1,
    };
    (code, e.to_string())
}

fn load_spec(path: &Path) -> CliResult<Arc<HaqSpec>> {
    let repr: HaqSpecRepr = read_json(path)?;
    repr.bind().map_err(domain)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| (1u8, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| (2u8, format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| (1u8, format!("serialization failed: {e}")))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    fs::write(path, to_json(value)?)
        .map_err(|e| (1u8, format!("cannot write {}: {e}", path.display())))
}

fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    match path {
        Some(p) => write_json(p, value),
        None => {
            print!("{}", to_json(value)?);
            Ok(())
        }
    }
}

fn build_options(tuning: &Tuning, spec: &Arc<HaqSpec>) -> CliResult<ClassifyOptions> {
    let mut options = ClassifyOptions::default();
    if let Ok(var) = std::env::var("IETLAB_CLOSURE_CAP") {
        options.closure_cap = var.parse().map_err(|_| {
            (
                2u8,
                format!("IETLAB_CLOSURE_CAP must be a positive integer, got {var:?}"),
            )
        })?;
    }
    if let Some(cap) = tuning.closure_cap {
        options.closure_cap = cap;
    }
    if let Some(budget) = tuning.witness_budget {
        options.witness_budget = budget;
    }
    if let Some(text) = &tuning.probes {
        let reprs: Vec<RotationAmountRepr> = serde_json::from_str(text)
            .map_err(|e| (2u8, format!("--probes: {e}")))?;
        let probes = reprs
            .iter()
            .map(|r| r.bind(spec))
            .collect::<Result<Vec<_>, _>>()
            .map_err(domain)?;
        options.probes = Some(probes);
    }
    Ok(options)
}

fn report_summary(report: &Report) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "group: q={}, {} grid generator(s), {} rotation(s)",
        report.spec.q,
        report.spec.qgens.len(),
        report.spec.s
    ));
    lines.push(format!("abelian: {}", yesno(report.is_abelian)));
    lines.push(match &report.solvable {
        Solvability::Solvable { dl } => format!("solvable: yes (derived length {dl})"),
        Solvability::Nonsolvable { .. } => "solvable: no".to_string(),
    });
    lines.push(format!("virtually solvable: {}", report.virtually_solvable));
    if let Some(lamp) = &report.lamplighter {
        lines.push(format!(
            "lamplighter: lamps {} over Z^{}",
            invariants_text(&lamp.lamps),
            lamp.k
        ));
    }
    lines.push(match &report.abelianization.finite_part {
        Some(FinitePart::Resolved(inv)) if inv.is_empty() => {
            format!("abelianization: Z^{}", report.abelianization.free_rank)
        }
        Some(FinitePart::Resolved(inv)) => format!(
            "abelianization: {} x Z^{}",
            invariants_text(inv),
            report.abelianization.free_rank
        ),
        Some(FinitePart::Bounds { lower, upper }) => format!(
            "abelianization: F x Z^{} with F between {} and {}",
            report.abelianization.free_rank,
            invariants_text(lower),
            invariants_text(upper)
        ),
        None => format!(
            "abelianization: F x Z^{} with F not computed (cap exceeded)",
            report.abelianization.free_rank
        ),
    });
    if !report.labels.is_empty() {
        lines.push(format!("labels: {}", report.labels.join(", ")));
    }
    for stage in &report.incomplete {
        lines.push(format!("incomplete: {} ({})", stage.stage, stage.reason));
    }
    lines.join("\n")
}

fn invariants_text(invariants: &[u64]) -> String {
    if invariants.is_empty() {
        "trivial".to_string()
    } else {
        invariants
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
