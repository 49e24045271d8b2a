//! `symspace`: certificates for non-trivial Whitehead products in the
//! irreducible symmetric spaces, plus the underlying algebra engines.
//!
//! Exit codes: 0 certificate (or success), 2 no conclusion, 1 error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symspace::algebra::{format_poly, hilbert_function, is_complete_intersection, Presentation};
use symspace::catalog::{report, report_row, Catalog, FamilyId, Params, Ranges, ReportRow, REPORT_SCHEMA_VERSION};
use symspace::steenrod::{char_class_operation, Group, Operation, TorusModel};
use symspace::sullivan::{build_formal_model, check_rational_criterion, RationalProvenance};
use symspace::whitehead::{Transcript, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "symspace", version, about = "Whitehead-product certificates for irreducible symmetric spaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the criteria for one space, e.g. `check AI --n 7` or `check EIV`.
    Check {
        family: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Report over parameter ranges (default: all families at desk scale).
    Report {
        /// All families at their default ranges.
        #[arg(long, conflicts_with = "family")]
        all: bool,
        /// Restrict to one family.
        #[arg(long)]
        family: Option<String>,
        /// Upper bound on the family's parameters.
        #[arg(long, requires = "family")]
        max: Option<u32>,
    },
    /// Hilbert function of a presentation file.
    Hilbert {
        file: PathBuf,
        /// Last degree to compute (default: the formal dimension).
        #[arg(long)]
        up_to: Option<u32>,
    },
    /// Formal Sullivan model and rational criterion for a presentation file.
    Model { file: PathBuf },
    /// A Steenrod operation on a characteristic class via the splitting principle.
    Steenrod {
        /// so, su, sp, spin9 or psp4.
        #[arg(long)]
        group: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        class: String,
        /// sqK or pK.
        #[arg(long)]
        op: String,
        /// Defaults to 2 for sqK; required for pK.
        #[arg(long)]
        prime: Option<u32>,
    },
}

/// A failed invocation, exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

enum Outcome {
    Success,
    NoConclusion,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::NoConclusion) => ExitCode::from(2),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { family, m, n } => cmd_check(cli.format, family, *m, *n),
        Command::Report { all: _, family, max } => cmd_report(cli.format, family.as_deref(), *max),
        Command::Hilbert { file, up_to } => cmd_hilbert(cli.format, file, *up_to),
        Command::Model { file } => cmd_model(cli.format, file),
        Command::Steenrod { group, rank, class, op, prime } => {
            cmd_steenrod(cli.format, group, *rank, class, op, *prime)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn versioned<T: Serialize>(body: &T) -> Versioned<'_, T> {
    Versioned { schema_version: REPORT_SCHEMA_VERSION, body }
}

fn write_transcript(out: &mut String, t: &Transcript) {
    out.push_str("transcript:\n");
    for e in t.entries() {
        let _ = write!(out, "  - [{}] {}: {}", e.status, e.check, e.outcome);
        if let Some(c) = &e.citation {
            let _ = write!(out, " (cite: {c})");
        }
        out.push('\n');
    }
}

/// Full text form of one row, transcript included.
fn render_row(r: &ReportRow) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema_version: {REPORT_SCHEMA_VERSION}");
    let _ = writeln!(out, "space: {}", r.space);
    let _ = writeln!(out, "name: {}", r.name);
    out.push_str("plan:\n");
    for (i, s) in r.plan.iter().enumerate() {
        let _ = writeln!(out, "  {}. {s}", i + 1);
    }
    if let Some(n) = &r.normalization {
        let _ = writeln!(out, "normalization: {n}");
    }
    let _ = writeln!(out, "criterion: {}", r.criterion);
    if r.certified {
        let _ = writeln!(out, "result: certificate");
    } else {
        let _ = writeln!(out, "result: no conclusion from this criterion");
    }
    for (key, v) in [
        ("witness", &r.witness),
        ("conclusion", &r.conclusion),
        ("failed", &r.failed_hypothesis),
        ("exception", &r.exception),
    ] {
        if let Some(v) = v {
            let _ = writeln!(out, "{key}: {v}");
        }
    }
    for a in &r.attempts {
        let _ = writeln!(out, "attempt: {a}");
    }
    for c in &r.cross_checks {
        let _ = writeln!(out, "cross-check: {c}");
    }
    write_transcript(&mut out, &r.transcript);
    out
}

fn cmd_check(format: Format, family: &str, m: Option<u32>, n: Option<u32>) -> Result<Outcome, Failure> {
    let family: FamilyId = family.parse()?;
    let catalog = Catalog::load()?;
    let row = report_row(&catalog, family, Params { m, n })?;
    match format {
        Format::Text => print!("{}", render_row(&row)),
        Format::Json => print_json(&versioned(&row))?,
    }
    Ok(if row.certified { Outcome::Success } else { Outcome::NoConclusion })
}

/// Exits 0 when every row concludes or is flagged as the known exception.
fn cmd_report(format: Format, family: Option<&str>, max: Option<u32>) -> Result<Outcome, Failure> {
    let mut ranges = Ranges::default();
    if let Some(f) = family {
        ranges = ranges.restrict(f.parse()?, max)?;
    }
    let catalog = Catalog::load()?;
    let report = report(&catalog, &ranges)?;
    match format {
        Format::Text => print!("{report}"),
        Format::Json => print_json(&report)?,
    }
    let open = report.rows.iter().any(|r| !r.certified && r.exception.is_none());
    Ok(if open { Outcome::NoConclusion } else { Outcome::Success })
}

fn read_presentation(file: &Path) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    Presentation::parse(&text).map_err(|e| Failure(format!("{}: {e}", file.display())))
}

#[derive(Serialize)]
struct HilbertOutput {
    field: String,
    up_to: u32,
    dimensions: Vec<usize>,
    total: usize,
    palindromic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete_intersection: Option<bool>,
}

fn cmd_hilbert(format: Format, file: &Path, up_to: Option<u32>) -> Result<Outcome, Failure> {
    let pres = read_presentation(file)?;
    let up_to = up_to
        .or(pres.formal_dimension())
        .ok_or_else(|| Failure("no formal dimension recorded; pass --up-to".into()))?;
    let dims = hilbert_function(&pres, up_to)?;
    let mut rev = dims.clone();
    rev.reverse();
    let out = HilbertOutput {
        field: pres.field().to_string(),
        up_to,
        total: dims.iter().sum(),
        palindromic: dims == rev,
        complete_intersection: is_complete_intersection(&pres).ok(),
        dimensions: dims,
    };
    match format {
        Format::Text => {
            println!("field: {}", out.field);
            for (d, n) in out.dimensions.iter().enumerate() {
                println!("H^{d}: {n}");
            }
            println!("total: {}", out.total);
            println!("palindromic: {}", out.palindromic);
            if let Some(ci) = out.complete_intersection {
                println!("complete intersection: {ci}");
            }
        }
        Format::Json => print_json(&versioned(&out))?,
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct ModelOutput {
    model: String,
    verdict: Verdict,
}

fn cmd_model(format: Format, file: &Path) -> Result<Outcome, Failure> {
    let pres = read_presentation(file)?;
    let space = file.file_stem().map_or("X".into(), |s| s.to_string_lossy().into_owned());
    let model = build_formal_model(&pres)?.labelled(space.clone());
    let provenance =
        RationalProvenance { relations: format!("relations as given in {}", file.display()), transfer: None };
    let verdict = check_rational_criterion(&space, &pres, &provenance)?;
    let certified = verdict.is_certified();
    let out = ModelOutput { model: model.to_text(), verdict };
    match format {
        Format::Text => {
            println!("model: {}", out.model);
            match &out.verdict {
                Verdict::Certified(c) => print!("{}", c),
                Verdict::Refused(r) => print!("{}", r),
            }
        }
        Format::Json => print_json(&versioned(&out))?,
    }
    Ok(if certified { Outcome::Success } else { Outcome::NoConclusion })
}

#[derive(Serialize)]
struct SteenrodOutput {
    group: String,
    rank: usize,
    prime: u32,
    class: String,
    operation: String,
    value: String,
}

fn cmd_steenrod(
    format: Format,
    group: &str,
    rank: usize,
    class: &str,
    op: &str,
    prime: Option<u32>,
) -> Result<Outcome, Failure> {
    let group = Group::from_tag(group).ok_or_else(|| {
        let tags: Vec<&str> = Group::ALL.iter().map(|g| g.tag()).collect();
        Failure(format!("unknown group `{group}`; valid groups: {}", tags.join(", ")))
    })?;
    let prime = match prime {
        Some(p) => p,
        None if op.to_ascii_lowercase().starts_with("sq") => 2,
        None => return Err(Failure(format!("`{op}` needs --prime"))),
    };
    let operation = Operation::parse(op, prime)?;
    let model = TorusModel::new(group, rank, prime)?;
    let value = char_class_operation(&model, class, operation)?;
    let out = SteenrodOutput {
        group: group.to_string(),
        rank,
        prime,
        class: class.to_string(),
        operation: operation.to_string(),
        value: format_poly(model.class_algebra(), &value),
    };
    match format {
        Format::Text => println!("{}", out.value),
        Format::Json => print_json(&versioned(&out))?,
    }
    Ok(Outcome::Success)
}
