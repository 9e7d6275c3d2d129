//! Command-line front end.
//!
//! Exit status: 0 when every coefficient matches the closed form (or every
//! suite passes), 1 on a mismatch, 2 on a usage error, 3 when the pipeline
//! fails numerically.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::Specialization;
use crate::geometry::LocalP1Config;
use crate::localization::{
    closed_form_series, diagnostic_table, DiagnosticRow, LocalizationError, Reading, SpecSampler,
    TangentTable,
};
use crate::verify::{run_suite, Suite, VerifyConfig};
use crate::vertex::{BetaTwist, EdgeSigns, PipelineOptions};

pub const EXIT_MATCH: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Ranks above this make the fixed-point enumeration impractical.
pub const MAX_RANK: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "hft-vertex",
    version,
    about = "Vertex series of rank-r highly frozen triples on local P^1",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    compute: ComputeArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the vertex series and compare it with the closed form.
    Compute(ComputeArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Compare pipeline weights with the printed rank-2 product formula.
    Diagnostic(ComputeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BetaTwistArg {
    Symmetric,
    Transported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EdgeSignsArg {
    SerreDual,
    Printed,
}

#[derive(Debug, Clone, Args)]
struct ConventionArgs {
    /// Add the edge remainder of the delta(t1) split.
    #[arg(long, default_value_t = false, action = ArgAction::Set, value_name = "BOOL")]
    include_edge: bool,
    /// Placement of the twist factor in the beta-patch template.
    #[arg(long, value_enum, default_value = "symmetric")]
    beta_twist: BetaTwistArg,
    /// Signs of the dual terms in the overlap bracket.
    #[arg(long, value_enum, default_value = "serre-dual")]
    edge_signs: EdgeSignsArg,
    #[arg(long, hide = true)]
    inject_corrupt_sheaf: bool,
}

impl ConventionArgs {
    fn options(&self) -> PipelineOptions {
        PipelineOptions {
            beta_twist: match self.beta_twist {
                BetaTwistArg::Symmetric => BetaTwist::Symmetric,
                BetaTwistArg::Transported => BetaTwist::Transported,
            },
            edge_signs: match self.edge_signs {
                EdgeSignsArg::SerreDual => EdgeSigns::SerreDual,
                EdgeSignsArg::Printed => EdgeSigns::Printed,
            },
            include_edge: self.include_edge,
            corrupt_sheaf: self.inject_corrupt_sheaf,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct ComputeArgs {
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, default_value_t = 0)]
    twist: u32,
    #[arg(long, default_value_t = 4)]
    max_order: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Seed for the random generic specialization.
    #[arg(long, default_value_t = 0)]
    spec_seed: u64,
    /// Append the printed-formula comparison (rank 2 only).
    #[arg(long)]
    diagnostic: bool,
    /// Include the per-fixed-point contribution table.
    #[arg(long)]
    contributions: bool,
    /// Report `timing_ms` as 0, for byte-identical output.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    conventions: ConventionArgs,
}

#[derive(Debug, Clone, Args)]
struct VerifyArgs {
    /// Run only these suites (repeatable).
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Largest rank scanned.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Largest twist scanned.
    #[arg(long, default_value_t = 2)]
    twist: u32,
    #[arg(long, default_value_t = 5)]
    max_order: u32,
    #[arg(long, default_value_t = 0)]
    spec_seed: u64,
    /// Randomized cases per algebra suite.
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[command(flatten)]
    conventions: ConventionArgs,
}

/// Validated settings for one computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub rank: usize,
    pub twist: u32,
    pub max_order: u32,
    pub spec_seed: u64,
    pub output_format: OutputFormat,
    pub include_edge: bool,
    pub diagnostic: bool,
    pub contributions: bool,
    pub timing: bool,
    pub opts: PipelineOptions,
}

impl RunConfig {
    fn from_args(args: &ComputeArgs, diagnostic: bool) -> Result<Self, String> {
        if args.rank == 0 {
            return Err("--rank must be at least 1".into());
        }
        if args.rank > MAX_RANK {
            return Err(format!("--rank must be at most {MAX_RANK}"));
        }
        if diagnostic && args.rank != 2 {
            return Err("the diagnostic is defined for --rank 2 only".into());
        }
        Ok(Self {
            rank: args.rank,
            twist: args.twist,
            max_order: args.max_order,
            spec_seed: args.spec_seed,
            output_format: args.format,
            include_edge: args.conventions.include_edge,
            diagnostic,
            contributions: args.contributions,
            timing: !args.no_timing,
            opts: args.conventions.options(),
        })
    }

    pub fn config(&self) -> LocalP1Config {
        LocalP1Config::new(self.rank, self.twist).expect("validated rank")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecReport {
    pub s: Vec<String>,
    pub v: Vec<String>,
}

impl From<&Specialization> for SpecReport {
    fn from(spec: &Specialization) -> Self {
        Self {
            s: strings(spec.s()),
            v: strings(spec.v()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContributionRow {
    pub k: u32,
    pub fixed_point: String,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticReport {
    pub k: u32,
    pub fixed_point: String,
    pub pipeline: String,
    pub reading_a: Option<String>,
    pub reading_b: Option<String>,
    pub agrees_a: bool,
    pub agrees_b: bool,
}

impl From<&DiagnosticRow> for DiagnosticReport {
    fn from(row: &DiagnosticRow) -> Self {
        let value = |reading| {
            row.readings
                .iter()
                .find(|(r, _)| *r == reading)
                .and_then(|(_, v)| v.as_ref().ok())
                .map(ToString::to_string)
        };
        Self {
            k: row.fixed_point.total_length(),
            fixed_point: row.fixed_point.to_string(),
            pipeline: row.pipeline.to_string(),
            reading_a: value(Reading::A),
            reading_b: value(Reading::B),
            agrees_a: row.agrees(Reading::A),
            agrees_b: row.agrees(Reading::B),
        }
    }
}

/// Everything a computation reports. Field order is the JSON key order.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub rank: usize,
    pub twist: u32,
    pub max_order: u32,
    pub spec: SpecReport,
    pub coefficients: Vec<String>,
    pub closed_form: Vec<String>,
    #[serde(rename = "match")]
    pub matches: Vec<bool>,
    pub include_edge: bool,
    pub timing_ms: u64,
    pub spec_seed: u64,
    pub beta_twist: &'static str,
    pub edge_signs: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<ContributionRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Vec<DiagnosticReport>>,
}

impl RunReport {
    pub fn all_match(&self) -> bool {
        self.matches.iter().all(|&m| m)
    }
}

fn strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

/// Runs the pipeline for a validated configuration.
pub fn cmd_compute(config: &RunConfig) -> Result<RunReport, LocalizationError> {
    let start = Instant::now();
    let table = TangentTable::build(config.config(), config.max_order, &config.opts)?;
    let spec = SpecSampler::new(config.spec_seed).draw_generic(&table)?;
    let contributions = table.contributions(&spec)?;
    let computed: Vec<BigRational> = contributions
        .iter()
        .map(|row| row.iter().map(|c| c.weight.clone()).sum())
        .collect();
    let closed = closed_form_series(config.rank, config.twist, config.max_order);
    let matches = computed
        .iter()
        .zip(closed.coefficients())
        .map(|(a, b)| a == b)
        .collect();
    let contribution_rows = config.contributions.then(|| {
        contributions
            .iter()
            .flatten()
            .map(|c| ContributionRow {
                k: c.fixed_point.total_length(),
                fixed_point: c.fixed_point.to_string(),
                weight: c.weight.to_string(),
            })
            .collect()
    });
    let diagnostic = if config.diagnostic {
        Some(
            diagnostic_table(&table, &spec)?
                .iter()
                .map(DiagnosticReport::from)
                .collect(),
        )
    } else {
        None
    };
    let timing_ms = if config.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(RunReport {
        rank: config.rank,
        twist: config.twist,
        max_order: config.max_order,
        spec: SpecReport::from(&spec),
        coefficients: strings(&computed),
        closed_form: strings(closed.coefficients()),
        matches,
        include_edge: config.include_edge,
        timing_ms,
        spec_seed: config.spec_seed,
        beta_twist: match config.opts.beta_twist {
            BetaTwist::Symmetric => "symmetric",
            BetaTwist::Transported => "transported",
        },
        edge_signs: match config.opts.edge_signs {
            EdgeSigns::SerreDual => "serre-dual",
            EdgeSigns::Printed => "printed",
        },
        contributions: contribution_rows,
        diagnostic,
    })
}

fn csv_line(out: &mut String, fields: &[&str]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn opt(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("")
}

pub fn render(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Text => render_text(report),
    }
}

fn render_csv(report: &RunReport) -> String {
    let mut out = String::new();
    csv_line(&mut out, &["k", "coefficient", "closed_form", "match"]);
    for (k, ((c, f), m)) in report
        .coefficients
        .iter()
        .zip(&report.closed_form)
        .zip(&report.matches)
        .enumerate()
    {
        csv_line(&mut out, &[&k.to_string(), c, f, &m.to_string()]);
    }
    if let Some(rows) = &report.contributions {
        out.push('\n');
        csv_line(&mut out, &["k", "fixed_point", "weight"]);
        for r in rows {
            csv_line(
                &mut out,
                &[
                    &r.k.to_string(),
                    &format!("\"{}\"", r.fixed_point),
                    &r.weight,
                ],
            );
        }
    }
    if let Some(rows) = &report.diagnostic {
        out.push('\n');
        out.push_str(&render_diagnostic_csv(rows));
    }
    out
}

fn render_diagnostic_csv(rows: &[DiagnosticReport]) -> String {
    let mut out = String::new();
    csv_line(
        &mut out,
        &[
            "k",
            "fixed_point",
            "pipeline",
            "reading_a",
            "reading_b",
            "agrees_a",
            "agrees_b",
        ],
    );
    for r in rows {
        csv_line(
            &mut out,
            &[
                &r.k.to_string(),
                &format!("\"{}\"", r.fixed_point),
                &r.pipeline,
                opt(&r.reading_a),
                opt(&r.reading_b),
                &r.agrees_a.to_string(),
                &r.agrees_b.to_string(),
            ],
        );
    }
    out
}

fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "rank {} twist {} up to q^{} (include_edge={}, beta_twist={}, edge_signs={})",
        report.rank,
        report.twist,
        report.max_order,
        report.include_edge,
        report.beta_twist,
        report.edge_signs
    );
    let _ = writeln!(
        out,
        "specialization (seed {}): s = ({}), v = ({})",
        report.spec_seed,
        report.spec.s.join(", "),
        report.spec.v.join(", ")
    );
    let _ = writeln!(
        out,
        "{:>3}  {:>14}  {:>14}  match",
        "k", "computed", "closed form"
    );
    for (k, ((c, f), m)) in report
        .coefficients
        .iter()
        .zip(&report.closed_form)
        .zip(&report.matches)
        .enumerate()
    {
        let _ = writeln!(
            out,
            "{k:>3}  {c:>14}  {f:>14}  {}",
            if *m { "yes" } else { "NO" }
        );
    }
    if let Some(rows) = &report.contributions {
        let _ = writeln!(out, "\ncontributions:");
        for r in rows {
            let _ = writeln!(out, "  k={} {}  {}", r.k, r.fixed_point, r.weight);
        }
    }
    if let Some(rows) = &report.diagnostic {
        let _ = writeln!(out, "\nprinted formula vs pipeline:");
        let _ = writeln!(
            out,
            "  {:<18} {:>12} {:>12} {:>12}",
            "fixed point", "pipeline", "reading A", "reading B"
        );
        for r in rows {
            let mark = |v: &Option<String>, ok: bool| match v {
                Some(x) => format!("{x}{}", if ok { "*" } else { "" }),
                None => "undefined".into(),
            };
            let _ = writeln!(
                out,
                "  {:<18} {:>12} {:>12} {:>12}",
                r.fixed_point,
                r.pipeline,
                mark(&r.reading_a, r.agrees_a),
                mark(&r.reading_b, r.agrees_b)
            );
        }
        let _ = writeln!(out, "  (* = agrees with the pipeline)");
    }
    if report.timing_ms > 0 {
        let _ = writeln!(out, "{} ms", report.timing_ms);
    }
    out
}

/// Captured result of a CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

/// Parses `args` (program name first) and runs the selected command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_MATCH
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match cli.command {
        None => compute(&cli.compute, false),
        Some(Command::Compute(args)) => compute(&args, args.diagnostic),
        Some(Command::Diagnostic(args)) => compute(&args, true),
        Some(Command::Verify(args)) => verify(&args),
    }
}

fn compute(args: &ComputeArgs, force_diagnostic: bool) -> Outcome {
    let config = match RunConfig::from_args(args, force_diagnostic || args.diagnostic) {
        Ok(c) => c,
        Err(msg) => return Outcome::usage(format!("error: {msg}\n")),
    };
    match cmd_compute(&config) {
        Ok(report) => Outcome {
            code: if report.all_match() {
                EXIT_MATCH
            } else {
                EXIT_MISMATCH
            },
            stdout: render(&report, config.output_format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_NUMERIC,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn verify(args: &VerifyArgs) -> Outcome {
    if args.rank == 0 || args.rank > MAX_RANK {
        return Outcome::usage(format!("error: --rank must be between 1 and {MAX_RANK}\n"));
    }
    let suites: Vec<Suite> = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        match args.suites.iter().map(|s| s.parse()).collect() {
            Ok(s) => s,
            Err(msg) => return Outcome::usage(format!("error: {msg}\n")),
        }
    };
    let config = VerifyConfig {
        max_rank: args.rank,
        max_twist: args.twist,
        max_order: args.max_order,
        seed: args.spec_seed,
        cases: args.cases,
        opts: args.conventions.options(),
        ..Default::default()
    };
    let mut stdout = String::new();
    let mut failed = 0;
    for suite in suites {
        let report = run_suite(suite, &config);
        if !report.passed() {
            failed += 1;
        }
        let _ = writeln!(stdout, "{report}");
    }
    let _ = writeln!(
        stdout,
        "{}",
        if failed == 0 {
            "all suites passed".to_string()
        } else {
            format!("{failed} suite(s) failed")
        }
    );
    Outcome {
        code: if failed == 0 {
            EXIT_MATCH
        } else {
            EXIT_MISMATCH
        },
        stdout,
        stderr: String::new(),
    }
}
