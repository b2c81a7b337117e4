//! Command-line front end: argument parsing, experiment manifests, versioned JSON
//! reports and CSV export for plotting.

mod commands;
mod export;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::DEFAULT_PREC;

pub use commands::execute;
pub use export::{export_plot_data, natural_kind};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "sturmian", version, about = "Sturmian words, Sturmian numbers and contracted rotations")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Print the JSON report instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run an experiment manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Continued fraction, positive-side denominators and best approximations.
    Cf(CfArgs),
    /// Theta-codings, the Fibonacci word and subword complexity.
    Code(CodeArgs),
    /// Stuttering witness for a coding combination or a raw word.
    Stutter(StutterArgs),
    /// Enclosure of a Sturmian number.
    Eval(EvalArgs),
    /// Key inequality for the records of a stutter report.
    Keyineq(KeyIneqArgs),
    /// Integer relation probe.
    Relation(RelationArgs),
    /// Heights and the gap criterion.
    Heights(HeightsArgs),
    /// Contracted rotations.
    #[command(subcommand)]
    Rotor(RotorCommand),
    /// CSV plot data from a JSON report.
    Export(ExportArgs),
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotorCommand {
    /// Rotation number enclosure, optionally over a sweep of offsets.
    Rotnum(RotnumArgs),
    /// Offset realising a given irrational rotation number.
    Invert(InvertArgs),
    /// Orbit sample of the attractor.
    Attractor(AttractorArgs),
    /// Decompose attractor points as z + xi_0 - xi_{-x}.
    Decompose(DecomposeArgs),
}

fn one() -> String {
    "1".into()
}
fn two() -> String {
    "2".into()
}
fn origin() -> u8 {
    1
}
fn twenty() -> usize {
    20
}
fn four() -> usize {
    4
}
fn prefix() -> usize {
    100_000
}
fn fib() -> String {
    "fibonacci".into()
}
fn bound() -> String {
    "100000000".into()
}
fn rot_n() -> u64 {
    100_000
}
fn steps() -> usize {
    64
}
fn tol() -> String {
    "1/100000000".into()
}
fn burn() -> u64 {
    80
}
fn sample() -> usize {
    2000
}
fn symbols() -> usize {
    200
}
fn first() -> Vec<usize> {
    vec![0]
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfArgs {
    /// Exact literal in (0, 1).
    #[arg(long)]
    pub theta: String,
    /// Number of partial quotients.
    #[arg(long, default_value_t = 20)]
    #[serde(default = "twenty")]
    pub n: usize,
    /// Also list this many positive-side denominators.
    #[arg(long)]
    #[serde(default)]
    pub positive_side: Option<usize>,
    /// Also list best-approximation denominators up to this bound.
    #[arg(long)]
    #[serde(default)]
    pub best_upto: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeArgs {
    /// Slope; omit together with `x` for the Fibonacci word.
    #[arg(long)]
    #[serde(default)]
    pub theta: Option<String>,
    /// Intercept in [0, 1).
    #[arg(long)]
    #[serde(default)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "origin")]
    pub origin: u8,
    /// Word length.
    #[arg(long)]
    pub n: usize,
    /// Subword complexity profile up to this factor length.
    #[arg(long)]
    #[serde(default)]
    pub complexity: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StutterArgs {
    /// Shared slope of the codings; omit (with no word) for the Fibonacci word.
    #[arg(long)]
    #[serde(default)]
    pub theta: Option<String>,
    /// Intercepts, separated by `;`.
    #[arg(long, value_delimiter = ';')]
    #[serde(default)]
    pub xs: Vec<String>,
    /// Coefficients c_0, c_1, ..., c_k, separated by `;`.
    #[arg(long, value_delimiter = ';')]
    #[serde(default)]
    pub coeffs: Vec<String>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "origin")]
    pub origin: u8,
    /// Raw 0/1 word instead of codings.
    #[arg(long)]
    #[serde(default)]
    pub word: Option<String>,
    /// Shifts r_0, r_1, ... for a raw word, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub shifts: Vec<String>,
    /// Pair bound d for a raw word.
    #[arg(long)]
    #[serde(default)]
    pub d: Option<usize>,
    /// Stuttering ratio w.
    #[arg(long, default_value = "1")]
    #[serde(default = "one")]
    pub w: String,
    #[arg(long, default_value_t = 4)]
    #[serde(default = "four")]
    pub n_max: usize,
    /// Prefix length examined.
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "prefix")]
    pub prefix: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalArgs {
    /// `fibonacci`, `coding` (with theta and x) or `word`.
    #[arg(long, default_value = "fibonacci")]
    #[serde(default = "fib")]
    pub digits: String,
    #[arg(long)]
    #[serde(default)]
    pub theta: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "origin")]
    pub origin: u8,
    /// Finite 0/1 word, summed as a finite series.
    #[arg(long)]
    #[serde(default)]
    pub word: Option<String>,
    /// Algebraic base with |beta| > 1.
    #[arg(long, default_value = "2")]
    #[serde(default = "two")]
    pub base: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyIneqArgs {
    /// JSON report written by `stutter`.
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, default_value = "2")]
    #[serde(default = "two")]
    pub base: String,
    /// Record indices n to check; all records with leaders when empty.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub records: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationArgs {
    /// Exact literals, separated by `;`.
    #[arg(long, value_delimiter = ';')]
    #[serde(default)]
    pub values: Vec<String>,
    /// Slope for Sturmian-number values S_beta(coding of x_i), appended after `values`.
    #[arg(long)]
    #[serde(default)]
    pub theta: Option<String>,
    #[arg(long, value_delimiter = ';')]
    #[serde(default)]
    pub xs: Vec<String>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "origin")]
    pub origin: u8,
    #[arg(long, default_value = "2")]
    #[serde(default = "two")]
    pub base: String,
    /// Coefficient bound B.
    #[arg(long, default_value = "100000000")]
    #[serde(default = "bound")]
    pub bound: String,
    /// Search over Z[beta] with polynomial coefficients of degree below this.
    #[arg(long)]
    #[serde(default)]
    pub over_base: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeightsArgs {
    /// Integer vector, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub vector: Vec<String>,
    /// Sparse polynomial `poly:e1:c1,e2:c2,...`.
    #[arg(long)]
    #[serde(default)]
    pub poly: Option<String>,
    /// Algebraic number for the Weil height.
    #[arg(long)]
    #[serde(default)]
    pub alg: Option<String>,
    /// Gap criterion: split degrees and beta, applied to `poly`.
    #[arg(long)]
    #[serde(default)]
    pub d0: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub d1: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    pub beta: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotnumArgs {
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    #[serde(default)]
    pub delta: Option<String>,
    /// Iterations.
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "rot_n")]
    pub n: u64,
    /// Offset sweep start and end (rationals).
    #[arg(long)]
    #[serde(default)]
    pub sweep_from: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub sweep_to: Option<String>,
    #[arg(long, default_value_t = 64)]
    #[serde(default = "steps")]
    pub steps: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertArgs {
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    pub theta: String,
    /// Width bound of the offset enclosure (rational).
    #[arg(long, default_value = "1/100000000")]
    #[serde(default = "tol")]
    pub tol: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorArgs {
    #[arg(long)]
    pub lambda: String,
    /// Rotation number; the offset is then the unique one realising it.
    #[arg(long)]
    #[serde(default)]
    pub theta: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub delta: Option<String>,
    #[arg(long, default_value_t = 80)]
    #[serde(default = "burn")]
    pub burn_in: u64,
    /// Number of sampled points.
    #[arg(long, default_value_t = 2000)]
    #[serde(default = "sample")]
    pub n: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub lambda: String,
    #[arg(long)]
    pub theta: String,
    #[arg(long, default_value_t = 80)]
    #[serde(default = "burn")]
    pub burn_in: u64,
    /// Indices into the attractor sample, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    #[serde(default = "first")]
    pub indices: Vec<usize>,
    /// Exact point to decompose instead of sampled ones.
    #[arg(long)]
    #[serde(default)]
    pub y: Option<String>,
    /// Itinerary length N.
    #[arg(long, default_value_t = 200)]
    #[serde(default = "symbols")]
    pub symbols: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportArgs {
    /// JSON report to project.
    #[arg(long)]
    pub report: PathBuf,
    /// `staircase`, `attractor` or `stutter`.
    #[arg(long)]
    pub kind: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl Command {
    /// Name as used in manifests, e.g. `rotor attractor`.
    pub fn name(&self) -> String {
        match self {
            Command::Cf(_) => "cf",
            Command::Code(_) => "code",
            Command::Stutter(_) => "stutter",
            Command::Eval(_) => "eval",
            Command::Keyineq(_) => "keyineq",
            Command::Relation(_) => "relation",
            Command::Heights(_) => "heights",
            Command::Rotor(RotorCommand::Rotnum(_)) => "rotor rotnum",
            Command::Rotor(RotorCommand::Invert(_)) => "rotor invert",
            Command::Rotor(RotorCommand::Attractor(_)) => "rotor attractor",
            Command::Rotor(RotorCommand::Decompose(_)) => "rotor decompose",
            Command::Export(_) => "export",
        }
        .to_string()
    }

    /// Inputs as a JSON object with the same field names as the flags.
    pub fn inputs(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        for _ in self.name().split(' ') {
            v = match v {
                Value::Object(m) => m.into_iter().next().map(|(_, x)| x).unwrap_or(Value::Null),
                other => other,
            };
        }
        v
    }

    /// Rebuild a command from its manifest name and inputs.
    pub fn from_parts(name: &str, inputs: Value) -> Result<Command> {
        let mut v = inputs;
        for part in name.split_whitespace().rev() {
            let mut m = serde_json::Map::new();
            m.insert(part.to_string(), v);
            v = Value::Object(m);
        }
        serde_json::from_value(v).map_err(|e| Error::Validation(format!("manifest inputs for {:?}: {}", name, e)))
    }
}

/// Reproducible experiment description.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    #[serde(default)]
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub inputs: BTreeMap<String, Value>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default = "yes")]
    pub deterministic: bool,
    #[serde(default)]
    pub outputs: Outputs,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

impl ExperimentManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Validation("empty manifest".into()));
        }
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest: {}", e)))
    }

    pub fn command(&self) -> Result<Command> {
        if let Some(v) = self.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Error::Validation(format!("unsupported schema_version {}", v)));
            }
        }
        let name = self.command.as_deref().ok_or_else(|| Error::Validation("manifest has no command".into()))?;
        let inputs = Value::Object(self.inputs.clone().into_iter().collect());
        Command::from_parts(name, inputs)
    }
}

/// The versioned report envelope.
pub fn envelope(cmd: &Command, prec: u32, report: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd.name(),
        "inputs": cmd.inputs(),
        "precision": prec,
        "report": report,
    })
}

/// Run one command and wrap its report.
pub fn run_command(cmd: &Command, prec: Option<u32>) -> Result<Value> {
    let prec = prec.unwrap_or(DEFAULT_PREC);
    if prec < 16 {
        return Err(Error::Validation("precision must be at least 16 bits".into()));
    }
    let report = execute(cmd, prec)?;
    Ok(envelope(cmd, prec, report))
}

/// Run a manifest: execute, then write the requested artifacts. Returns the report.
pub fn run(manifest: &ExperimentManifest, prec_override: Option<u32>) -> Result<Value> {
    let cmd = manifest.command()?;
    let out = run_command(&cmd, prec_override.or(manifest.precision))?;
    if let Some(p) = &manifest.outputs.json {
        fs::write(p, to_json_text(&out))?;
    }
    if let Some(p) = &manifest.outputs.csv {
        let kind = natural_kind(&cmd).ok_or_else(|| Error::Validation(format!("no CSV projection for {}", cmd.name())))?;
        fs::write(p, export_plot_data(&out, kind)?)?;
    }
    Ok(out)
}

/// Canonical JSON text: pretty printed, sorted keys, trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Short text rendering of a report envelope.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    if let Some(c) = v.get("command").and_then(Value::as_str) {
        out.push_str(&format!("command: {}\n", c));
    }
    if let Some(Value::Object(m)) = v.get("report") {
        for (k, x) in m {
            let s = match x {
                Value::String(s) => s.clone(),
                other => serde_json::to_string(other).expect("serializable"),
            };
            let s = if s.len() > 160 { format!("{}... ({} chars)", &s[..150], s.len()) } else { s };
            out.push_str(&format!("{}: {}\n", k, s));
        }
    }
    out
}

/// Machine-readable error line for stderr.
pub fn error_json(e: &Error) -> String {
    json!({"error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code()}).to_string()
}

fn dispatch(cli: &Cli) -> Result<Value> {
    match (&cli.manifest, &cli.command) {
        (Some(p), None) => run(&ExperimentManifest::load(p)?, cli.prec),
        (None, Some(cmd)) => run_command(cmd, cli.prec),
        (Some(_), Some(_)) => Err(Error::Validation("give either --manifest or a subcommand".into())),
        (None, None) => Err(Error::Validation("no command given; see --help".into())),
    }
}

/// Process entry point: prints the report on stdout, a JSON error line on stderr.
pub fn main_entry() -> std::process::ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(v) => {
            match &cli.command {
                // bare CSV on stdout unless written to a file
                Some(Command::Export(a)) if a.out.is_none() && !cli.json => print!("{}", v["report"]["csv"].as_str().unwrap_or_default()),
                _ if cli.json => print!("{}", to_json_text(&v)),
                _ => print!("{}", to_text(&v)),
            }
            std::process::ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            std::process::ExitCode::from(e.exit_code().clamp(1, 255) as u8)
        }
    }
}
