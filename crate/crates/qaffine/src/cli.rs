//! Command-line driver: argument parsing, the `verify`, `genfun`, `bracket`
//! and `catalog` subcommands, and exit codes.
//!
//! Reports go to stdout or `--out` as JSON; a human-readable summary goes to
//! stderr. Exit codes: 0 success, 1 some instance failed, 2 configuration or
//! input error, 3 internal failure.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::bracket::{catalog_to_json, lemma_catalog, matrix_entries, BracketError, BracketExpr};
use crate::fock::Truncation;
use crate::genfun::coefficient_table;
use crate::relations::{run_suite, Checker, ConfigError, Mode, SuiteConfig};
use crate::roots::{RootSystem, Sign};
use crate::scalars::ExactField;
use crate::vertex::VertexEngine;

/// Environment variable holding the log filter, e.g. `QAFFINE_LOG=info`.
pub const LOG_ENV: &str = "QAFFINE_LOG";

/// Top-level arguments.
#[derive(Debug, Parser)]
#[command(
    name = "qaffine",
    version,
    about = "Exact checks of two-parameter quantum affine algebra relations on the level-one Fock module"
)]
pub struct Cli {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run relation families and write a JSON report.
    Verify(VerifyArgs),
    /// Print coefficients of the generating functions g±_ij(z).
    Genfun(GenfunArgs),
    /// Evaluate a bracket expression file on the Fock window.
    Bracket(BracketArgs),
    /// Write the catalog of bracket identities as JSON.
    Catalog(TypeArgs),
}

/// Root system selection.
#[derive(Debug, Clone, Args)]
pub struct TypeArgs {
    /// Type letter: A, D or E.
    #[arg(long = "type", default_value = "A")]
    pub family: String,
    /// Finite rank.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
}

impl TypeArgs {
    fn root_system(&self) -> Result<RootSystem, ConfigError> {
        let cfg = SuiteConfig { family: self.family.clone(), rank: self.rank, ..Default::default() };
        RootSystem::build(cfg.lie_type()?).map_err(|e| ConfigError::Unsupported {
            family: self.family.clone(),
            rank: self.rank,
            reason: e.to_string(),
        })
    }
}

/// Arguments of `verify`. Flags override values from `--config`.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Type letter: A, D or E.
    #[arg(long = "type")]
    pub family: Option<String>,
    /// Finite rank.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Bound on the total degree of window states.
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Bound on each lattice coordinate of window states.
    #[arg(long)]
    pub beta_box: Option<u32>,
    /// Families, ranges (D1..D9) or groups (drinfeld, field, vertex, chevalley, lemmas, all).
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// exact or sampled.
    #[arg(long)]
    pub mode: Option<String>,
    /// Number of sample points in sampled mode.
    #[arg(long)]
    pub points: Option<usize>,
    /// Seed of the sample points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Bound on |k| for x-modes.
    #[arg(long)]
    pub max_mode: Option<i32>,
    /// Coefficient order of the field-level families.
    #[arg(long)]
    pub field_order: Option<i32>,
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Arguments of `genfun`.
#[derive(Debug, Args)]
pub struct GenfunArgs {
    /// Root system.
    #[command(flatten)]
    pub rs: TypeArgs,
    /// First node.
    #[arg(short = 'i', default_value_t = 1)]
    pub i: usize,
    /// Second node.
    #[arg(short = 'j', default_value_t = 1)]
    pub j: usize,
    /// Highest coefficient index.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// + or -.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub sign: String,
    /// Output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Arguments of `bracket`.
#[derive(Debug, Args)]
pub struct BracketArgs {
    /// Expression file in the JSON schema, or `-` for stdin.
    pub file: PathBuf,
    /// Root system.
    #[command(flatten)]
    pub rs: TypeArgs,
    /// Bound on the total degree of window states.
    #[arg(long, default_value_t = 3)]
    pub cutoff: u32,
    /// Bound on each lattice coordinate of window states.
    #[arg(long, default_value_t = 2)]
    pub beta_box: u32,
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid configuration.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// Invalid bracket expression.
    #[error(transparent)]
    Bracket(#[from] BracketError),
    /// Invalid argument value.
    #[error("{0}")]
    Usage(String),
    /// File system error.
    #[error("{path}: {source}")]
    Io {
        /// Path involved.
        path: String,
        /// Underlying error.
        source: std::io::Error,
    },
}

impl CliError {
    /// Exit code: 2 for configuration and input errors, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Bracket(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => print_stdout(text),
    }
}

/// Writes a line to stdout; a closed pipe ends output silently.
fn print_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "stdout".into(), source: e }),
        _ => Ok(()),
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Builds the suite configuration from a config file and flags.
pub fn verify_config(a: &VerifyArgs) -> Result<SuiteConfig, CliError> {
    let mut cfg = match &a.config {
        Some(p) => SuiteConfig::from_json(&read_input(p)?)?,
        None => SuiteConfig::default(),
    };
    if let Some(v) = &a.family {
        cfg.family = v.clone();
    }
    if let Some(v) = a.rank {
        cfg.rank = v;
    }
    if let Some(v) = a.cutoff {
        cfg.truncation.max_osc_degree = v;
    }
    if let Some(v) = a.beta_box {
        cfg.truncation.beta_box = v;
    }
    if let Some(v) = &a.families {
        cfg.families = v.clone();
    }
    if let Some(v) = &a.mode {
        cfg.mode = v.parse::<Mode>()?;
    }
    if let Some(v) = a.points {
        cfg.points = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.jobs {
        cfg.jobs = v;
    }
    if let Some(v) = a.max_mode {
        cfg.ranges.max_mode = v;
        cfg.ranges.max_heis_mode = v;
    }
    if let Some(v) = a.field_order {
        cfg.field_order = v;
    }
    Ok(cfg)
}

/// `verify`: returns 0 when no instance fails and 1 otherwise.
pub fn cmd_verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let cfg = verify_config(a)?;
    let report = run_suite(&cfg)?;
    write_output(&a.out, &report.to_json())?;
    for (fam, t) in report.by_family() {
        eprintln!("{fam:>10}: {} pass, {} fail, {} skipped, {} states", t.pass, t.fail, t.skipped, t.tested_states);
    }
    let failures = report.failures();
    eprintln!("{} instances, {failures} failed", report.instances.len());
    Ok(if failures == 0 { 0 } else { 1 })
}

/// `genfun`: prints the coefficient table as JSON.
pub fn cmd_genfun(a: &GenfunArgs) -> Result<u8, CliError> {
    let rs = a.rs.root_system()?;
    let n = rs.rank();
    for (name, v) in [("i", a.i), ("j", a.j)] {
        if v == 0 || v > n {
            return Err(CliError::Usage(format!("-{name} {v} outside 1..={n}")));
        }
    }
    let sign = match a.sign.as_str() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => return Err(CliError::Usage(format!("--sign {other:?}, expected + or -"))),
    };
    let table = coefficient_table(&rs, a.i, a.j, sign, a.order);
    write_output(&a.out, &serde_json::to_string_pretty(&table).expect("serializable"))?;
    Ok(0)
}

/// `bracket`: prints the nonzero matrix entries of the expression on the
/// window, or `ZERO OPERATOR`. Images leaving the window are listed on
/// stderr as a truncation-overflow notice.
pub fn cmd_bracket(a: &BracketArgs) -> Result<u8, CliError> {
    let expr = BracketExpr::from_json(&read_input(&a.file)?)?;
    let rs = std::sync::Arc::new(a.rs.root_system()?);
    let trunc = Truncation { max_osc_degree: a.cutoff, beta_box: a.beta_box };
    let mut ch = Checker::new(std::sync::Arc::new(VertexEngine::new(rs.clone(), ExactField)), trunc);
    let entries = matrix_entries(&mut ch, &expr)?;
    if entries.is_empty() {
        print_stdout("ZERO OPERATOR")?;
        return Ok(0);
    }
    let rs = ch.root_system().clone();
    let mut outside = Vec::new();
    let mut lines = Vec::new();
    for col in &entries {
        for (state, coeff) in &col.image {
            lines.push(format!("{} -> {}: {coeff}", col.input.render(), state.render()));
            if !trunc.contains(&rs, state) {
                outside.push(state.render());
            }
        }
    }
    print_stdout(&lines.join("\n"))?;
    outside.sort();
    outside.dedup();
    if !outside.is_empty() {
        let shown: Vec<&str> = outside.iter().take(10).map(String::as_str).collect();
        let more = if outside.len() > shown.len() {
            format!(" and {} more", outside.len() - shown.len())
        } else {
            String::new()
        };
        eprintln!("TruncationOverflow: {} image states outside the window: {}{more}", outside.len(), shown.join(", "));
    }
    Ok(0)
}

/// `catalog`: writes the bracket-identity catalog of a root system.
pub fn cmd_catalog(a: &TypeArgs) -> Result<u8, CliError> {
    let rs = a.root_system()?;
    print_stdout(&catalog_to_json(&rs, &lemma_catalog(&rs)))?;
    Ok(0)
}

/// Initializes logging from [`LOG_ENV`].
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Runs a parsed command line and returns the process exit code. Panics
/// inside a subcommand are reported as internal failures (exit 3).
pub fn run(cli: Cli) -> ExitCode {
    let result = std::panic::catch_unwind(move || match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Genfun(a) => cmd_genfun(a),
        Command::Bracket(a) => cmd_bracket(a),
        Command::Catalog(a) => cmd_catalog(a),
    });
    match result {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qaffine").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn verify_flags_override_defaults() {
        let Command::Verify(a) =
            parse(&["verify", "--type", "D", "--rank", "4", "--families", "D1..D3,lemmas", "--cutoff", "2"]).command
        else {
            panic!("verify expected")
        };
        let cfg = verify_config(&a).unwrap();
        assert_eq!((cfg.family.as_str(), cfg.rank), ("D", 4));
        assert_eq!(cfg.families, vec!["D1..D3", "lemmas"]);
        assert_eq!(cfg.truncation.max_osc_degree, 2);
        assert_eq!(cfg.truncation.beta_box, 2);
    }

    #[test]
    fn config_errors_map_to_exit_code_two() {
        let Command::Verify(a) = parse(&["verify", "--type", "E", "--rank", "7"]).command else { panic!() };
        let err = cmd_verify(&a).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let Command::Verify(a) = parse(&["verify", "--mode", "fuzzy"]).command else { panic!() };
        assert_eq!(cmd_verify(&a).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn genfun_rejects_out_of_range_nodes() {
        let Command::Genfun(a) = parse(&["genfun", "--type", "A", "--rank", "3", "-i", "4"]).command else { panic!() };
        assert_eq!(cmd_genfun(&a).unwrap_err().exit_code(), 2);
    }
}
