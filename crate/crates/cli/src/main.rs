//! `qsphere`: batch front end for the spectral triple workbench.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! usage and configuration errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use qsphere::QContext;
use serde_json::json;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "qsphere", version, about = "Spectral triples on odd-dimensional quantum spheres")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Deformation parameter in [0, 1).
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Rank l of the sphere S_q^{2l+1}.
    #[arg(long, global = true)]
    ell: Option<usize>,
    /// Truncation of every lattice coordinate (>= 2).
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Override the pass tolerance of the command.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run structural checks and report their deviations.
    Verify {
        /// relations, decompositions, commutators, seminorms, cg or all.
        check: Option<String>,
    },
    /// Residue tables of spectral zeta functions.
    DimensionSpectrum {
        /// JSON file holding a degree-zero torus symbol (repeatable).
        #[arg(long)]
        symbol: Vec<PathBuf>,
    },
    /// Decay of the residuals behind the smoothing-operator statements.
    Decay {
        /// Generator index; all of 1..=l+1 when omitted.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Clebsch-Gordan coefficients of one pattern against all moves of a level.
    CgTable {
        /// Move level.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        /// Explicit pattern, rows separated by `;`, e.g. `2,1,0;2,1;1`.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Sparse triplets of a built operator.
    OperatorDump {
        /// y<j>, z<j>, zstar<j>, x<j>, u, d-torus or d-eq.
        #[arg(long)]
        op: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::DimensionSpectrum { .. } => "dimension-spectrum",
            Command::Decay { .. } => "decay",
            Command::CgTable { .. } => "cg-table",
            Command::OperatorDump { .. } => "operator-dump",
        }
    }
}

/// Raised for anything that is the caller's fault; mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Library errors caused by bad input count as usage errors.
pub fn classify(err: qsphere::Error) -> anyhow::Error {
    use qsphere::Error::*;
    match err {
        Internal(_) | Accuracy(_) | InsufficientData(_) | Singularity { .. } | Radicand { .. } => err.into(),
        other => UsageError(other.to_string()).into(),
    }
}

/// Fully resolved settings: flags, then the config file, then defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub q: f64,
    pub ell: usize,
    pub cutoff: usize,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub check: Option<String>,
    pub j: Option<usize>,
    pub i: Option<usize>,
    pub n: Option<i64>,
    pub k: Option<i64>,
    pub pattern: Option<String>,
    pub op: Option<String>,
    pub symbols: Vec<PathBuf>,
}

impl Settings {
    pub fn ctx(&self) -> anyhow::Result<QContext> {
        let ctx = QContext::new(self.q, self.ell, self.cutoff).map_err(classify)?;
        match self.tol {
            Some(t) => ctx.with_tol(t).map_err(classify),
            None => Ok(ctx),
        }
    }

    pub fn params(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "ell": self.ell,
            "cutoff": self.cutoff,
            "tol": self.tol,
            "seed": self.seed,
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn pick<T: FromStr>(
    flag: Option<T>,
    file: &std::collections::BTreeMap<String, (String, usize)>,
    key: &str,
) -> anyhow::Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some((raw, line)) => match raw.parse() {
            Ok(v) => Ok(Some(v)),
            Err(_) => usage(format!("config line {line}: cannot read {key} = {raw:?}")),
        },
        None => Ok(None),
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<Settings> {
    let c = &cli.common;
    let file = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            config::parse(&text, cli.command.name())
                .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?
        }
        None => Default::default(),
    };
    let format = match c.format {
        Some(f) => f,
        None => match file.get("format").map(|(v, l)| (v.as_str(), *l)) {
            None | Some(("json", _)) => Format::Json,
            Some(("csv", _)) => Format::Csv,
            Some((other, line)) => return usage(format!("config line {line}: unknown format {other:?}")),
        },
    };
    let mut s = Settings {
        q: pick(c.q, &file, "q")?.unwrap_or(0.5),
        ell: pick(c.ell, &file, "ell")?.unwrap_or(2),
        cutoff: pick(c.cutoff, &file, "cutoff")?.unwrap_or(6),
        tol: pick(c.tol, &file, "tol")?,
        format,
        out: pick(c.out.clone(), &file, "out")?,
        seed: pick(c.seed, &file, "seed")?.unwrap_or(0),
        check: pick(None, &file, "check")?,
        j: pick(None, &file, "j")?,
        i: pick(None, &file, "i")?,
        n: pick(None, &file, "n")?,
        k: pick(None, &file, "k")?,
        pattern: pick(None, &file, "pattern")?,
        op: pick(None, &file, "op")?,
        symbols: file.get("symbol").map(|(v, _)| vec![PathBuf::from(v)]).unwrap_or_default(),
    };
    match &cli.command {
        Command::Verify { check } => s.check = check.clone().or(s.check),
        Command::DimensionSpectrum { symbol } if !symbol.is_empty() => s.symbols = symbol.clone(),
        Command::DimensionSpectrum { .. } => {}
        Command::Decay { j } => s.j = j.or(s.j),
        Command::CgTable { i, n, k, pattern } => {
            s.i = i.or(s.i);
            s.n = n.or(s.n);
            s.k = k.or(s.k);
            s.pattern = pattern.clone().or(s.pattern);
        }
        Command::OperatorDump { op } => s.op = op.clone().or(s.op),
    }
    // validate the shared context before any work starts
    s.ctx()?;
    Ok(s)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let settings = resolve(cli)?;
    let report = match &cli.command {
        Command::Verify { .. } => commands::verify::run(&settings)?,
        Command::DimensionSpectrum { .. } => commands::spectrum::run(&settings)?,
        Command::Decay { .. } => commands::decay::run(&settings)?,
        Command::CgTable { .. } => commands::cg_table::run(&settings)?,
        Command::OperatorDump { .. } => commands::dump::run(&settings)?,
    };
    report.emit(settings.format, settings.out.as_deref())?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
