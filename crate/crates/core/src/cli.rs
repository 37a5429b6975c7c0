//! Command-line front end. Every command writes CSV (`\n` line endings,
//! floats with 17 significant digits) to `--out` or stdout.
//!
//! Exit codes: 0 success, 2 configuration or model error, 3 oracle
//! validation failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::ar_model::ArModel;
use crate::epsilon::{epsilon_l, EpsilonQuery, DEFAULT_SEARCH_BOUND};
use crate::error::{Error, Result};
use crate::information::{LogBase, Loss, SourceStats};
use crate::oracle::{cross_check, simulate, ValidationRow, DEFAULT_BURN_IN, GENERATOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// `|z|` above this fails `validate`.
pub const VALIDATION_Z_LIMIT: f64 = 5.0;

pub const DEFAULT_MAX_AOI: usize = 30;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const VALIDATION_DELTAS: [usize; 5] = [0, 1, 4, 8, 12];
pub const VALIDATION_LENGTHS: [usize; 3] = [1, 2, 4];

#[derive(Debug, Parser)]
#[command(name = "infoaging", version, about = "AoI-dependent estimation error of noisy Gaussian AR(p) sources")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary autocovariances gamma(0..=max-aoi).
    Acf(CommonArgs),
    /// L-conditional entropy H_L(Y_t | X^l_{t-delta}) over delta and l.
    EntropyCurve(CommonArgs),
    /// epsilon-Markov divergence eps(l) over a [0, M]^2 grid.
    Epsilon(CommonArgs),
    /// Closed-form MMSE vs. least-squares fit on a seeded simulation.
    Validate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Model JSON: {"coeffs": [..], "sigma2_w": r, "sigma2_n": r}
    #[arg(long)]
    pub model: PathBuf,
    /// Feature lengths, `a..b` (inclusive), `a,b,c` or a single value.
    #[arg(long)]
    pub lengths: Option<Lengths>,
    /// Largest AoI delta (for `acf`, the largest lag).
    #[arg(long = "max-aoi")]
    pub max_aoi: Option<usize>,
    #[arg(long)]
    pub loss: Option<Loss>,
    /// `e` or `2`.
    #[arg(long)]
    pub base: Option<LogBase>,
    #[arg(long = "search-bound")]
    pub search_bound: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file, or `-` for stdout.
    #[arg(long)]
    pub out: Option<String>,
}

/// Feature lengths, sorted and deduplicated; every entry is `>= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lengths(pub Vec<usize>);

impl FromStr for Lengths {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidQuery(format!("cannot parse lengths '{s}'"));
        let mut v: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            (a..=b).collect()
        } else {
            s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        v.sort_unstable();
        v.dedup();
        if v.is_empty() || v[0] == 0 {
            return Err(Error::InvalidQuery("feature lengths must be >= 1".into()));
        }
        Ok(Lengths(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Acf,
    EntropyCurve,
    Epsilon,
    Validate,
}

/// Fully resolved and validated parameters for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kind: CommandKind,
    pub model: ArModel,
    pub lengths: Vec<usize>,
    pub max_aoi: usize,
    pub loss: Loss,
    pub base: LogBase,
    pub search_bound: usize,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_command(command: Command) -> Result<Self> {
        let (kind, args) = match command {
            Command::Acf(a) => (CommandKind::Acf, a),
            Command::EntropyCurve(a) => (CommandKind::EntropyCurve, a),
            Command::Epsilon(a) => (CommandKind::Epsilon, a),
            Command::Validate(a) => (CommandKind::Validate, a),
        };
        let model = ArModel::from_path(&args.model)?;
        model.ensure_stationary()?;
        let default_lengths = match kind {
            CommandKind::Validate => VALIDATION_LENGTHS.to_vec(),
            _ => (1..=5).collect(),
        };
        let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
        if kind == CommandKind::Validate && samples < 1000 {
            return Err(Error::InvalidQuery(format!("--samples must be >= 1000, got {samples}")));
        }
        Ok(Self {
            kind,
            model,
            lengths: args.lengths.map(|l| l.0).unwrap_or(default_lengths),
            max_aoi: args.max_aoi.unwrap_or(DEFAULT_MAX_AOI),
            loss: args.loss.unwrap_or(Loss::Quadratic),
            base: args.base.unwrap_or_default(),
            search_bound: args.search_bound.unwrap_or(DEFAULT_SEARCH_BOUND),
            samples,
            seed: args.seed.unwrap_or(DEFAULT_SEED),
            out: args.out.filter(|o| o != "-").map(PathBuf::from),
        })
    }

    fn max_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(1)
    }

    /// One autocovariance table covers every lag the command touches.
    fn required_lag(&self) -> usize {
        let need = match self.kind {
            CommandKind::Acf => self.max_aoi,
            CommandKind::EntropyCurve => self.max_aoi + self.max_length() + 1,
            CommandKind::Epsilon => 2 * self.search_bound + self.max_length(),
            CommandKind::Validate => VALIDATION_DELTAS[VALIDATION_DELTAS.len() - 1] + self.max_length(),
        };
        need.max(2 * self.model.order())
    }

    fn stats(&self) -> Result<SourceStats> {
        SourceStats::from_model(&self.model, self.required_lag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ValidationFailed,
}

/// Seventeen significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn cmd_acf(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let stats = cfg.stats()?;
    writeln!(out, "lag,gamma")?;
    for k in 0..=cfg.max_aoi {
        writeln!(out, "{k},{}", fmt_f64(stats.acf().gamma(k)))?;
    }
    Ok(())
}

pub fn cmd_entropy_curve(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let stats = cfg.stats()?;
    let base_label = match cfg.loss {
        Loss::Quadratic => "none",
        Loss::Log => cfg.base.as_str(),
    };
    let curves = cfg
        .lengths
        .iter()
        .map(|&l| stats.entropy_curve(cfg.loss, l, cfg.max_aoi, cfg.base))
        .collect::<Result<Vec<_>>>()?;
    writeln!(out, "delta,l,loss,base,H")?;
    for d in 0..=cfg.max_aoi {
        for c in &curves {
            writeln!(out, "{d},{},{},{base_label},{}", c.l, cfg.loss, fmt_f64(c.points[d].1))?;
        }
    }
    Ok(())
}

pub fn cmd_epsilon(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let stats = cfg.stats()?;
    writeln!(out, "l,epsilon,argmax_mu,argmax_nu,base")?;
    for &l in &cfg.lengths {
        let r = epsilon_l(&stats, &EpsilonQuery::new(l, cfg.search_bound, cfg.base))?;
        writeln!(out, "{l},{},{},{},{}", fmt_f64(r.epsilon), r.argmax_mu, r.argmax_nu, cfg.base)?;
    }
    Ok(())
}

/// Writes the comparison table and reports whether every `|z|` stays within
/// [`VALIDATION_Z_LIMIT`].
pub fn write_validation(rows: &[ValidationRow], out: &mut dyn Write) -> Result<Outcome> {
    writeln!(out, "delta,l,closed_form,empirical,stderr,z")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.delta,
            r.l,
            fmt_f64(r.closed_form),
            fmt_f64(r.empirical),
            fmt_f64(r.stderr),
            fmt_f64(r.z)
        )?;
    }
    let ok = rows.iter().all(|r| r.z.abs() <= VALIDATION_Z_LIMIT);
    Ok(if ok { Outcome::Success } else { Outcome::ValidationFailed })
}

pub fn validation_grid(lengths: &[usize]) -> Vec<(usize, usize)> {
    VALIDATION_DELTAS
        .iter()
        .flat_map(|&d| lengths.iter().map(move |&l| (d, l)))
        .collect()
}

pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let stats = cfg.stats()?;
    let traj = simulate(&cfg.model, cfg.samples, DEFAULT_BURN_IN, cfg.seed)?;
    let rows = cross_check(&traj, &validation_grid(&cfg.lengths), |d, l| stats.h2_conditional(d, l))?;
    write_validation(&rows, out)
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    match cfg.kind {
        CommandKind::Acf => cmd_acf(cfg, out).map(|_| Outcome::Success),
        CommandKind::EntropyCurve => cmd_entropy_curve(cfg, out).map(|_| Outcome::Success),
        CommandKind::Epsilon => cmd_epsilon(cfg, out).map(|_| Outcome::Success),
        CommandKind::Validate => cmd_validate(cfg, out),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidModel(_) | Error::NonStationary { .. } | Error::DegenerateModel { .. } => "model",
        Error::Io(_) | Error::Json(_) => "io",
        Error::NotPositiveDefinite { .. } | Error::NegativeInformation { .. } | Error::DegenerateData(_) => "numerical",
        _ => "config",
    }
}

fn report_error(err: &mut dyn Write, kind: &str, message: &str) {
    let line = serde_json::json!({ "error": kind, "message": message });
    let _ = writeln!(err, "{line}");
}

/// Entry point shared by the binary and tests. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            report_error(stderr, "usage", first);
            return EXIT_CONFIG;
        }
    };
    let cfg = match RunConfig::from_command(cli.command) {
        Ok(c) => c,
        Err(e) => {
            report_error(stderr, error_kind(&e), &e.to_string());
            return EXIT_CONFIG;
        }
    };
    if cfg.kind == CommandKind::Validate {
        let _ = writeln!(
            stderr,
            "# samples={} burn_in={} seed={} generator={}",
            cfg.samples, DEFAULT_BURN_IN, cfg.seed, GENERATOR
        );
    }

    let result = match &cfg.out {
        Some(path) => File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let outcome = run(&cfg, &mut w)?;
            w.flush()?;
            Ok(outcome)
        }),
        None => run(&cfg, stdout),
    };
    match result {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::ValidationFailed) => {
            report_error(stderr, "validation", "closed form outside oracle tolerance");
            EXIT_VALIDATION
        }
        Err(e) => {
            report_error(stderr, error_kind(&e), &e.to_string());
            EXIT_CONFIG
        }
    }
}

/// Runs with the process arguments and real stdio.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = main_with_args(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    code
}
