//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure or lemma residual over bound,
//! 2 invalid configuration or precondition, 3 inconclusive weight
//! classification, 4 inconsistent verdict, 5 weights not regularly varying.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::corpus;
use crate::error::Error;
use crate::harness::suite::write_lemma_csv;
use crate::harness::{lemma_backward, lemma_forward, random_lemma_suite, verify_theorem, LemmaRecord, Theorem, Verdict};
use crate::oscillation::profile::{sweep, write_profiles_csv, write_sweep_csv};
use crate::oscillation::{Direction, Functional};
use crate::transform::{weighted_mean_field, write_grid_csv};
use crate::variation::{classify, VariationKind};

pub const LEMMA_BOUND: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "tauberian", version, about = "Weighted means of double sequences and finite-scale Tauberian checks")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Corpus name (with `key=value` parameters) or expression in m, n.
    #[arg(long, global = true)]
    pub sequence: Option<String>,
    /// Sets both weight sequences.
    #[arg(long, global = true)]
    pub weights: Option<String>,
    #[arg(long, global = true)]
    pub weights_p: Option<String>,
    #[arg(long, global = true)]
    pub weights_q: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify `weights_p` and write variation.json.
    ClassifyWeights,
    /// Write the σ grid on [0, horizon]² to sigma.csv.
    Transform,
    /// Verify a theorem; write report.json and profiles.csv.
    Analyze {
        #[arg(long)]
        theorem: String,
    },
    /// Run the seeded decomposition suite; write lemma.csv.
    VerifyLemma,
    /// Sample one functional over the ladders; write sweep.csv.
    Sweep {
        #[arg(long)]
        functional: String,
    },
}

/// A failed run: exit code and message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Parse(_) | Error::Domain { .. } | Error::ComplexInput { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

/// File contents are built in memory and only written once everything has
/// succeeded.
struct Outputs(Vec<(&'static str, Vec<u8>)>);

impl Outputs {
    fn write(self, dir: &Path) -> Result<(), Failure> {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for (name, bytes) in self.0 {
            let path = dir.join(name);
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, bytes).map_err(|e| io_failure(&tmp, e))?;
            fs::rename(&tmp, &path).map_err(|e| io_failure(&path, e))?;
        }
        Ok(())
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(h) = cli.horizon {
        cfg.horizon = h;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(s) = &cli.sequence {
        cfg.sequence = s.clone();
    }
    if let Some(w) = &cli.weights {
        cfg.weights_p = w.clone();
        cfg.weights_q = w.clone();
    }
    if let Some(w) = &cli.weights_p {
        cfg.weights_p = w.clone();
    }
    if let Some(w) = &cli.weights_q {
        cfg.weights_q = w.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn csv<F>(f: F) -> Vec<u8>
where
    F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let cfg = resolve(cli)?;
    let seq = corpus::sequence(&cfg.sequence)?;
    let p = corpus::weight(&cfg.weights_p)?;
    let q = corpus::weight(&cfg.weights_q)?;
    let (outputs, code) = match &cli.command {
        Command::ClassifyWeights => {
            let class = classify(&p, cfg.classify_horizon, cfg.tolerances.tol)?;
            let code = if class.kind == VariationKind::Inconclusive { 3 } else { 0 };
            (Outputs(vec![("variation.json", class.to_json().into_bytes())]), code)
        }
        Command::Transform => {
            let field = weighted_mean_field(&seq, &p, &q, cfg.horizon, cfg.horizon)?;
            (Outputs(vec![("sigma.csv", csv(|b| write_grid_csv(&field.sigma, b)))]), 0)
        }
        Command::Analyze { theorem } => {
            let theorem: Theorem = theorem.parse()?;
            let report = verify_theorem(&seq, &p, &q, theorem, &cfg.harness())?;
            let profiles = csv(|b| {
                write_profiles_csv(report.condition_profiles.iter().chain(&report.backward_profiles), b)
            });
            let code = if !report.weights_regular() {
                5
            } else if report.verdict == Verdict::Inconsistent {
                4
            } else {
                0
            };
            (
                Outputs(vec![
                    ("report.json", report.to_json().into_bytes()),
                    ("profiles.csv", profiles),
                ]),
                code,
            )
        }
        Command::VerifyLemma => {
            let mut records = random_lemma_suite(&cfg.lemma_suite())?;
            if let Some(pt) = cfg.lemma_point {
                let d = match pt.direction {
                    Direction::Forward => lemma_forward(&seq, &p, &q, pt.m, pt.n, pt.mu, pt.eta)?,
                    Direction::Backward => lemma_backward(&seq, &p, &q, pt.m, pt.n, pt.mu, pt.eta)?,
                };
                records.push(LemmaRecord {
                    sequence: cfg.lemma_sequences,
                    weights: (p.name().to_string(), q.name().to_string()),
                    m: pt.m,
                    n: pt.n,
                    mu: pt.mu,
                    eta: pt.eta,
                    direction: pt.direction,
                    residual: d.relative_residual(),
                });
            }
            let worst = records.iter().map(|r| r.residual).fold(0.0, f64::max);
            let code = if worst <= LEMMA_BOUND { 0 } else { 1 };
            (Outputs(vec![("lemma.csv", csv(|b| write_lemma_csv(&records, b)))]), code)
        }
        Command::Sweep { functional } => {
            let f = Functional::from_name(functional).ok_or_else(|| {
                let known: Vec<&str> = Functional::ALL.iter().map(|f| f.name()).collect();
                Error::Config(format!("unknown functional `{functional}` (known: {})", known.join(", ")))
            })?;
            let rows = sweep(
                &seq,
                &p,
                &q,
                f,
                &cfg.rungs(),
                &cfg.profile_horizons(),
                cfg.tail_fraction,
                cfg.sweep_points,
                cfg.region_budget,
            )?;
            (Outputs(vec![("sweep.csv", csv(|b| write_sweep_csv(&rows, b)))]), 0)
        }
    };
    outputs.write(&cfg.output_dir)?;
    Ok(code)
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
