//! Identity files, proof commands, the corpus runner and report records
//! around the `ctproof-core` engine.

pub mod identity;
pub mod report;
pub mod runner;

use std::path::{Path, PathBuf};
use std::time::Instant;

use ctproof_core::exactalg::MultiPoly;
use ctproof_core::hyperterm::{parse_rational, parse_ratfun};
use ctproof_core::synd::{prove, NoClock, ProofReport, ProveOptions, Verdict};
use ctproof_core::telescope::{verify_certificate, Recurrence, DEFAULT_MAX_ORDER};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use identity::{FileError, IdentityFile};
pub use report::{render_summary, render_table, ReportRecord, Row};

/// Process exit codes.
pub mod exit {
    pub const PROVED: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const REFUTED: i32 = 3;
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub certainty: BigRational,
    pub seed: u64,
    pub jobs: usize,
    pub max_order: usize,
    /// Try a direct antidifference before the grid test.
    pub fast_path: bool,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            certainty: BigRational::one(),
            seed: 0,
            jobs: 1,
            max_order: DEFAULT_MAX_ORDER,
            fast_path: true,
            timings: false,
        }
    }
}

/// Accepts `1`, `1/10` or a decimal such as `0.1`; must lie in `(0, 1]`.
pub fn parse_certainty(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let value = match t.split_once('.') {
        Some((int, frac)) if !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit()) => {
            let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().map_err(|_| format!("bad certainty `{t}`"))? };
            let frac_num: BigInt = frac.parse().map_err(|_| format!("bad certainty `{t}`"))?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(int * &scale + frac_num, scale)
        }
        _ => parse_rational(t).map_err(|e| format!("bad certainty `{t}`: {e}"))?,
    };
    if value <= BigRational::zero() || value > BigRational::one() {
        return Err(format!("certainty {value} is not in (0, 1]"));
    }
    Ok(value)
}

/// A finished proof with both the core report and its record.
pub struct ProofRun {
    pub report: ProofReport,
    pub record: ReportRecord,
}

#[derive(Debug)]
pub enum CommandError {
    File(FileError),
    Engine { path: PathBuf, msg: String },
    Usage(String),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::File(e) => write!(f, "{e}"),
            CommandError::Engine { path, msg } => write!(f, "{}: {msg}", path.display()),
            CommandError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<FileError> for CommandError {
    fn from(e: FileError) -> Self {
        CommandError::File(e)
    }
}

/// Proves one parsed identity file.
pub fn prove_identity(file: &IdentityFile, cfg: &RunConfig) -> Result<ProofRun, CommandError> {
    let id = file.to_identity()?;
    let opts = ProveOptions {
        certainty: cfg.certainty.clone(),
        seed: cfg.seed,
        max_order: cfg.max_order,
        fast_path: cfg.fast_path,
    };
    let runner = runner::runner_for(cfg.jobs).map_err(|e| CommandError::Usage(e.to_string()))?;
    let started = Instant::now();
    let report = if cfg.timings {
        prove(&id, &opts, runner.as_ref(), &runner::WallClock::start())
    } else {
        prove(&id, &opts, runner.as_ref(), &NoClock)
    }
    .map_err(|e| CommandError::Engine {
        path: file.path.clone(),
        msg: e.to_string(),
    })?;
    let mut record = ReportRecord::new(&file.name, &report);
    if cfg.timings {
        let ms = u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX);
        record = record.with_timings(&report, ms);
    }
    Ok(ProofRun { report, record })
}

pub fn prove_file(path: &Path, cfg: &RunConfig) -> Result<ProofRun, CommandError> {
    prove_identity(&IdentityFile::read(path)?, cfg)
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Rigorous | Verdict::SemiRigorous => exit::PROVED,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        Verdict::Refuted => exit::REFUTED,
    }
}

/// Identity files of a corpus directory (`*.identity`), sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CommandError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CommandError::Usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "identity"))
        .collect();
    files.sort();
    Ok(files)
}

/// One row per file; failures stay in their row.
pub fn run_corpus(files: &[PathBuf], cfg: &RunConfig) -> Vec<(Row, Option<ProofRun>)> {
    files
        .iter()
        .map(|p| match prove_file(p, cfg) {
            Ok(run) => (Row::Done(run.record.clone()), Some(run)),
            Err(e) => {
                let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                (Row::Failed { name, error: e.to_string() }, None)
            }
        })
        .collect()
}

/// Refuted beats errors, which beat inconclusive results.
pub fn corpus_exit_code(rows: &[Row]) -> i32 {
    let verdicts: Vec<&str> = rows
        .iter()
        .map(|r| match r {
            Row::Done(rec) => rec.verdict.as_str(),
            Row::Failed { .. } => "error",
        })
        .collect();
    if verdicts.contains(&"refuted") {
        exit::REFUTED
    } else if verdicts.contains(&"error") {
        exit::USAGE
    } else if verdicts.contains(&"inconclusive") {
        exit::INCONCLUSIVE
    } else {
        exit::PROVED
    }
}

/// Splits on commas outside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Checks a recurrence (coefficients of `F(n), F(n+1), ...`, comma
/// separated polynomials) and its certificate against the summand of an
/// identity file.
pub fn verify_file(path: &Path, recurrence: &str, certificate: &str) -> Result<bool, CommandError> {
    let file = IdentityFile::read(path)?;
    let id = file.to_identity()?;
    let vars = id.summand.vars().clone();
    let mut coeffs: Vec<MultiPoly> = Vec::new();
    let stripped = recurrence.trim().trim_start_matches('[').trim_end_matches(']');
    for part in split_top_level(stripped) {
        let r = parse_ratfun(part.trim(), &vars).map_err(|e| CommandError::Usage(format!("recurrence `{}`: {e}", part.trim())))?;
        if !r.denom().is_one() {
            return Err(CommandError::Usage(format!("recurrence coefficient `{}` is not a polynomial", part.trim())));
        }
        coeffs.push(r.numer().clone());
    }
    let Some(rec) = Recurrence::new(coeffs) else {
        return Ok(false);
    };
    let cert = parse_ratfun(certificate.trim(), &vars).map_err(|e| CommandError::Usage(format!("certificate: {e}")))?;
    Ok(verify_certificate(&id.summand, &id.k, &id.n, &rec, &cert))
}
