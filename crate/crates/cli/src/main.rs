use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctproof::{
    corpus_exit_code, corpus_files, exit, parse_certainty, prove_file, render_summary, render_table, run_corpus,
    verdict_exit_code, verify_file, CommandError, RunConfig,
};

#[derive(Parser)]
#[command(name = "ctproof", version, about = "Exact proofs of terminating hypergeometric identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove the identity in FILE
    Prove {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prove every `*.identity` file in DIR and print a summary table
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a recurrence and its certificate against the summand in FILE
    Verify {
        file: PathBuf,
        /// Coefficients of F(n), F(n+1), ... as comma-separated polynomials
        #[arg(long, allow_hyphen_values = true)]
        recurrence: String,
        /// Rational function R(n, k)
        #[arg(long, allow_hyphen_values = true)]
        certificate: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Fraction of grid points to test, in (0, 1]; 1 gives a rigorous proof
    #[arg(long, default_value = "1")]
    certainty: String,
    /// Seed for grid sampling and parameter specialization
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parallel grid workers
    #[arg(long, env = "CTPROOF_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Largest recurrence order tried
    #[arg(long, default_value_t = ctproof_core::telescope::DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Skip the direct antidifference and always run the grid test
    #[arg(long)]
    no_gosper: bool,
    /// Append one JSON record per identity to PATH (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include stage timings and durations (makes output run-dependent)
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, CommandError> {
        Ok(RunConfig {
            certainty: parse_certainty(&self.certainty).map_err(CommandError::Usage)?,
            seed: self.seed,
            jobs: self.jobs,
            max_order: self.max_order,
            fast_path: !self.no_gosper,
            timings: self.timings,
        })
    }
}

fn json_sink(path: &Option<PathBuf>) -> Result<Option<Box<dyn Write>>, CommandError> {
    match path {
        None => Ok(None),
        Some(p) if p == Path::new("-") => Ok(Some(Box::new(io::stdout()))),
        Some(p) => File::create(p)
            .map(|f| Some(Box::new(f) as Box<dyn Write>))
            .map_err(|e| CommandError::Usage(format!("{}: {e}", p.display()))),
    }
}

fn write_line(sink: &mut Option<Box<dyn Write>>, line: &str) -> Result<(), CommandError> {
    if let Some(w) = sink {
        writeln!(w, "{line}").map_err(|e| CommandError::Usage(format!("writing report: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CommandError> {
    match cli.command {
        Command::Prove { file, run } => {
            let cfg = run.config()?;
            let mut sink = json_sink(&run.json)?;
            let proof = prove_file(&file, &cfg)?;
            if run.json.as_deref() != Some(Path::new("-")) {
                print!("{}", render_summary(&proof.record, &proof.report));
            }
            write_line(&mut sink, &proof.record.to_json_line())?;
            Ok(verdict_exit_code(proof.report.verdict))
        }
        Command::Corpus { dir, run } => {
            let cfg = run.config()?;
            let mut sink = json_sink(&run.json)?;
            let files = corpus_files(&dir)?;
            let results = run_corpus(&files, &cfg);
            let rows: Vec<_> = results.into_iter().map(|(row, _)| row).collect();
            for row in &rows {
                if let ctproof::Row::Done(rec) = row {
                    write_line(&mut sink, &rec.to_json_line())?;
                }
            }
            if run.json.as_deref() != Some(Path::new("-")) {
                print!("{}", render_table(&rows, cfg.timings));
            }
            Ok(corpus_exit_code(&rows))
        }
        Command::Verify {
            file,
            recurrence,
            certificate,
        } => {
            if verify_file(&file, &recurrence, &certificate)? {
                println!("certificate valid");
                Ok(exit::PROVED)
            } else {
                println!("certificate invalid");
                Ok(exit::REFUTED)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::USAGE } else { exit::PROVED };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
