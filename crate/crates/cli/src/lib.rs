//! Argument handling for the `bch` binary, kept in a library so the
//! dispatcher can be driven from tests with in-memory streams.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use bch_core::series::{expand_naive, Pruning};
use bch_core::{
    coefficient_block, coefficient_naive, expand, precompute_tables, verify_convergence, Error,
    Format, Word,
};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

/// Orders above this make the brute-force coefficient painfully slow.
const NAIVE_WARN_ORDER: usize = 20;
/// The naive bench is Ω(4^N); refuse anything past this.
pub const NAIVE_BENCH_MAX_ORDER: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "bch",
    version,
    about = "Exact Baker-Campbell-Hausdorff coefficients"
)]
struct Cli {
    /// Worker threads for series expansion (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient M(w) of a single word
    Coeff {
        #[arg(long)]
        word: String,
        /// Use the brute-force composition sum
        #[arg(long)]
        naive: bool,
    },
    /// Full truncated series up to an order
    Expand {
        #[arg(long)]
        order: usize,
        #[arg(long = "prune-zero-coeff")]
        prune_zero_coeff: bool,
        #[arg(long = "prune-zero-monomial")]
        prune_zero_monomial: bool,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Json)]
        format: SeriesFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the truncated series with log(exp X exp Y) on random matrices
    Verify {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Inspect the f' and g' tables
    Tables {
        #[arg(long = "max-order")]
        max_order: usize,
        /// Print f'(u, 1..=u) rows, tab separated
        #[arg(long)]
        dump: bool,
    },
    /// Time full-series expansion for a range of orders (CSV)
    Bench {
        #[arg(long = "min-order")]
        min_order: usize,
        #[arg(long = "max-order")]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = BenchMode::Block)]
        mode: BenchMode,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesFormat {
    Json,
    Csv,
    Text,
}

impl From<SeriesFormat> for Format {
    fn from(f: SeriesFormat) -> Self {
        match f {
            SeriesFormat::Json => Format::Json,
            SeriesFormat::Csv => Format::Csv,
            SeriesFormat::Text => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMode {
    Block,
    Naive,
}

impl BenchMode {
    fn as_str(self) -> &'static str {
        match self {
            BenchMode::Block => "block",
            BenchMode::Naive => "naive",
        }
    }
}

/// One timed expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub order: usize,
    pub mode: BenchMode,
    pub word_count: usize,
    pub wall_time: f64,
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyWord
            | Error::InvalidCharacter { .. }
            | Error::InvalidOrder { .. }
            | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
        }
    };

    let result = match pool(cli.threads) {
        Ok(pool) => dispatch(cli.command, &pool, out, err),
        Err(f) => Err(f),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_COMPUTATION
        }
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    builder
        .build()
        .map_err(|e| Failure::Computation(e.to_string()))
}

fn dispatch(
    command: Command,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    match command {
        Command::Coeff { word, naive } => {
            let word = Word::parse(&word)?;
            let value = if naive {
                if word.order() > NAIVE_WARN_ORDER {
                    writeln!(
                        err,
                        "warning: naive coefficient of an order-{} word enumerates every composition and may take very long",
                        word.order()
                    )?;
                }
                coefficient_naive(&word)
            } else {
                let tables = precompute_tables(word.order())?;
                coefficient_block(&word, &tables)?
            };
            writeln!(out, "{value}")?;
        }
        Command::Expand {
            order,
            prune_zero_coeff,
            prune_zero_monomial,
            format,
            output,
        } => {
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let tables = precompute_tables(order)?;
            let pruning = Pruning {
                zero_coefficients: prune_zero_coeff,
                zero_monomials: prune_zero_monomial,
            };
            let series = pool.install(|| expand(order, pruning, &tables))?;
            let text = series.serialize(format.into());
            match output {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Verify {
            order,
            dim,
            epsilon,
            samples,
            seed,
            format,
        } => {
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let tables = precompute_tables(order)?;
            let report =
                pool.install(|| verify_convergence(order, dim, epsilon, samples, seed, &tables))?;
            let text = match format {
                ReportFormat::Json => report.to_json(),
                ReportFormat::Text => report.to_text(),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Tables { max_order, dump } => {
            let tables = precompute_tables(max_order)?;
            if dump {
                out.write_all(tables.dump_f_rows().as_bytes())?;
            } else {
                writeln!(
                    out,
                    "max order {}: {} f' entries, {} g' entries",
                    tables.max_order(),
                    tables.f_entry_count(),
                    tables.g_entry_count()
                )?;
            }
        }
        Command::Bench {
            min_order,
            max_order,
            mode,
        } => {
            let records = pool.install(|| bench(min_order, max_order, mode))?;
            out.write_all(bench_csv(&records).as_bytes())?;
        }
    }
    Ok(())
}

/// Times one full expansion per order in `min_order..=max_order`.
fn bench(min_order: usize, max_order: usize, mode: BenchMode) -> Result<Vec<BenchRecord>, Failure> {
    if min_order == 0 || min_order > max_order {
        return Err(Failure::Usage(format!(
            "need 1 <= min-order <= max-order, got {min_order}..{max_order}"
        )));
    }
    if mode == BenchMode::Naive && max_order > NAIVE_BENCH_MAX_ORDER {
        return Err(Failure::Usage(format!(
            "naive mode is capped at order {NAIVE_BENCH_MAX_ORDER}"
        )));
    }
    let tables = match mode {
        BenchMode::Block => Some(precompute_tables(max_order)?),
        BenchMode::Naive => None,
    };
    let mut records = Vec::new();
    for order in min_order..=max_order {
        let start = Instant::now();
        let series = match &tables {
            Some(t) => expand(order, Pruning::default(), t)?,
            None => expand_naive(order, Pruning::default())?,
        };
        let wall_time = start.elapsed().as_secs_f64().max(1e-9);
        records.push(BenchRecord {
            order,
            mode,
            word_count: series.len(),
            wall_time,
        });
    }
    Ok(records)
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("order,mode,word_count,wall_time_seconds\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:.9}\n",
            r.order,
            r.mode.as_str(),
            r.word_count,
            r.wall_time
        ));
    }
    out
}
