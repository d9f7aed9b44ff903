mod cache;
mod commands;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fermat_hodge::hilbert::Algorithm;
use fermat_hodge::lattice::Budget;

use crate::cache::Cache;
use crate::store::Store;

/// Exit statuses.
pub const OK: u8 = 0;
pub const VERIFY_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(name = "fermat", version, about = "Indecomposables of M_m, quasi-decomposability and Hodge labels for Fermat varieties")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Cache directory (default: $FERMAT_CACHE_DIR, then the platform data dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Wall-clock budget for a command, in seconds.
    #[arg(long, global = true, default_value_t = 600.0)]
    max_seconds: f64,
    /// Cap on intermediate vectors or level sizes.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    max_candidates: usize,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report cache activity on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmArg {
    Completion,
    Levelwise,
}

#[derive(Subcommand)]
enum Command {
    /// Indecomposable elements of M_m.
    Basis {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "completion")]
        algorithm: AlgorithmArg,
        /// Last level of a levelwise scan.
        #[arg(long)]
        max_level: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// phi(m), the largest level of an indecomposable.
    Phi {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// phi(m) for a range of moduli.
    PhiTable {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Condition (P^n_m), or (P_m) without --n.
    Check {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        exclude_standard: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// (P^4_m) with standard exclusion over a range of moduli.
    ScanFourfolds {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long)]
        coprime_to: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hodge labels B^n_m, sorted.
    Hodge {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// List every ordering instead of one representative per label.
        #[arg(long)]
        orbits: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The strongest known result for X^n_m.
    Verdict {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Recheck the non-quasi-decomposable element of M_33.
    #[command(name = "verify-33")]
    Verify33,
    /// Check the power-sum identity on seeded random tuples.
    Newton {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let g = &cli.global;
    if let Some(j) = g.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let cache = if g.no_cache {
        None
    } else {
        let dir = Cache::resolve_dir(g.cache_dir.as_deref());
        match Cache::open(dir.clone()) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: cache disabled, cannot use {}: {e}", dir.display());
                None
            }
        }
    };
    if g.max_seconds.is_nan() || g.max_seconds <= 0.0 {
        eprintln!("error: --max-seconds must be positive");
        return ExitCode::from(USAGE);
    }
    let budget = Budget::unlimited().with_seconds(g.max_seconds).with_max_candidates(g.max_candidates);
    let store = Store { cache, budget, verbose: g.verbose };

    let result = match cli.command {
        Command::Basis { m, algorithm, max_level, format } => {
            let algorithm = match algorithm {
                AlgorithmArg::Completion => Algorithm::Completion,
                AlgorithmArg::Levelwise => Algorithm::Levelwise,
            };
            commands::basis(&store, m, algorithm, max_level, format)
        }
        Command::Phi { m, format } => commands::phi(&store, m, format),
        Command::PhiTable { from, to, format } => commands::phi_table(&store, from, to, format),
        Command::Check { m, n, exclude_standard, format } => commands::check(&store, m, n, exclude_standard, format),
        Command::ScanFourfolds { from, to, coprime_to, format } => commands::scan(&store, from, to, coprime_to, format),
        Command::Hodge { m, n, orbits, format } => commands::hodge(m, n, orbits, format),
        Command::Verdict { m, n, format } => commands::verdict(&store, m, n, format),
        Command::Verify33 => commands::verify_33(&store),
        Command::Newton { d, trials, seed, format } => commands::newton(d, trials, seed, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
