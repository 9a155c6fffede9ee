use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use micropolar::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "mps", version, about = "Micropolar spectral solver and audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Direct solve: snapshots and norm series.
    Run(RunArgs),
    /// Picard iteration: per-iterate norm series and Cauchy report.
    Picard(RunArgs),
    /// Select (M, delta, T) for the configured data.
    Params(ParamsArgs),
    /// Corpus audits of the block inequalities, written as CSV.
    Audit {
        #[command(subcommand)]
        which: AuditCommand,
    },
    /// Verification experiments, written as verdict JSON.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Besov norm of one field of a snapshot.
    Norms(NormsArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Run directory; created if missing, must not already hold a manifest.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ParamsArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Take d and n from a config file instead of --d/--n.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum AuditCommand {
    Bernstein {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Blocks to audit; default 1..=j_max.
        #[arg(long, value_delimiter = ',')]
        j: Vec<i32>,
    },
    Triple {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Blocks to audit; default 1..=4 (clipped to j_max).
        #[arg(long, value_delimiter = ',')]
        j: Vec<i32>,
    },
    Partition {
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    Uniqueness {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gronwall constant; default is the run's own requirement.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Energy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Apriori {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Component {
    U,
    W,
}

#[derive(Args, Debug)]
struct NormsArgs {
    /// MPSF1 snapshot.
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, value_enum, default_value_t = Component::U)]
    component: Component,
}

fn configure_threads() -> micropolar::Result<()> {
    let Ok(raw) = std::env::var("MPS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("MPS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size thread pool: {e}")))
}

fn dispatch(cli: Cli) -> micropolar::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Run(a) => commands::run(&a.config, &a.out),
        Command::Picard(a) => commands::picard(&a.config, &a.out),
        Command::Params(a) => commands::params(&a.config, a.out.as_deref()),
        Command::Audit { which } => match which {
            AuditCommand::Bernstein {
                grid,
                a,
                p,
                q,
                count,
                j,
            } => commands::audit_bernstein(&grid.into(), a, p, q, count, &j),
            AuditCommand::Triple { grid, count, j } => commands::audit_triple(&grid.into(), count, &j),
            AuditCommand::Partition { grid } => commands::audit_partition(&grid.into()),
        },
        Command::Verify { which } => match which {
            VerifyCommand::Uniqueness {
                config,
                scale,
                seed,
                c,
                out,
            } => commands::verify_uniqueness(&config, scale, seed, c, out.as_deref()),
            VerifyCommand::Energy { config, tol, out } => commands::verify_energy(&config, tol, out.as_deref()),
            VerifyCommand::Apriori { config, out } => commands::verify_apriori(&config, out.as_deref()),
        },
        Command::Norms(a) => commands::norms(&a.field, a.s, a.p, a.q, matches!(a.component, Component::W)),
    }
}

impl From<GridArgs> for commands::AuditTarget {
    fn from(g: GridArgs) -> Self {
        commands::AuditTarget {
            config: g.config,
            d: g.d,
            n: g.n,
            seed: g.seed,
            out: g.out,
        }
    }
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let text = e.to_string();
            let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("error[E_USAGE]: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), one_line(&e.to_string()));
            ExitCode::FAILURE
        }
    }
}
