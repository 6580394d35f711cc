use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcmod::criterion::{evaluate, RankInput};
use qcmod::io::{
    decomposition_for, emit_report, emit_scan, parse_decomposition_file, parse_rank_source, scan,
    DecompositionCache, Format, ScanOptions,
};
use qcmod::Error;

/// Modular-symbols decomposition of J0(N) and Chabauty-type finiteness conditions.
///
/// Exit status: 0 on success, 1 for usage or input errors, 2 when an internal
/// consistency check fails.
#[derive(Parser, Debug)]
#[command(name = "qcmod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose the Jacobian of X0(N) and evaluate both rank conditions.
    Gamma0 {
        #[arg(long)]
        level: u64,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Directory for cached decompositions.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Evaluate both rank conditions for a decomposition given as JSON.
    FromJson {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Tabulate every level in a range whose curve has genus at least 2.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// JSON object mapping levels to ranks.
        #[arg(long)]
        rank_source: Option<PathBuf>,
        /// Worker threads (0 uses every available core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct RankArgs {
    /// Exact Mordell-Weil rank of J(Q).
    #[arg(long, conflicts_with = "rank_range")]
    rank: Option<u64>,
    /// Known bounds LO:HI on the rank.
    #[arg(long, value_name = "LO:HI", value_parser = parse_rank_range)]
    rank_range: Option<RankInput>,
}

impl RankArgs {
    fn rank(&self) -> RankInput {
        match (self.rank, self.rank_range) {
            (Some(r), _) => RankInput::Exact(r),
            (None, Some(range)) => range,
            (None, None) => RankInput::Unknown,
        }
    }
}

fn parse_rank_range(s: &str) -> Result<RankInput, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| format!("{x:?} is not a nonnegative integer"))
    };
    RankInput::interval(parse(lo)?, parse(hi)?).map_err(|e| e.to_string())
}

fn open_cache(dir: Option<PathBuf>) -> Result<Option<DecompositionCache>, Error> {
    dir.map(DecompositionCache::new).transpose()
}

/// Runs the command, returning its output and whether a fatal inconsistency was found.
fn run(cli: Cli) -> Result<(String, bool), Error> {
    match cli.command {
        Command::Gamma0 {
            level,
            rank,
            format,
            cache,
        } => {
            if level == 0 {
                return Err(Error::ZeroLevel);
            }
            let cache = open_cache(cache)?;
            let d = decomposition_for(level, cache.as_ref())?;
            Ok((emit_report(&evaluate(&d, rank.rank()), format), false))
        }
        Command::FromJson { file, format } => {
            let bytes = std::fs::read(&file)?;
            let (d, rank) = parse_decomposition_file(&bytes)?;
            Ok((emit_report(&evaluate(&d, rank), format), false))
        }
        Command::Scan {
            from,
            to,
            rank_source,
            jobs,
            cache,
            format,
        } => {
            let rank_source = match rank_source {
                Some(path) => parse_rank_source(&std::fs::read(path)?)?,
                None => Default::default(),
            };
            let opts = ScanOptions {
                rank_source,
                cache: open_cache(cache)?,
                jobs,
            };
            let report = scan(from, to, &opts)?;
            let fatal = !report.summary.violations.is_empty();
            Ok((emit_scan(&report, format), fatal))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, fatal)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            if fatal {
                eprintln!("error: internal consistency check failed, see summary");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
