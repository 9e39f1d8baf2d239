use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use skein_cli::{exit_code, Engine, Format, ManifoldExpr, RunConfig, RunError, Runner};

/// Dimension of the Kauffman bracket skein module of a closed 3-manifold.
///
/// Every flag can also be set through the environment variable named after
/// it with the SKEIN_ prefix, for example SKEIN_MAX_DEGREE=12.
#[derive(Parser, Debug)]
#[command(name = "skein", version)]
struct Args {
    /// s3, s2xs1, lens(p,q), splice(g,word), splice(g,@file), joined by #.
    #[arg(long, env = "SKEIN_MANIFOLD")]
    manifold: String,
    #[arg(long, env = "SKEIN_ENGINE", value_enum, default_value_t = Engine::Internal)]
    engine: Engine,
    #[arg(long, env = "SKEIN_MAX_DEGREE")]
    max_degree: Option<usize>,
    #[arg(long, env = "SKEIN_SAMPLES", default_value_t = 3)]
    samples: usize,
    #[arg(long, env = "SKEIN_SEED", default_value_t = 0)]
    seed: u64,
    /// Degrees over which the dimension must stay constant.
    #[arg(long, env = "SKEIN_WINDOW", default_value_t = 3)]
    window: usize,
    /// Exact arithmetic over Q(s) instead of sampled primes.
    #[arg(long, env = "SKEIN_EXACT")]
    exact: bool,
    #[arg(long, env = "SKEIN_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for completed rewriting systems.
    #[arg(long, env = "SKEIN_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, env = "SKEIN_THREADS")]
    threads: Option<usize>,
    #[arg(long, env = "SKEIN_EMIT_BASIS")]
    emit_basis: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        max_degree: args.max_degree,
        engine: args.engine,
        samples: args.samples,
        seed: args.seed,
        window: args.window,
        exact: args.exact,
        threads: args.threads,
        cache: args.cache,
        emit_basis: args.emit_basis,
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let manifold: ManifoldExpr = match args.manifold.parse() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: manifold {:?} {e}", args.manifold);
            return ExitCode::from(1);
        }
    };
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match Runner::new(&config).run(&manifold) {
        Ok(report) => {
            match args.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Table => print!("{}", report.to_table()),
            }
            ExitCode::from(exit_code(&report) as u8)
        }
        Err(RunError::Disagreement { manifold, internal, fg }) => {
            eprintln!("error: engines disagree on {manifold}");
            eprintln!("internal: {internal:#?}");
            eprintln!("fg: {fg:#?}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
