use std::path::PathBuf;
use std::process::ExitCode;

use aeris_sim::config::ExperimentConfig;
use aeris_sim::experiment::run_experiment_threads;
use aeris_sim::output::emit;
use clap::{Parser, Subcommand};

/// Aerial active-RIS backhaul planner: seeded sweeps with CSV/JSON output.
#[derive(Parser)]
#[command(name = "aeris", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write results.csv, summary.csv and results.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Realizations per sweep value (overrides `seeds`).
        #[arg(long)]
        seeds: Option<usize>,
        /// `axis=v1,v2,...` with axis one of d_G, H, N, alpha, af_distance.
        #[arg(long)]
        sweep: Option<String>,
        /// Comma-separated subset of active, passive, af, detuned.
        #[arg(long)]
        methods: Option<String>,
        /// Worker threads; 0 uses all cores (overrides `threads`).
        #[arg(long)]
        threads: Option<usize>,
        /// Record per-row wall-clock time (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Validate a config without running it.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Check { config } => match ExperimentConfig::load(&config) {
            Ok(_) => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Command::Run {
            config,
            out,
            seeds,
            sweep,
            methods,
            threads,
            timing,
        } => {
            let cfg = (|| {
                let mut cfg = ExperimentConfig::load(&config)?;
                if let Some(n) = seeds {
                    cfg.seeds = n;
                }
                if let Some(s) = sweep {
                    cfg.apply_sweep(&s)?;
                }
                if let Some(m) = methods {
                    cfg.apply_methods(&m)?;
                }
                if let Some(t) = threads {
                    cfg.threads = t;
                }
                if let Some(o) = out {
                    cfg.out_dir = o;
                }
                cfg.timing |= timing;
                cfg.validate()?;
                Ok::<_, aeris_sim::ConfigError>(cfg)
            })();
            let cfg = match cfg {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let result = match run_experiment_threads(&cfg, cfg.threads) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: cannot start worker pool: {e}");
                    return ExitCode::from(EXIT_IO);
                }
            };
            let failed = result.rows.iter().filter(|r| r.error.is_some()).count();
            match emit(&result, &cfg.out_dir, cfg.json) {
                Ok(paths) => {
                    println!(
                        "{} rows ({} failed) -> {}",
                        result.rows.len(),
                        failed,
                        paths.csv.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_IO)
                }
            }
        }
    }
}
