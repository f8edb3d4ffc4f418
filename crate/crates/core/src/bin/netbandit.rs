use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netbandit::cli::{self, SweepSpec, ZetaChoice};
use netbandit::Error;

/// Multi-agent UCB bandits over a lossy d-regular network.
#[derive(Parser)]
#[command(name = "netbandit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (d, p) cell of a config and write CSV traces.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to the config's `output`, then `results`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the number of replications.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare written traces with the regret bound. Exits 2 on a violation.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the regret bound at the horizon for every cell.
    Bound {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        zeta: ZetaArgs,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ZetaArgs {
    /// Fixed zeta (defaults to the config's value).
    #[arg(long)]
    zeta: Option<f64>,
    /// Use the tightest zeta on the grid 1.1, 1.2, ..., 8.
    #[arg(long)]
    zeta_opt: bool,
}

fn load(config: &Path) -> Result<SweepSpec, Error> {
    cli::parse_config(config)
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Run {
            config,
            out,
            reps,
            seed,
        } => {
            let mut spec = load(&config)?;
            if let Some(r) = reps {
                spec.base.replications = r;
            }
            if let Some(s) = seed {
                spec.base.master_seed = s;
            }
            // Re-validate overrides through the same path as the file.
            let spec = cli::parse_config_str(&spec.to_toml(), &config)?;
            let out = out
                .or_else(|| spec.output.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            let outcome = cli::run_sweep(&spec, &out)?;
            for c in &outcome.cells {
                println!(
                    "d={} p={} mean_regret_T={:.3} ci={:.3}",
                    c.degree,
                    cli::format_p(c.p),
                    c.aggregate.final_mean(),
                    c.aggregate.final_ci()
                );
            }
            println!("wrote {} files to {}", outcome.files.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, out } => {
            let spec = load(&config)?;
            let report = cli::verify_bounds(&spec, &out)?;
            for c in &report.cells {
                println!(
                    "d={} p={} max_excess={:.6} at t={} {}",
                    c.degree,
                    cli::format_p(c.p),
                    c.max_excess,
                    c.worst_t,
                    if c.flagged { "VIOLATION" } else { "ok" }
                );
            }
            Ok(if report.has_violations() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Bound { config, zeta } => {
            let spec = load(&config)?;
            let choice = if zeta.zeta_opt {
                ZetaChoice::Tightest
            } else {
                ZetaChoice::Fixed(zeta.zeta.unwrap_or(spec.zeta))
            };
            let spec = SweepSpec {
                zeta: match choice {
                    ZetaChoice::Fixed(z) => z,
                    ZetaChoice::Tightest => spec.zeta,
                },
                ..spec
            };
            let rows = cli::bound_table(&spec, choice)?;
            println!("d,p,zeta,prefactor,log_term,constant_term,bound_T");
            for r in rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.degree,
                    cli::format_p(r.p),
                    r.zeta,
                    r.prefactor,
                    r.log_term,
                    r.constant_term,
                    r.bound
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
