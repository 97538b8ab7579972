use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spincal::commands::{couplings, run_config, Context, RunKind};
use spincal::config::{parse_verify, Method};
use spincal::output;
use spincal::verify::verify;
use spincal::CliError;

/// Hyperbolic spin Calogero models: simulation and checks.
#[derive(Parser, Debug)]
#[command(name = "spincal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Seed for models that do not set their own.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of configuration entries run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the reduced system and write the trajectory and drift report.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Write sorted Lax eigenvalues along the trajectory.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Run the structural checks on the listed spaces.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Print the BC_n couplings (g, g1, g2) of an orbit.
    Couplings {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
}

fn read_config(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn context(common: &Common, method: Option<Method>) -> Result<Context, CliError> {
    if common.jobs == 0 {
        return Err(CliError::Config("--jobs must be >= 1".into()));
    }
    Ok(Context {
        out_dir: common.out.clone(),
        seed: common.seed,
        jobs: common.jobs,
        method,
    })
}

fn run_kind(common: &Common, method: Option<Method>, kind: RunKind) -> Result<(), CliError> {
    let ctx = context(common, method)?;
    let bytes = read_config(&common.config)?;
    for r in run_config(&ctx, &bytes, kind)? {
        println!(
            "{}: H0 = {:.6e}, energy drift = {:.3e}, max spectral drift = {:.3e}",
            r.name,
            r.initial_energy,
            r.energy_drift,
            r.lax_spectrum_drift
                .iter()
                .map(|d| d.drift)
                .fold(0.0, f64::max)
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { common, method } => run_kind(&common, method, RunKind::Simulate),
        Command::Spectrum { common, method } => run_kind(&common, method, RunKind::Spectrum),
        Command::Verify { common } => {
            let ctx = context(&common, None)?;
            let bytes = read_config(&common.config)?;
            let text = std::str::from_utf8(&bytes)
                .map_err(|_| CliError::Config("config is not UTF-8".into()))?;
            let cfg = parse_verify(text)?;
            if !ctx.out_dir.is_dir() {
                return Err(CliError::Config(format!(
                    "output directory {} does not exist",
                    ctx.out_dir.display()
                )));
            }
            let rep = verify(&cfg, ctx.seed, ctx.jobs, &bytes);
            for c in &rep.checks {
                println!(
                    "{:<4} {:<26} {:<10} residual={:<12} {}",
                    if c.passed { "ok" } else { "FAIL" },
                    c.name,
                    c.space.as_deref().unwrap_or("-"),
                    c.residual
                        .map(|r| format!("{r:.3e}"))
                        .unwrap_or_else(|| "-".into()),
                    c.detail.as_deref().unwrap_or("")
                );
            }
            output::write_atomic(
                &ctx.out_dir.join("verify.json"),
                output::json(&rep).as_bytes(),
            )?;
            let failed = rep.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
            Ok(())
        }
        Command::Couplings { n, kappa, x } => {
            let c = couplings(n, kappa, x)?;
            println!("g  = {}", output::num(c.g));
            println!("g1 = {}", output::num(c.g1));
            println!("g2 = {}", output::num(c.g2));
            println!("relation residual = {:.3e}", c.relation_residual);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spincal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
