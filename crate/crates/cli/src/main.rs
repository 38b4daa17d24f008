use std::path::PathBuf;
use std::process::ExitCode;

use catlight_cli::{load_spec, run, write_artifacts, ExperimentKind, RunError};
use clap::{Args, Parser, Subcommand};

/// Electron dynamics driven by coherent and cat-state light.
#[derive(Parser)]
#[command(name = "catlight", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-resolved two-electron observables with classical/interference split.
    InterferenceDynamics(RunArgs),
    /// Final negativity against the light amplitude, plus a time-resolved inset.
    NegativitySweep(RunArgs),
    /// Full-versus-effective trace distance against the coupling, with slope fits.
    GammaScaling(RunArgs),
    /// Final-time observables on a coupling × amplitude grid.
    Custom(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with [experiment], [physics] and [light] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the CSV outputs.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<Vec<PathBuf>, RunError> {
    let (spec, warnings) = load_spec(args.config.as_deref(), kind)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build().expect("thread pool construction");
    let artifacts = pool.install(|| run(&spec))?;
    write_artifacts(&spec, &artifacts, &args.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::InterferenceDynamics(a) => (ExperimentKind::InterferenceDynamics, a),
        Command::NegativitySweep(a) => (ExperimentKind::NegativitySweep, a),
        Command::GammaScaling(a) => (ExperimentKind::GammaScaling, a),
        Command::Custom(a) => (ExperimentKind::Custom, a),
    };
    match execute(kind, args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
