use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dqdgate::harness::{
    cmd_reproduce, cmd_simulate, cmd_sweep, cmd_synthesize, with_workers, ExperimentConfig, ReproduceTarget,
    RunOutcome, SchemeName,
};

#[derive(Parser)]
#[command(name = "dqdgate", version, about = "Composite two-qubit gate synthesis and simulation for silicon DQDs")]
struct Cli {
    /// JSON experiment config; frequencies in Hz.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set device.exchange_max_hz=2e7 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[arg(long, global = true, env = "DQDGATE_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "DQDGATE_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true)]
    scheme: Option<String>,
    /// Initial-state grid size per axis (n^2 states).
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Print the effective config as JSON and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the pulse schedule CSV of the configured scheme.
    Synthesize,
    /// Average fidelity per (N, Rabi error, detuning, initial phase) combination.
    Simulate {
        /// Also write a population/coherence trajectory from (|00>+|01>)/sqrt2.
        #[arg(long)]
        trajectory: bool,
    },
    /// Sensitivity and fidelity of the polynomial pulse over the eta grid.
    Sweep,
    /// Regenerate a dataset: table1, fig1a, fig4c, fig4d, fig5, fig6 or all.
    Reproduce {
        target: String,
        /// Use a 10 x 10 initial-state grid.
        #[arg(long)]
        quick: bool,
    },
}

fn load_config(cli: &Cli) -> dqdgate::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    for kv in &cli.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| dqdgate::Error::InvalidParameter(format!("override '{kv}' is not KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(dir) = &cli.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(s) = &cli.scheme {
        cfg.scheme = s.parse::<SchemeName>()?;
    }
    if let Some(n) = cli.grid_n {
        cfg.grid_n = n;
    }
    match &cli.command {
        Command::Simulate { trajectory: true } => cfg.trajectory = true,
        Command::Reproduce { quick: true, .. } => cfg.grid_n = 10,
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(outcome: &RunOutcome) {
    println!("== {} ({:.1} s)", outcome.manifest.command, outcome.manifest.runtime_s);
    for line in &outcome.summary {
        println!("  {line}");
    }
    for f in &outcome.manifest.files {
        println!("  wrote {} ({} bytes)", f.path, f.bytes);
    }
    for c in outcome.manifest.checks.iter().filter(|c| !c.passed) {
        println!("  CHECK FAILED {}: {}", c.name, c.detail);
    }
}

fn run(cli: &Cli) -> dqdgate::Result<bool> {
    let cfg = load_config(cli)?;
    if cli.print_config {
        println!("{}", cfg.to_json()?);
        return Ok(true);
    }
    let outcomes = with_workers(cli.workers, || -> dqdgate::Result<Vec<RunOutcome>> {
        Ok(match &cli.command {
            Command::Synthesize => vec![cmd_synthesize(&cfg)?],
            Command::Simulate { .. } => vec![cmd_simulate(&cfg)?],
            Command::Sweep => vec![cmd_sweep(&cfg)?],
            Command::Reproduce { target, .. } => {
                let targets = if target == "all" { ReproduceTarget::ALL.to_vec() } else { vec![target.parse()?] };
                targets.into_iter().map(|t| cmd_reproduce(t, &cfg)).collect::<dqdgate::Result<_>>()?
            }
        })
    })??;
    outcomes.iter().for_each(report);
    Ok(outcomes.iter().all(RunOutcome::passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
