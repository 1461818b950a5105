use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use voltplan_cli::commands::{self, RunOptions};
use voltplan_cli::{default_config, load_config, CliError, CliResult, RunConfig};

/// Voltage/frequency/energy planning for parallel workloads on multicore
/// CMOS chips.
#[derive(Parser)]
#[command(name = "voltplan", version, about)]
struct Cli {
    /// TOML run configuration; built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Print the resolved chip parameters with provenance notes, then exit.
    #[arg(long)]
    explain_params: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep core counts for every configured target; one plan CSV each.
    Sweep {
        /// Output directory (overrides the config).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Also emit energy.svg and voltage.svg charts.
        #[arg(long)]
        svg: bool,
    },
    /// Report the minimum-energy feasible operating point per target.
    Optimize {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Sweep every target and summarize the energy/performance frontier.
    Frontier {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Fit k2 and v_th from a `v,f_max` sample CSV (h is fixed from config).
    CalibrateVf {
        #[arg(long, value_name = "CSV")]
        samples: PathBuf,
    },
    /// Fit dyn_const and i_leak from a `v,f,p_w` sample CSV.
    CalibratePower {
        #[arg(long, value_name = "CSV")]
        samples: PathBuf,
    },
    /// Cross-check analytical energies against the trace replay.
    Validate,
}

fn run(cli: Cli) -> CliResult<String> {
    let cfg: RunConfig = match &cli.config {
        Some(path) => load_config(path)?,
        None => default_config(),
    };
    if cli.explain_params {
        return Ok(commands::explain_params(&cfg));
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config(
            "no command given; see --help or use --explain-params".into(),
        ));
    };
    match command {
        Command::Sweep { out, svg } => commands::cmd_sweep(&cfg, &RunOptions { out_dir: out, svg }),
        Command::Optimize { out } => {
            commands::cmd_optimize(&cfg, &RunOptions { out_dir: out, svg: false })
        }
        Command::Frontier { out, svg } => {
            commands::cmd_frontier(&cfg, &RunOptions { out_dir: out, svg })
        }
        Command::CalibrateVf { samples } => commands::cmd_calibrate_vf(&cfg, &samples),
        Command::CalibratePower { samples } => commands::cmd_calibrate_power(&samples),
        Command::Validate => commands::cmd_validate(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error ({}): {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
