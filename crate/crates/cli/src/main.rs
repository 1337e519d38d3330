use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use stackopt_cli::commands::{
    cmd_evaluate, cmd_hv, cmd_optimize, cmd_sweep, cmd_tipping, EvaluateArgs, HvArgs, OptimizeArgs,
    SweepArgs, TippingArgs,
};

/// Joint optimization of per-phase AI automation and software team sizing.
#[derive(Debug, Parser)]
#[command(name = "stackopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a fixed automation vector: labor breakdown, quality, tipping
    Evaluate(EvaluateArgs),
    /// Run seeded optimizations and write run/front/summary reports
    Optimize(OptimizeArgs),
    /// Tipping-point analysis for a vector or a scalar fraction
    Tipping(TippingArgs),
    /// Sensitivity sweep over oversight and coordination factors
    Sweep(SweepArgs),
    /// Normalized hypervolume of a front CSV
    Hv(HvArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let result = match &cli.command {
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Tipping(args) => cmd_tipping(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Hv(args) => cmd_hv(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
