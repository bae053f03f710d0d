use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sga_core::azcomp::Algo;
use sga_core::cli;
use sga_core::pipeline::FocusOptions;

#[derive(Parser)]
#[command(name = "sga", version, about = "Spherical geometry SAR simulation and focusing")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Classic,
    Extended,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate raw point-target echoes.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Focus a raw raster.
    Focus {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "extended")]
        algo: AlgoArg,
        #[arg(long)]
        out: PathBuf,
        /// Scene config to take the acquisition from instead of the sidecar.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Azimuth output density of the Keystone step.
        #[arg(long, default_value_t = 1)]
        az_oversample: usize,
    },
    /// Measure the impulse response of every configured target.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Render a log-magnitude PNG.
    Quicklook {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        png: PathBuf,
    },
    /// Print difference statistics of two rasters as JSON.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn run(args: Args) -> sga_core::Result<()> {
    cli::init_threads(cli::threads_from_env()?)?;
    match args.cmd {
        Cmd::Simulate { config, out } => cli::cmd_simulate(&config, &out),
        Cmd::Focus {
            input,
            algo,
            out,
            config,
            az_oversample,
        } => {
            let opts = FocusOptions {
                algo: match algo {
                    AlgoArg::Classic => Algo::Classic,
                    AlgoArg::Extended => Algo::Extended,
                },
                az_oversample,
            };
            cli::cmd_focus(&input, &out, opts, config.as_deref()).map(|_| ())
        }
        Cmd::Analyze { input, config, report } => cli::cmd_analyze(&input, &config, &report).map(|_| ()),
        Cmd::Quicklook { input, png } => cli::cmd_quicklook(&input, &png),
        Cmd::Compare { a, b } => {
            let stats = cli::cmd_compare(&a, &b)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
