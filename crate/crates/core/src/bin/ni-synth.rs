use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ni_synth::cli::{self, Overrides, RunConfig, RunReport};

#[derive(Parser)]
#[command(name = "ni-synth", version, about = "Negative-imaginary analysis and SNI state-feedback synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// NI / SNI / LNI verdicts for the model and its uncertainty
    Analyze(Flags),
    /// Augment the nominal mode and synthesize the SNI state feedback
    Synth(Flags),
    /// Frequency-response tables
    Freqresp(Flags),
    /// Check the proof obligations for a gain
    Certify(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML run configuration; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Modal parameter file
    #[arg(long)]
    modal: Option<PathBuf>,
    /// Number of nominal modes
    #[arg(long)]
    modes: Option<usize>,
    /// Drop all damping terms
    #[arg(long)]
    undamp: bool,
    /// integrator:<k> or pid:<kp>,<ki>,<kd>
    #[arg(long, allow_hyphen_values = true)]
    aug: Option<String>,
    /// Degree of stability
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Log frequency grid lo,hi,n in rad/s
    #[arg(long)]
    grid: Option<String>,
    /// Gain row k1,k2,... for certify
    #[arg(long, allow_hyphen_values = true)]
    gain: Option<String>,
}

impl From<Flags> for Overrides {
    fn from(f: Flags) -> Overrides {
        Overrides {
            config: f.config,
            modal: f.modal,
            modes: f.modes,
            undamp: f.undamp,
            augmentation: f.aug,
            epsilon: f.epsilon,
            grid: f.grid,
            out: f.out,
            gain: f.gain,
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (run, flags): (fn(&RunConfig) -> ni_synth::Result<RunReport>, Flags) = match args.command {
        Command::Analyze(f) => (cli::cmd_analyze, f),
        Command::Synth(f) => (cli::cmd_synth, f),
        Command::Freqresp(f) => (cli::cmd_freqresp, f),
        Command::Certify(f) => (cli::cmd_certify, f),
    };
    let result = RunConfig::resolve(&flags.into()).and_then(|c| run(&c));
    match result {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::error_exit_code(&e) as u8)
        }
    }
}
