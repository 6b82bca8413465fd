use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use tripod_cli::config::{load_config, load_preset, Mode};
use tripod_cli::run::{apply_overrides, run, Command, Overrides};
use tripod_cli::CliError;

/// Probe deflection in a tripod atomic vapor driven by a structured control beam.
#[derive(Debug, Parser)]
#[command(name = "tripod", version)]
#[command(group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// TOML config, or a .meta.json sidecar from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Built-in configuration: fig2, fig3 or fig4.
    #[arg(long)]
    preset: Option<String>,

    #[arg(long, default_value = ".")]
    out: PathBuf,

    #[arg(long)]
    steps: Option<usize>,

    #[arg(long, value_enum)]
    mode: Option<Mode>,

    /// Probe offset, cm.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
}

fn execute(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    let mut points = match (&args.config, &args.preset) {
        (Some(path), _) => load_config(path)?,
        (None, Some(name)) => load_preset(name)?,
        (None, None) => unreachable!("clap enforces a source"),
    };
    apply_overrides(&mut points, &Overrides { steps: args.steps, mode: args.mode, x0: args.x0 })?;
    run(&points, args.command, &args.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
