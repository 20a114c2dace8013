use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use molspin::cli::{
    load_config, preset, run_scenario, run_sweep, static_profile, write_csv, write_profile_csv,
    write_sweep_csv, CliError, ScenarioConfig, SweepSpec,
};

/// Simulates an oscillating two-spin molecule in a hot environment and
/// writes its observables as CSV.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    /// TOML scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario; overrides the file's `scenario` key.
    #[arg(long)]
    preset: Option<String>,
    /// CSV destination; overrides `output.path`. Use `-` for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parameter sweep, e.g. `tau=6,20,100` or `gamma=log:0.01:0.3:8`.
    #[arg(long)]
    sweep: Option<String>,
    /// Report static entanglement along one period instead of integrating.
    #[arg(long, conflicts_with = "sweep")]
    static_profile: bool,
    /// Print the resolved config as TOML and exit.
    #[arg(long)]
    print_config: bool,
}

fn resolve(args: &Args) -> Result<ScenarioConfig, CliError> {
    match (&args.config, &args.preset) {
        (Some(path), p) => load_config(path, p.as_deref()),
        (None, Some(name)) => {
            let cfg = preset(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
            cfg.validate()?;
            Ok(cfg)
        }
        (None, None) => Err(CliError::Config("either --config or --preset is required".into())),
    }
}

fn sink(args: &Args, cfg: &ScenarioConfig) -> Result<Box<dyn Write>, CliError> {
    let path = args
        .out
        .clone()
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn execute(args: &Args) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    if args.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let sweep = args.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    if let Some(sweep) = sweep {
        let points = run_sweep(&cfg, &sweep)?;
        let mut out = sink(args, &cfg)?;
        write_sweep_csv(&mut out, sweep.parameter, &points)?;
        out.flush()?;
    } else if args.static_profile {
        let rows = static_profile(&cfg)?;
        let mut out = sink(args, &cfg)?;
        write_profile_csv(&mut out, &cfg, &rows)?;
        out.flush()?;
    } else {
        let run = run_scenario(&cfg)?;
        if !run.summary.converged {
            log::warn!(
                "asymptotic cycle not reached after {} cycles (residual {:e})",
                run.summary.n_cycles,
                run.summary.residual
            );
        }
        let mut out = sink(args, &cfg)?;
        write_csv(&mut out, &run)?;
        out.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simulate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
