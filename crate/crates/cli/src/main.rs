use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tormod::Convention;
use tormod_cli::cache::{Cache, Lookup};
use tormod_cli::commands::{self, Command, Overrides};
use tormod_cli::config::parse_config;
use tormod_cli::report::{to_json, ErrorReport};
use tormod_cli::CliError;

#[derive(Parser)]
#[command(
    name = "tormod",
    version,
    about = "Exact Ext, resolutions, torsion and formality maps over R[W]"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bigraded Ext table of a pair of modules
    Ext(Args),
    /// Augmented Koszul complex of the ring and its exactness
    Koszul(Args),
    /// Minimal projective resolution of a module
    Resolve(Args),
    /// Torsion submodule and torsion verdict
    Torsion(Args),
    /// Formality map and degreewise quasi-isomorphism check
    Formality(Args),
    /// Ext chart with sparsity flags
    Chart(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Session config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Reported degree range, e.g. -10:10
    #[arg(long, value_name = "MIN:MAX", allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Extra degrees realized beyond the window
    #[arg(long)]
    margin: Option<i64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the ASCII chart here
    #[arg(long, value_name = "PATH")]
    chart: Option<PathBuf>,
    /// Neither read nor write the resolution cache
    #[arg(long)]
    no_cache: bool,
    /// Source module of Ext (overrides the config)
    #[arg(long)]
    source: Option<String>,
    /// Target module of Ext (overrides the config)
    #[arg(long)]
    target: Option<String>,
    /// Module for resolve/torsion (overrides the config)
    #[arg(long)]
    module: Option<String>,
    /// Differential bidegree d_k: (s,t) -> (s+k, t + a*k + b), as A,B
    #[arg(long, value_name = "A,B", allow_hyphen_values = true, value_parser = parse_convention)]
    convention: Option<Convention>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let lo = a.trim().parse::<i64>().map_err(|e| format!("bad MIN: {e}"))?;
    let hi = b.trim().parse::<i64>().map_err(|e| format!("bad MAX: {e}"))?;
    Ok((lo, hi))
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    Ok(Convention {
        a: a.trim().parse().map_err(|e| format!("bad A: {e}"))?,
        b: b.trim().parse().map_err(|e| format!("bad B: {e}"))?,
    })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn execute(command: Command, args: &Args) -> Result<(), CliError> {
    let session = parse_config(&args.config)?;
    let overrides = Overrides {
        window: args.window,
        margin: args.margin,
        source: args.source.clone(),
        target: args.target.clone(),
        module: args.module.clone(),
        convention: args.convention,
    };
    let cache = if args.no_cache {
        Cache::disabled()
    } else {
        Cache::from_env()
    };
    let out = commands::run(command, &session, &overrides, &cache)?;
    match &out.cache {
        Some(Lookup::Hit) => eprintln!("cache: hit"),
        Some(Lookup::Miss) => eprintln!("cache: miss, stored"),
        Some(Lookup::Discarded(reason)) => eprintln!("cache: discarded entry ({reason}), recomputed"),
        Some(Lookup::Disabled) | None => {}
    }
    match (&args.json, &args.chart, command, &out.chart) {
        (None, None, Command::Chart, Some(chart)) => print!("{chart}"),
        (None, _, _, _) => print!("{}", out.json),
        (Some(path), _, _, _) => write_file(path, &out.json)?,
    }
    if let (Some(path), Some(chart)) = (&args.chart, &out.chart) {
        write_file(path, chart)?;
    }
    eprintln!("{}", out.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Ext(a) => (Command::Ext, a),
        Cmd::Koszul(a) => (Command::Koszul, a),
        Cmd::Resolve(a) => (Command::Resolve, a),
        Cmd::Torsion(a) => (Command::Torsion, a),
        Cmd::Formality(a) => (Command::Formality, a),
        Cmd::Chart(a) => (Command::Chart, a),
    };
    match execute(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = to_json(&ErrorReport::from(&e));
            let written = args
                .json
                .as_ref()
                .map(|p| std::fs::write(p, &text).is_ok())
                .unwrap_or(false);
            if !written {
                print!("{text}");
            }
            let _ = std::io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
