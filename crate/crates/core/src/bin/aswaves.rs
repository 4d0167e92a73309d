//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 integration fault,
//! 4 run stopped by the singularity policy, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use aswaves::diagnostics::{axis_slice, write_slice_rows, SLICES_CSV_HEADER};
use aswaves::experiment::{self, parse_config, preset, read_snapshot, RunStatus};
use aswaves::singularity::{fit_field, WindowPolicy, FIT_CSV_HEADER};
use aswaves::{solve_profile, Axis, Dims, Error, FieldId, TorusGrid};

#[derive(Parser)]
#[command(name = "aswaves", version, about = "Amick-Schonbek Boussinesq lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a solitary-wave profile and save it.
    Solitary {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long = "Nx", default_value_t = 4096)]
        nx: usize,
        #[arg(long = "Lx", default_value_t = 10.0)]
        lx: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment from a config file or a preset.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Fit the analyticity-strip width of a snapshot field.
    Fit {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, default_value = "eta")]
        field: String,
        #[arg(long, default_value = "x")]
        axis: Axis,
    },
    /// Print an axis slice of a snapshot as CSV.
    Slice {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, default_value = "x")]
        axis: Axis,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::UnknownPreset(_) => 2,
        Error::IntegrationFault { .. } => 3,
        _ => 1,
    }
}

fn parse_field(name: &str) -> Result<FieldId, Error> {
    FieldId::ALL
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown field `{name}`")))
}

fn configure_threads() {
    if let Ok(v) = std::env::var("ASBQ_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    log::warn!("could not size the thread pool: {e}");
                }
            }
            _ => log::warn!("ignoring ASBQ_THREADS={v}: expected a positive integer"),
        }
    }
}

fn execute(command: Command) -> Result<u8, Error> {
    match command {
        Command::Solitary {
            c,
            eps,
            nx,
            lx,
            out,
        } => {
            let grid = Arc::new(TorusGrid::new(Dims::One, nx, 1, lx, 0.0)?);
            let p = solve_profile(c, eps, grid, None)?;
            p.save(&out)?;
            println!(
                "c = {c}, eps = {eps}: max V = {:.12}, max Q = {:.12}, residual = {:.3e}",
                p.max_v(),
                p.max_q(),
                p.residual_norm
            );
            Ok(0)
        }
        Command::Run {
            config,
            preset: name,
            out_dir,
        } => {
            let cfg = match (config, name) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    parse_config(&text)?
                }
                (None, Some(name)) => preset(&name)?,
                (None, None) => unreachable!("clap requires one of --config/--preset"),
            };
            let dir = out_dir
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| {
                    PathBuf::from(format!("run_{}", cfg.preset.as_deref().unwrap_or("config")))
                });
            let out = experiment::run(&cfg, Some(&dir))?;
            let r = &out.report;
            println!(
                "{:?} at t = {} after {} steps ({:.1} s); output in {}",
                r.status,
                r.t_final,
                r.steps_taken,
                r.wall_seconds,
                dir.display()
            );
            if let Some(stop) = &r.stop {
                println!("stop: {}", stop.reason);
            }
            if r.resolution_warnings > 0 {
                println!("resolution warnings: {}", r.resolution_warnings);
            }
            Ok(if r.status == RunStatus::Stopped { 4 } else { 0 })
        }
        Command::Fit {
            snapshot,
            field,
            axis,
        } => {
            let (s, _) = read_snapshot(&snapshot)?;
            let fit = fit_field(&s, parse_field(&field)?, axis, &WindowPolicy::default())?;
            println!("{FIT_CSV_HEADER}");
            println!("{}", fit.csv_row());
            Ok(0)
        }
        Command::Slice { snapshot, axis } => {
            let (s, _) = read_snapshot(&snapshot)?;
            let slice = axis_slice(&s, axis)?;
            let mut out = std::io::stdout().lock();
            let io = |e| Error::io("<stdout>", e);
            use std::io::Write;
            writeln!(out, "{SLICES_CSV_HEADER}").map_err(io)?;
            write_slice_rows(&mut out, &slice).map_err(io)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
