//! Runs a preset or a JSON configuration and writes all artifacts.
//!
//! cargo run --release --example run_experiment -- <preset | config.json> [out_dir]
//!
//! Without arguments the preset names are listed.

use std::path::PathBuf;

use aswaves::experiment::PRESET_NAMES;
use aswaves::{parse_config, preset, run};

fn main() -> aswaves::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(what) = args.next() else {
        println!("presets:");
        for name in PRESET_NAMES {
            println!("  {name}");
        }
        return Ok(());
    };
    let cfg = if what.ends_with(".json") {
        let text = std::fs::read_to_string(&what).map_err(|e| aswaves::Error::io(&what, e))?;
        parse_config(&text)?
    } else {
        preset(&what)?
    };
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(format!("run_{}", what.trim_end_matches(".json"))));
    println!(
        "grid {:?} {}x{}, dt = {:.3e}, {} steps",
        cfg.grid.dims,
        cfg.grid.nx,
        cfg.grid.ny,
        cfg.dt(),
        cfg.time.steps
    );
    let out = run(&cfg, Some(&dir))?;
    let r = &out.report;
    println!(
        "{:?} at t = {} ({:.1} s)",
        r.status, r.t_final, r.wall_seconds
    );
    if let Some(stop) = &r.stop {
        println!("stop: {}", stop.reason);
    }
    for f in &r.files {
        println!("  {}", f.display());
    }
    Ok(())
}
