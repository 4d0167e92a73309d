//! Binary snapshots: interrupt a run, restart from the file and compare
//! with the uninterrupted evolution.
//!
//! cargo run --release --example snapshot_restart

use aswaves::experiment::{read_snapshot, write_snapshot, InitialSpec};
use aswaves::{parse_config, run};

fn main() -> aswaves::Result<()> {
    let dir = std::env::temp_dir().join("aswaves_restart_example");
    let base = r#"{"grid": {"dims": "2", "nx": 128, "ny": 16, "lx": 10, "ly": 3},
                   "initial": {"kind": "cos_deform", "c": 1.5, "a": 0.4},
                   "time": {"t_end": 2, "steps": 400}}"#;
    let full = parse_config(base)?;
    let whole = run(&full, None)?;

    let mut first = full.clone();
    first.time = aswaves::experiment::TimeSpec {
        t_end: 1.0,
        steps: 200,
    };
    let half = run(&first, None)?;
    let path = dir.join("half.asbq");
    std::fs::create_dir_all(&dir).map_err(|e| aswaves::Error::io(&dir, e))?;
    write_snapshot(&path, &half.final_state, &half.params)?;
    let (s, params) = read_snapshot(&path)?;
    println!(
        "snapshot at t = {}, eps_nl = {}, eps_disp = {}",
        s.t, params.eps_nl, params.eps_disp
    );

    let mut second = full.clone();
    second.initial = InitialSpec::Snapshot { path };
    second.time.steps = 200;
    let resumed = run(&second, None)?;
    let diff = whole
        .final_state
        .eta
        .iter()
        .zip(&resumed.final_state.eta)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("restarted vs uninterrupted at t = 2: |eta diff|_inf = {diff:.3e}");
    Ok(())
}
