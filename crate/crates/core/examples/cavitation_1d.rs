//! Gaussian depression η₀ = −exp(−x²) in 1D: tracks the analyticity strip
//! of η and v until the stop policy fires and extrapolates δ(t) to zero.
//!
//! cargo run --release --example cavitation_1d -- [N]

use aswaves::singularity::extrapolate_collapse;
use aswaves::{preset, run, Axis, FieldId};

fn main() -> aswaves::Result<()> {
    let mut cfg = preset("cavitation_1d_desk")?;
    if let Some(n) = std::env::args().nth(1) {
        let n: usize = n.parse().expect("mode count");
        // Keep dt·k_max fixed.
        cfg.time.steps = cfg.time.steps * n / cfg.grid.nx;
        cfg.tracking.stride = cfg.tracking.stride.map(|s| s * n / cfg.grid.nx);
        cfg.grid.nx = n;
    }
    let out = run(&cfg, None)?;
    println!("{:?} at t = {:.3}", out.report.status, out.report.t_final);
    if let Some(stop) = &out.report.stop {
        println!("  {}", stop.reason);
    }

    for field in [FieldId::Eta, FieldId::Vx] {
        let series: Vec<(f64, f64)> = out
            .fits
            .iter()
            .filter(|f| f.field == field && f.axis == Axis::X && f.params.reliable())
            .map(|f| (f.t, f.params.delta))
            .collect();
        println!("\n{field}: last reliable fits");
        for (t, d) in series.iter().rev().take(6).rev() {
            println!("  t = {t:.2}  delta = {d:.4e}");
        }
        if let Some(tc) = extrapolate_collapse(&series, 5) {
            println!("  linear extrapolation of delta to zero: t = {tc:.3}");
        }
    }

    let first = out.norms[0];
    let last = out.norms.last().unwrap();
    println!(
        "\n|eta|_L4 grew by {:.2}, |d_x eta|_L2 by {:.1}, |v|_inf by {:.2}",
        last.eta.l4 / first.eta.l4,
        last.eta.h1 / first.eta.h1,
        last.vx.linf / out.norms[1].vx.linf
    );
    Ok(())
}
