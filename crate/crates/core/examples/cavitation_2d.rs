//! 2D cavitation data η₀ = κ exp(−x² − αy²) with the singularity stop
//! policy. Defaults to the κ = −1, α = 1 desk preset; pass a smaller N to
//! get a quick look.
//!
//! cargo run --release --example cavitation_2d -- [preset] [N] [out_dir]

use std::path::PathBuf;

use aswaves::{preset, run, Axis, FieldId};

fn main() -> aswaves::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args
        .next()
        .unwrap_or_else(|| "cavitation_k-1_a1_desk".into());
    let mut cfg = preset(&name)?;
    if let Some(n) = args.next() {
        let n: usize = n.parse().expect("mode count");
        let ratio = cfg.grid.ny as f64 / cfg.grid.nx as f64;
        cfg.grid.ny = ((n as f64 * ratio) as usize).max(4);
        cfg.grid.nx = n;
    }
    let dir = args.next().map(PathBuf::from);
    let out = run(&cfg, dir.as_deref())?;
    println!("{:?} at t = {:.4}", out.report.status, out.report.t_final);
    if let Some(stop) = &out.report.stop {
        println!("  {}", stop.reason);
    }
    println!("\n     t    min eta    max eta   delta_x    delta_y   quality");
    let fits = &out.fits;
    for r in out.norms.iter().step_by(5) {
        let pick = |axis| {
            fits.iter()
                .find(|f| f.field == FieldId::Eta && f.axis == axis && (f.t - r.t).abs() < 1e-9)
                .map(|f| (f.params.delta, f.params.quality))
        };
        if let (Some((dx, q)), Some((dy, _))) = (pick(Axis::X), pick(Axis::Y)) {
            println!(
                "{:6.2} {:10.4} {:10.4} {dx:10.4e} {dy:10.4e} {q:8.3}",
                r.t, r.min_eta, r.max_eta
            );
        }
    }
    Ok(())
}
