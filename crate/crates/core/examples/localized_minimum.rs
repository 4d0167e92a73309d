//! Localized hump η₀ = κ exp(−x² − y²): the depression that forms in the
//! centre approaches but does not reach the dry bottom η = −1.
//!
//! cargo run --release --example localized_minimum -- [kappa] [N]

use aswaves::{preset, run};

fn main() -> aswaves::Result<()> {
    let mut args = std::env::args().skip(1);
    let kappa: f64 = args.next().map_or(10.0, |a| a.parse().expect("number"));
    let mut cfg = preset(if kappa > 5.0 {
        "localized_k10_desk"
    } else {
        "localized_k1_desk"
    })?;
    if let aswaves::experiment::InitialSpec::Localized { kappa: k, .. } = &mut cfg.initial {
        *k = kappa;
    }
    if let Some(n) = args.next() {
        let n: usize = n.parse().expect("mode count");
        cfg.grid.nx = n;
        cfg.grid.ny = n;
    }
    cfg.diagnostics.norm_stride = Some(2);
    let out = run(&cfg, None)?;
    let (mut min, mut t_min) = (f64::INFINITY, 0.0);
    for r in &out.norms {
        if r.min_eta < min {
            (min, t_min) = (r.min_eta, r.t);
        }
    }
    println!("kappa = {kappa}: global minimum of eta {min:.4} at t = {t_min:.2}");
    let worst = out
        .norms
        .iter()
        .map(|r| r.cavitation)
        .fold(f64::INFINITY, f64::min);
    println!("smallest depth 1 + eta: {worst:.4}");
    Ok(())
}
