//! Perturbed line solitary waves: the L∞ norm of η oscillates around a
//! constant when the line wave is transversally stable.
//!
//! cargo run --release --example transverse_stability -- [preset]

use aswaves::{preset, run};

fn main() -> aswaves::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "c2_gauss_plus_desk".into());
    let mut cfg = preset(&name)?;
    cfg.diagnostics.norm_stride = Some(cfg.time.steps / 40);
    let out = run(&cfg, None)?;
    let first = out.norms[0];
    println!("{name}");
    println!("     t   |eta|_inf   |v|_inf   ratio to t=0");
    for r in &out.norms {
        println!(
            "{:6.2} {:10.5} {:10.5} {:10.4}",
            r.t,
            r.eta.linf,
            r.vx.linf,
            r.eta.linf / first.eta.linf
        );
    }
    Ok(())
}
