//! Measures the frequency of small single Fourier modes and compares it
//! with ω(k) = |k| / sqrt(1 + ε|k|²).
//!
//! cargo run --example linear_dispersion -- [eps]

use std::sync::Arc;

use aswaves::{evolve, AsSystem, EvolveConfig, ModelParams, TorusGrid, WaveState};

fn main() -> aswaves::Result<()> {
    let eps: f64 = std::env::args()
        .nth(1)
        .map_or(1.0, |a| a.parse().expect("number"));
    let params = ModelParams {
        eps_nl: 1.0,
        eps_disp: eps,
    };
    let grid = Arc::new(TorusGrid::two_d(32, 32, 2.0, 2.0)?);
    let amp = 1e-9;
    println!(
        "{:>6} {:>6} {:>14} {:>14} {:>10}",
        "m_x", "m_y", "omega", "measured", "rel.err"
    );
    for (mx, my) in [(1, 0), (3, 0), (8, 0), (2, 2), (0, 7), (12, 5)] {
        let (kx, ky) = (mx as f64 / grid.lx(), my as f64 / grid.ly());
        let k = kx.hypot(ky);
        let omega = k / (1.0 + eps * k * k).sqrt();
        let mut s = WaveState::rest(grid.clone());
        s.eta = grid.sample(|x, y| amp * (kx * x + ky * y).cos());
        let t = 0.3 * std::f64::consts::PI / omega;
        let mut sys = AsSystem::new(grid.clone(), params)?;
        let (e, _) = evolve(s, &EvolveConfig::new(t, 2000), &mut sys, &mut [])?;
        let basis = grid.sample(|x, y| (kx * x + ky * y).cos());
        let coef = e.eta.iter().zip(&basis).map(|(a, b)| a * b).sum::<f64>()
            / basis.iter().map(|b| b * b).sum::<f64>();
        let measured = (coef / amp).acos() / t;
        println!(
            "{mx:>6} {my:>6} {omega:>14.10} {measured:>14.10} {:>10.2e}",
            (measured - omega).abs() / omega
        );
    }
    Ok(())
}
