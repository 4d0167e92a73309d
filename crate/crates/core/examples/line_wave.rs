//! Propagates a line solitary wave on a 2D grid and compares it with the
//! exactly translated profile.
//!
//! cargo run --example line_wave -- [c] [N_x] [N_y] [t_end] [steps]

use std::sync::Arc;

use aswaves::grid::translate_x;
use aswaves::{evolve, line_extend, solve_profile, AsSystem, EvolveConfig, ModelParams, TorusGrid};

fn main() -> aswaves::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).map_or(d, |a| a.parse().expect("number"));
    let c = num(0, 2.0);
    let (nx, ny) = (num(1, 1024.0) as usize, num(2, 16.0) as usize);
    let (t_end, steps) = (num(3, 5.0), num(4, 2500.0) as usize);

    let line = Arc::new(TorusGrid::one_d(nx, 10.0)?);
    let p = solve_profile(c, 1.0, line.clone(), None)?;
    let grid = Arc::new(TorusGrid::two_d(nx, ny, 10.0, 3.0)?);
    let s0 = line_extend(&p, grid.clone())?;

    let mut sys = AsSystem::new(grid, ModelParams::symmetric(1.0))?;
    let (s, _) = evolve(s0, &EvolveConfig::new(t_end, steps), &mut sys, &mut [])?;

    let q = translate_x(&line, &p.q, c * t_end);
    let mut err = 0.0f64;
    for row in s.eta.chunks(nx) {
        for (a, b) in row.iter().zip(&q) {
            err = err.max((a - b).abs());
        }
    }
    let vy = s.vy.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("t = {t_end}: |eta - Q(x - ct)|_inf = {err:.3e}, |v_y|_inf = {vy:.3e}");
    Ok(())
}
