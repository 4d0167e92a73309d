//! Constructs a solitary wave and reports its accuracy.
//!
//! cargo run --example solitary_wave -- [c] [eps] [N] [L] [out.aspw]

use std::sync::Arc;

use aswaves::{solve_profile, TorusGrid};

fn main() -> aswaves::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).map_or(d, |a| a.parse().expect("number"));
    let (c, eps) = (num(0, 2.0), num(1, 1.0));
    let (n, l) = (num(2, 4096.0) as usize, num(3, 10.0));

    let grid = Arc::new(TorusGrid::one_d(n, l)?);
    let p = solve_profile(c, eps, grid, None)?;
    println!("c = {c}, eps = {eps}, N = {n}, L = {l}");
    println!("max V = {:.14}", p.max_v());
    println!("max Q = {:.14}", p.max_q());
    println!("residual / max V    = {:.3e}", p.residual_norm / p.max_v());
    println!("Q = V/(c - eps V)   : {:.3e}", p.algebraic_defect());
    println!("even symmetry defect: {:.3e}", p.symmetry_defect());
    if let Some(out) = args.get(4) {
        p.save(out)?;
        println!("saved to {out}");
    }
    Ok(())
}
