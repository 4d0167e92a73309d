//! Small-dispersion limit: rescaled system with ε_disp = 10⁻². Prints the
//! x-axis slice of η at the final time around the steepest front, where
//! the dispersive shock shows up as a modulated wave train.
//!
//! cargo run --release --example dsw -- [eps_disp] [N] [slices.csv]

use aswaves::diagnostics::write_slices_csv;
use aswaves::{axis_slice, preset, run, Axis};

fn main() -> aswaves::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = preset("dsw_eps1e-2_desk")?;
    if let Some(eps) = args.next() {
        cfg.model.eps_disp = eps.parse().expect("number");
    }
    if let Some(n) = args.next() {
        let n: usize = n.parse().expect("mode count");
        cfg.grid.nx = n;
        cfg.grid.ny = n;
    }
    let out = run(&cfg, None)?;
    let slice = axis_slice(&out.final_state, Axis::X)?;
    let n = slice.eta.len();
    let h = slice.coord[1] - slice.coord[0];
    let steepest = (1..n - 1)
        .max_by(|&a, &b| {
            let s = |i: usize| (slice.eta[i + 1] - slice.eta[i - 1]).abs();
            s(a).total_cmp(&s(b))
        })
        .unwrap();
    println!(
        "t = {}: steepest point x = {:.3}, slope {:.2}",
        out.final_state.t,
        slice.coord[steepest],
        (slice.eta[steepest + 1] - slice.eta[steepest - 1]) / (2.0 * h)
    );
    let window = (0.6 / h) as usize;
    for i in steepest.saturating_sub(window)..(steepest + window).min(n) {
        let bar = ((slice.eta[i] + 0.5) * 40.0).clamp(0.0, 79.0) as usize;
        println!(
            "{:8.3} {:9.5} {}*",
            slice.coord[i],
            slice.eta[i],
            " ".repeat(bar)
        );
    }
    if let Some(path) = args.next() {
        let f = std::fs::File::create(&path).map_err(|e| aswaves::Error::io(&path, e))?;
        write_slices_csv(f, &out.slices).map_err(|e| aswaves::Error::io(&path, e))?;
    }
    Ok(())
}
