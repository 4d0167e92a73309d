//! Singularity tracking by fitting the Fourier decay of a field.
//!
//! The test function 1/(cosh(a) - cos(x)) has poles at x = ±i a, so the
//! fitted strip width should be `a`.
//!
//! cargo run --example ssf_fit -- [a]

use std::sync::Arc;

use aswaves::singularity::{fit_field, fit_ssf};
use aswaves::{Axis, FieldId, TorusGrid, WaveState, WindowPolicy};

fn main() -> aswaves::Result<()> {
    let a: f64 = std::env::args()
        .nth(1)
        .map_or(0.05, |s| s.parse().expect("number"));
    let policy = WindowPolicy::default();

    // Synthetic spectrum with known parameters.
    let (delta, mu) = (0.02, -0.5);
    let (k, m): (Vec<f64>, Vec<f64>) = (1..4096)
        .map(|i| {
            let k = i as f64;
            (k, (-(mu + 1.0) * k.ln() - delta * k).exp())
        })
        .unzip();
    let p = fit_ssf(&k, &m, &policy)?;
    println!(
        "synthetic: delta {:.3e} (exact {delta}), mu {:.4} (exact {mu})",
        p.delta, p.mu
    );

    // A periodic field with a pole pair at distance a from the real axis.
    let grid = Arc::new(TorusGrid::two_d(2048, 16, 1.0, 1.0)?);
    let mut s = WaveState::rest(grid.clone());
    s.eta = grid.sample(|x, _| a.sinh() / (a.cosh() - x.cos()));
    let fit = fit_field(&s, FieldId::Eta, Axis::X, &policy)?;
    println!(
        "pole field: delta {:.4e} (exact {a}), mu {:.3}, window k in [{}, {}], quality {:.1e}",
        fit.params.delta, fit.params.mu, fit.params.k_lo, fit.params.k_hi, fit.params.quality
    );
    match fit_field(&s, FieldId::Eta, Axis::Y, &policy) {
        Ok(f) => println!("y axis: delta {:.3e}", f.params.delta),
        Err(e) => println!("y axis: {e}"),
    }
    Ok(())
}
