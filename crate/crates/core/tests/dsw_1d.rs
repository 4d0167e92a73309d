//! Small-dispersion breaking in 1D: a Gaussian hump under the rescaled model
//! (a = 1, d = 1e-2) steepens and its front turns into an oscillation train.

use aswaves::{axis_slice, parse_config, run, Axis};

#[test]
fn gaussian_front_breaks_into_oscillations() {
    let cfg = parse_config(
        r#"{"grid": {"dims": "1", "nx": 2048, "lx": 3},
            "model": {"eps_nl": 1, "eps_disp": 0.01},
            "initial": {"kind": "localized", "kappa": 1, "alpha": 1},
            "time": {"t_end": 5, "steps": 2500}}"#,
    )
    .unwrap();
    let out = run(&cfg, None).unwrap();
    let slice = axis_slice(&out.final_state, Axis::X).unwrap();
    let (x, eta) = (&slice.coord, &slice.eta);
    let h = x[1] - x[0];
    let n = eta.len();

    let max_slope = (1..n - 1)
        .map(|i| ((eta[i + 1] - eta[i - 1]) / (2.0 * h)).abs())
        .fold(0.0, f64::max);
    // The initial maximal slope of exp(-x^2) is sqrt(2/e) ~ 0.86.
    assert!(max_slope > 2.0, "max slope {max_slope}");

    let height = eta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let peaks = (1..n - 1)
        .filter(|&i| {
            x[i] > 0.0 && eta[i] > eta[i - 1] && eta[i] > eta[i + 1] && eta[i] > 0.1 * height
        })
        .count();
    assert!(peaks >= 3, "{peaks} peaks on the right-going front");
}
