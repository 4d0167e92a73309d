//! Property tests over random inputs.

use std::sync::Arc;

use proptest::prelude::*;

use aswaves::experiment::{snapshot_bytes, snapshot_from_bytes, ExperimentConfig};
use aswaves::singularity::extrapolate_collapse;
use aswaves::{
    evolve, fit_ssf, parse_config, AsSystem, Diagnostics, EvolveConfig, ModelParams, TorusGrid,
    WaveState, WindowPolicy,
};

fn state(nx: usize, ny: usize, seed: &[f64]) -> WaveState {
    let grid = Arc::new(if ny == 1 {
        TorusGrid::one_d(nx, 1.5).unwrap()
    } else {
        TorusGrid::two_d(nx, ny, 1.5, 2.5).unwrap()
    });
    let mut s = WaveState::rest(grid.clone());
    let (a, b, c) = (seed[0], seed[1], seed[2]);
    s.eta = grid.sample(|x, y| a * (-(x - b).powi(2) - 0.7 * y * y).exp());
    s.vx = grid.sample(|x, y| c * (-(x * x) - (y - b).powi(2)).exp());
    if grid.is_2d() {
        s.vy = grid.sample(|x, y| b * c * (x + 0.3 * y).sin() * (-(x * x + y * y)).exp());
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn snapshot_round_trip_is_bitwise(
        nx in prop::sample::select(vec![4usize, 8, 32, 64]),
        ny in prop::sample::select(vec![1usize, 4, 16]),
        seed in prop::collection::vec(-1.0f64..1.0, 3),
        t in 0.0f64..100.0,
        eps in 1e-3f64..2.0,
    ) {
        let mut s = state(nx, ny, &seed);
        s.t = t;
        let params = ModelParams { eps_nl: 1.0, eps_disp: eps };
        let bytes = snapshot_bytes(&s, &params).unwrap();
        let (back, p) = snapshot_from_bytes(&bytes).unwrap();
        prop_assert_eq!(p, params);
        prop_assert_eq!(back.t.to_bits(), t.to_bits());
        for (a, b) in s.fields().iter().zip(back.fields()) {
            prop_assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        // Any truncation is rejected.
        let cut = bytes.len() * 3 / 4;
        prop_assert!(snapshot_from_bytes(&bytes[..cut]).is_err());
    }

    #[test]
    fn config_round_trips(
        nx_exp in 3u32..10,
        ny_exp in 2u32..8,
        lx in 0.5f64..40.0,
        kappa in -0.99f64..-0.01,
        alpha in 0.1f64..3.0,
        steps in 1usize..100_000,
        t_end in 0.1f64..100.0,
        eps in 1e-3f64..1.0,
    ) {
        let text = format!(
            r#"{{"grid": {{"dims": "2", "nx": {}, "ny": {}, "lx": {lx}, "ly": 3}},
                "model": {{"eps_nl": 1, "eps_disp": {eps}}},
                "initial": {{"kind": "cavitation", "kappa": {kappa}, "alpha": {alpha}}},
                "time": {{"t_end": {t_end}, "steps": {steps}}}}}"#,
            1usize << nx_exp, 1usize << ny_exp
        );
        let cfg: ExperimentConfig = parse_config(&text).unwrap();
        let back = parse_config(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn ssf_fit_recovers_random_parameters(
        delta in 0.002f64..0.3,
        mu in -0.95f64..2.0,
        c in -5.0f64..5.0,
        l in 1.0f64..20.0,
    ) {
        let (k, m): (Vec<f64>, Vec<f64>) = (1..2048)
            .map(|i| {
                let k = i as f64 / l;
                (k, (c - (mu + 1.0) * k.ln() - delta * k).exp())
            })
            .unzip();
        match fit_ssf(&k, &m, &WindowPolicy::default()) {
            Ok(p) => {
                prop_assert!((p.delta - delta).abs() < 1e-8 * (1.0 + delta));
                prop_assert!((p.mu - mu).abs() < 1e-6);
                prop_assert!(p.quality < 1e-6);
            }
            // Fast decay can leave too few modes above the floor.
            Err(aswaves::Error::FitUnavailable { .. }) => prop_assert!(delta * 2047.0 / l / 8.0 > 5.0),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn extrapolation_is_exact_on_lines(t0 in 0.0f64..5.0, slope in 0.01f64..3.0, n in 2usize..12) {
        let series: Vec<(f64, f64)> = (0..n).map(|i| {
            let t = t0 + 0.1 * i as f64;
            (t, slope * (t0 + 2.0 - t))
        }).collect();
        let tc = extrapolate_collapse(&series, 5).unwrap();
        prop_assert!((tc - (t0 + 2.0)).abs() < 1e-9);
    }

    #[test]
    fn mean_and_vorticity_are_conserved(
        ny in prop::sample::select(vec![1usize, 16]),
        seed in prop::collection::vec(-0.4f64..0.4, 3),
        eps in 0.05f64..1.5,
    ) {
        let s0 = state(32, ny, &seed);
        let params = ModelParams::symmetric(eps);
        let mut diag = Diagnostics::new(&s0.grid, params);
        let r0 = diag.record(&s0).unwrap();
        let mut sys = AsSystem::new(s0.grid.clone(), params).unwrap();
        let (s, _) = evolve(s0, &EvolveConfig::new(0.2, 20), &mut sys, &mut []).unwrap();
        let r = diag.record(&s).unwrap();
        prop_assert!((r.mean_eta - r0.mean_eta).abs() < 1e-13);
        prop_assert!((r.curl_l2 - r0.curl_l2).abs() < 1e-12);
    }

    #[test]
    fn evolution_commutes_with_grid_shifts(
        shift in 1usize..32,
        seed in prop::collection::vec(-0.4f64..0.4, 3),
    ) {
        let s0 = state(32, 8, &seed);
        let nx = s0.grid.nx();
        let roll = |v: &[f64]| -> Vec<f64> {
            v.chunks(nx).flat_map(|row| {
                row.iter().cycle().skip(nx - shift).take(nx).copied().collect::<Vec<_>>()
            }).collect()
        };
        let mut shifted = s0.clone();
        shifted.eta = roll(&s0.eta);
        shifted.vx = roll(&s0.vx);
        shifted.vy = roll(&s0.vy);
        let params = ModelParams::symmetric(1.0);
        let mut sys = AsSystem::new(s0.grid.clone(), params).unwrap();
        let cfg = EvolveConfig::new(0.3, 30);
        let (a, _) = evolve(s0, &cfg, &mut sys, &mut []).unwrap();
        let (b, _) = evolve(shifted, &cfg, &mut sys, &mut []).unwrap();
        for (x, y) in [(&a.eta, &b.eta), (&a.vx, &b.vx), (&a.vy, &b.vy)] {
            let d = roll(x).iter().zip(y.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            prop_assert!(d < 1e-12, "{}", d);
        }
    }
}
