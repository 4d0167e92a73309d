//! On-disk formats consumed by external post-processing: CSV layouts and
//! the snapshot header, read back without the library's own parsers.

use aswaves::diagnostics::NORMS_CSV_HEADER;
use aswaves::singularity::FIT_CSV_HEADER;
use aswaves::{parse_config, run};

fn run_small(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("aswaves-formats-{}-{name}", std::process::id()));
    run(&parse_config(text).unwrap(), Some(&dir)).unwrap();
    dir
}

fn rows(path: &std::path::Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let body = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, body)
}

const RUN_2D: &str = r#"{"grid": {"dims": "2", "nx": 64, "ny": 32, "lx": 3, "ly": 2},
    "initial": {"kind": "cavitation", "kappa": -0.3, "alpha": 0.5},
    "time": {"t_end": 0.2, "steps": 40},
    "diagnostics": {"norm_stride": 10, "slice_stride": 20, "slice_axes": ["x", "y"]},
    "tracking": {"enabled": true, "stop": false, "fields": ["eta", "vx"], "axes": ["x", "y"], "stride": 20}}"#;

#[test]
fn norms_csv_layout() {
    let dir = run_small("norms", RUN_2D);
    let (header, body) = rows(&dir.join("norms.csv"));
    assert_eq!(header.join(","), NORMS_CSV_HEADER);
    assert_eq!(header.len(), 21);
    assert_eq!(body.len(), 5);
    for row in &body {
        assert_eq!(row.len(), 21);
        for v in row {
            v.parse::<f64>().unwrap();
        }
    }
    let t: Vec<f64> = body.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fits_and_slices_csv_layout() {
    let dir = run_small("fits", RUN_2D);
    let (header, body) = rows(&dir.join("fits.csv"));
    assert_eq!(header.join(","), FIT_CSV_HEADER);
    for row in &body {
        assert_eq!(row.len(), 9);
        assert!(row[1] == "eta" || row[1] == "vx");
        assert!(row[2] == "kx" || row[2] == "ky");
        for i in [0, 3, 4, 5, 6, 7, 8] {
            row[i].parse::<f64>().unwrap();
        }
    }
    // Three fit times (steps 0, 20, 40). N_y = 32 leaves too few modes in
    // the ky window, and v_x vanishes at t = 0.
    assert_eq!(body.iter().filter(|r| r[1] == "eta").count(), 3);
    assert!(body.iter().all(|r| r[2] == "kx"));

    let (header, body) = rows(&dir.join("slices.csv"));
    assert_eq!(header.join(","), "t,axis,s,eta,vx,vy");
    let x_rows = body.iter().filter(|r| r[1] == "x").count();
    let y_rows = body.iter().filter(|r| r[1] == "y").count();
    assert_eq!((x_rows, y_rows), (3 * 64, 3 * 32));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn snapshot_header_is_plain_little_endian() {
    let dir = run_small("snapshot", RUN_2D);
    let bytes = std::fs::read(dir.join("final.asbq")).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    assert_eq!(&bytes[0..4], b"ASBQ");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
    assert_eq!(bytes[8], 2);
    assert_eq!((u64_at(9), u64_at(17)), (64, 32));
    assert_eq!((f64_at(25), f64_at(33)), (3.0, 2.0));
    assert_eq!((f64_at(41), f64_at(49)), (1.0, 1.0));
    assert!((f64_at(57) - 0.2).abs() < 1e-15);
    let header = 65;
    assert_eq!(bytes.len(), header + 3 * 8 * 64 * 32);
    // Row-major: the first row holds y = y_0 for every x.
    let eta0 = f64_at(header);
    assert!(eta0.is_finite());
}

#[test]
fn report_is_machine_readable() {
    let dir = run_small("report", RUN_2D);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let config: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("config.json")).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(report["status"], "completed");
    assert_eq!(report["steps_taken"], 40);
    assert!(report["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert!(report["files"].as_array().unwrap().len() >= 4);
    assert_eq!(config["grid"]["nx"], 64);
    assert_eq!(config["tracking"]["kappa_stop"], 1.0);
}
