use hillproj_cli::sweep::{run_sweep, Range, SweepSpec};
use hillproj_core::hill::MonodromyOptions;
use hillproj_core::Tolerances;

fn sweep(template: &str, ranges: &[&str], threads: Option<usize>) -> String {
    let ranges = ranges.iter().map(|r| Range::parse(r).unwrap()).collect();
    let spec = SweepSpec::new(template, ranges, 1.0).unwrap();
    run_sweep(&spec, &MonodromyOptions::default(), &Tolerances::default(), threads).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn thread_count_does_not_change_rows() {
    let one = sweep("a + q*cos(2*pi*t)", &["a=-2:30:12", "q=0:6:9"], Some(1));
    let many = sweep("a + q*cos(2*pi*t)", &["a=-2:30:12", "q=0:6:9"], Some(6));
    assert_eq!(one, many);
}

#[test]
fn grid_row_count() {
    let csv = sweep("a + q*cos(2*pi*t)", &["a=0:20:50", "q=0:4:50"], None);
    assert_eq!(data_rows(&csv).len(), 2500);
    let summary = csv.lines().last().unwrap();
    assert!(summary.starts_with("# "));
    let v: serde_json::Value = serde_json::from_str(&summary[2..]).unwrap();
    assert_eq!(v["rows"], 2500);
    let total: u64 = v["counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 2500);
}

#[test]
fn zero_amplitude_row_matches_constant_sweep() {
    let constant = sweep("a", &["a=0:15:31"], Some(2));
    let mathieu = sweep("a + q*cos(2*pi*t)", &["q=0:1:2", "a=0:15:31"], Some(2));
    let strip = |l: &str| l.split_once(',').unwrap().1.to_string();
    let q0: Vec<String> = data_rows(&mathieu).into_iter().take(31).map(strip).collect();
    let plain: Vec<String> = data_rows(&constant).into_iter().map(|l| l.to_string()).collect();
    assert_eq!(q0, plain);
}

#[test]
fn constant_sweep_hits_the_central_value() {
    let csv = sweep("a", &["a=0:15:200"], Some(3));
    let kinds: Vec<&str> = data_rows(&csv).iter().map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(kinds[0], "ParaK");
    assert!(kinds[1..].iter().all(|k| *k == "EllAlpha" || *k == "CentralK"));
    // The index flips from 0 to 1 across a = π².
    let ks: Vec<(f64, i64)> = data_rows(&csv)
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    let flip = ks.windows(2).find(|w| w[0].1 != w[1].1 && w[0].0 > 1.0).unwrap();
    let cell = 15.0 / 199.0;
    let pi2 = std::f64::consts::PI.powi(2);
    assert!(flip[0].0 <= pi2 + cell && flip[1].0 >= pi2 - cell);
}

#[test]
fn failing_points_become_error_rows() {
    let csv = sweep("1/a", &["a=-1:1:3"], Some(2));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 3);
    assert!(rows[1].contains(",ERROR,"));
    assert!(csv.lines().last().unwrap().contains("\"ERROR\":1"));
}
