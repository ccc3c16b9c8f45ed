use std::path::Path;
use std::process::{Command, Output};

use qcomm_core::report::{load_fixture, FixtureData};

fn qcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcomm"))
        .args(args)
        .env_remove("QCOMM_OUT_DIR")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qcomm(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// (x, metric, value, accepted_fraction) per data line.
fn rows(csv: &str) -> Vec<(f64, String, f64, Option<f64>)> {
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("x,metric,value,shots,accepted_fraction,seed,backend")
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            (
                f[0].parse().unwrap(),
                f[1].to_string(),
                f[2].parse().unwrap(),
                (!f[4].is_empty()).then(|| f[4].parse().unwrap()),
            )
        })
        .collect()
}

fn metric(csv: &str, name: &str) -> Vec<(f64, f64)> {
    rows(csv)
        .into_iter()
        .filter(|r| r.1 == name)
        .map(|r| (r.0, r.2))
        .collect()
}

#[test]
fn sdc_swap_sweep_has_eight_rows() {
    let csv = ok(&["sdc-sweep", "--swaps", "0..14:2", "--route", "upper-row"]);
    let mi = metric(&csv, "mutual_information");
    assert_eq!(mi.len(), 8);
    assert_eq!(rows(&csv).len(), 8);
    assert_eq!(
        mi.iter().map(|r| r.0).collect::<Vec<_>>(),
        [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0]
    );
    assert!(mi[0].1 > mi[7].1);
}

#[test]
fn noiseless_sdc_sends_two_bits() {
    let csv = ok(&["sdc-sweep", "--noise", "noiseless", "--swaps", "0..6:2"]);
    for (_, bits) in metric(&csv, "mutual_information") {
        assert!((bits - 2.0).abs() < 1e-9);
    }
}

#[test]
fn corrected_delay_sweep_dominates() {
    let plain = metric(
        &ok(&["sdc-sweep", "--delay", "0..6us"]),
        "mutual_information",
    );
    let fixed = metric(
        &ok(&["sdc-sweep", "--delay", "0..6us", "--correct-phase"]),
        "mutual_information",
    );
    assert_eq!(plain.len(), 5);
    for ((x, a), (_, b)) in plain.iter().zip(&fixed) {
        assert!(*b >= a - 0.02, "t = {x}: {b} < {a}");
    }
}

#[test]
fn noiseless_bb84_has_full_key() {
    for variant in ["single", "dualrail"] {
        let csv = ok(&["bb84", variant, "--noise", "noiseless", "--swaps", "0..4:2"]);
        assert!(metric(&csv, "q").iter().all(|(_, q)| *q == 0.0));
        assert!(metric(&csv, "l_sec_per_n").iter().all(|(_, v)| *v == 1.0));
        assert!(rows(&csv).iter().all(|r| r.3 == Some(1.0)));
    }
}

#[test]
fn dualrail_reports_postselection() {
    let csv = ok(&["bb84", "dualrail", "--swaps", "0..6:2"]);
    let q = metric(&csv, "q");
    assert_eq!(
        q.iter().map(|r| r.0).collect::<Vec<_>>(),
        [0.0, 2.0, 4.0, 6.0]
    );
    let accepted: Vec<f64> = rows(&csv)
        .iter()
        .filter(|r| r.1 == "q")
        .map(|r| r.3.unwrap())
        .collect();
    assert!(
        accepted.iter().all(|a| *a < 1.0 && *a > 0.5),
        "{accepted:?}"
    );
    // 4 cells + q, l_sec, l_sec/N per point
    assert_eq!(rows(&csv).len(), 4 * 7);
}

#[test]
fn replays_published_tables() {
    assert_eq!(rows(&ok(&["replay-fixture", "table1"])).len(), 8);
    let t5 = ok(&["replay-fixture", "table5"]);
    let q = metric(&t5, "q");
    assert_eq!(q[0], (0.0, 0.03));
    assert!((metric(&t5, "l_sec_per_n")[0].1 - 0.582057506).abs() < 1e-9);
    let t7 = ok(&["replay-fixture", "table7"]);
    assert!(rows(&t7).iter().all(|r| r.3.is_some()));

    let out = qcomm(&["replay-fixture", "table9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table9"));
}

fn qasm_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn exports_one_file_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["--out-dir", d, "export-qasm"]);
    let files = qasm_files(dir.path());
    assert_eq!(files.len(), 4);
    assert!(files
        .iter()
        .all(|(n, t)| n.starts_with("sdc-swaps0-delay0-") && t.starts_with(b"OPENQASM 2.0;")));

    let bb = tempfile::tempdir().unwrap();
    let args = [
        "--out-dir",
        bb.path().to_str().unwrap(),
        "export-qasm",
        "--protocol",
        "bb84-single",
        "--delay",
        "0..2.52us",
    ];
    ok(&args);
    let first = qasm_files(bb.path());
    assert_eq!(first.len(), 12);
    assert!(first
        .iter()
        .any(|(n, _)| n == "bb84-single-swaps0-delay28-cross1.qasm"));
    ok(&args);
    assert_eq!(qasm_files(bb.path()), first);
}

fn counts_doc(cells: &[(&str, Vec<(&str, u64)>)]) -> String {
    let cells: Vec<String> = cells
        .iter()
        .map(|(label, counts)| {
            let shots: u64 = counts.iter().map(|c| c.1).sum();
            let body: Vec<String> = counts
                .iter()
                .map(|(k, v)| format!("\"{k}\": {v}"))
                .collect();
            format!(
                "{{\"label\": \"{label}\", \"shots\": {shots}, \"counts\": {{{}}}}}",
                body.join(", ")
            )
        })
        .collect();
    format!(
        "{{\"experiment\": \"test\", \"protocol\": \"sdc\", \"x\": 0, \"cells\": [{}]}}",
        cells.join(", ")
    )
}

#[test]
fn scores_counts_documents() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = ["00", "10", "01", "11"];

    let perfect = dir.path().join("perfect.json");
    let cells: Vec<_> = inputs.iter().map(|l| (*l, vec![(*l, 1024)])).collect();
    std::fs::write(&perfect, counts_doc(&cells)).unwrap();
    let mi = metric(
        &ok(&["score", perfect.to_str().unwrap()]),
        "mutual_information",
    );
    assert_eq!(mi, [(0.0, 2.0)]);

    let table = load_fixture("table2").unwrap();
    let FixtureData::Sdc(blocks) = table.data else {
        panic!("table2 holds SDC blocks")
    };
    let cells: Vec<_> = inputs
        .iter()
        .zip(&blocks[0].rows)
        .map(|(l, row)| {
            let counts = inputs
                .iter()
                .zip(row)
                .map(|(o, p)| (*o, (p * 8192.0).round() as u64))
                .collect();
            (*l, counts)
        })
        .collect();
    let measured = dir.path().join("table2.json");
    std::fs::write(&measured, counts_doc(&cells)).unwrap();
    let mi = metric(
        &ok(&["score", measured.to_str().unwrap()]),
        "mutual_information",
    );
    assert!((mi[0].1 - 1.3787).abs() < 2e-3, "{mi:?}");

    let partial = dir.path().join("partial.json");
    std::fs::write(&partial, counts_doc(&cells[..3])).unwrap();
    let out = qcomm(&["score", partial.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        qcomm(&["sdc-sweep", "--no-such-flag"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qcomm(&["sdc-sweep", "--swaps", "0..4", "--delay", "1us"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qcomm(&["sdc-sweep", "--device", "nowhere.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qcomm(&["sdc-sweep", "--swaps", "0..x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qcomm(&["bb84", "single", "--swaps", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn help_lists_the_flags() {
    let help = ok(&["sdc-sweep", "--help"]);
    for flag in [
        "--swaps",
        "--delay",
        "--route",
        "--correct-phase",
        "--noise",
        "--device",
        "--seed",
        "--out-dir",
    ] {
        assert!(help.contains(flag), "{flag} missing from help");
    }
    let top = ok(&["--help"]);
    for cmd in [
        "sdc-sweep",
        "bb84",
        "replay-fixture",
        "export-qasm",
        "score",
    ] {
        assert!(top.contains(cmd));
    }
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qcomm"))
        .args(["replay-fixture", "table1"])
        .env("QCOMM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("table1-replay.csv")).unwrap();
    assert_eq!(rows(&text).len(), 8);
}

#[test]
fn runs_are_byte_identical() {
    let args = [
        "bb84",
        "single",
        "--backend",
        "trajectory",
        "--shots",
        "2000",
        "--seed",
        "11",
        "--swaps",
        "0..2:2",
    ];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(rows(&a).iter().all(|r| r.1 != "q" || r.2 > 0.0));
}
