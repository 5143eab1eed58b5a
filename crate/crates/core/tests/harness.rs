//! Monte-Carlo harness and command-line behaviour.

use std::collections::HashMap;
use std::fs;
use std::process::Command;
use std::sync::Mutex;

use orbgrand_ai::decoder::DecoderKind;
use orbgrand_ai::sim::{self, CodeSpec, Experiment, ExperimentConfig, CSV_HEADER};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        code: CodeSpec::parse("crc:16").unwrap(),
        ebn0_db: vec![1.0, 3.0],
        trials: 600,
        min_block_errors: 40,
        ..ExperimentConfig::default()
    }
}

#[test]
fn sweep_csv_is_reproducible_and_seed_sensitive() {
    let cfg = small_config();
    let a = sim::run_sweep(&cfg).unwrap();
    let b = sim::run_sweep(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(a.lines().count(), 1 + 2 * 3);
    let other = sim::run_sweep(&ExperimentConfig { master_seed: 2, ..cfg }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn every_decoder_sees_the_same_received_sequences() {
    let exp = Experiment::new(small_config()).unwrap();
    let seen: Mutex<HashMap<(DecoderKind, u64), u64>> = Mutex::new(HashMap::new());
    let hash = |y: &[f64]| y.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, v| (h ^ v.to_bits()).wrapping_mul(0x100_0000_01b3));
    exp.run_point_observed(2.0, &[DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt], |kind, t, y, _| {
        seen.lock().unwrap().insert((kind, t), hash(y));
    })
    .unwrap();
    let seen = seen.into_inner().unwrap();
    let model = exp.channel(2.0).unwrap();
    for (&(_, t), &h) in &seen {
        assert_eq!(h, hash(&exp.trial_input(&model, 2.0, t).y));
    }
    // The trial stream does not depend on which decoders run.
    let gt_only = Mutex::new(Vec::new());
    exp.run_point_observed(2.0, &[DecoderKind::Gt], |_, t, y, _| gt_only.lock().unwrap().push((t, hash(y))))
        .unwrap();
    for (t, h) in gt_only.into_inner().unwrap() {
        assert_eq!(seen[&(DecoderKind::Gt, t)], h);
    }
}

#[test]
fn counts_stop_at_the_error_target() {
    let cfg = ExperimentConfig { ebn0_db: vec![0.0], min_block_errors: 25, trials: 100_000, ..small_config() };
    let rows = Experiment::new(cfg).unwrap().run_sweep().unwrap();
    for r in &rows {
        assert_eq!(r.block_errors, 25, "{}", r.decoder);
        let statuses = r.status_early + r.status_stopped + r.status_capped + r.status_parity_hit + r.status_exhausted;
        assert_eq!(statuses, r.trials_run);
        assert!(r.avg_queries >= r.avg_discarded);
    }
    let ai = rows.iter().find(|r| r.decoder == DecoderKind::Ai).unwrap();
    assert_eq!(ai.avg_queries_ratio_vs_ai, Some(1.0));
}

#[test]
fn bler_interpolation() {
    let pts = [(1.0, 1e-1), (2.0, 1e-2), (3.0, 1e-4)];
    assert!((sim::ebn0_at_bler(&pts, 1e-3).unwrap() - 2.5).abs() < 1e-12);
    assert!((sim::ebn0_at_bler(&pts, 1e-1).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(sim::ebn0_at_bler(&pts, 1e-6), None);
}

fn orbgrand() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbgrand"))
}

#[test]
fn cli_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "code = crc:16\nebn0 = 2:3:1\ntrials = 200\nmin_errors = 10\n").unwrap();
    let out = dir.path().join("out.csv");
    let status = orbgrand()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--decoders", "GP,GT", "--seed", "7"])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("GP,2,"));
    assert!(lines[4].starts_with("GT,3,"));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "code = crc:16\nrho = 1.5\n").unwrap();
    let out = orbgrand().args(["sweep", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho"));

    let big = dir.path().join("big.cfg");
    fs::write(&big, "code = crc:48\n").unwrap();
    let out = orbgrand().args(["oracle", "--config"]).arg(&big).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ML oracle"));

    let good = dir.path().join("good.cfg");
    fs::write(&good, "code = crc:8\n").unwrap();
    let y = dir.path().join("y.txt");
    fs::write(&y, "1.0 -1.0 0.5").unwrap();
    let out = orbgrand().args(["decode-one", "--config"]).arg(&good).arg("--y").arg(&y).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_decode_one_prints_each_decoder() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.cfg");
    fs::write(&cfg, "code = crc:8\ndecoders = AI,GP,GT,ML\nebn0 = 3\n").unwrap();
    let y = dir.path().join("y.txt");
    let values: Vec<String> = (0..24).map(|i| if i == 5 { "-0.2".into() } else { "0.9".into() }).collect();
    fs::write(&y, values.join(" ")).unwrap();
    let out = orbgrand().args(["decode-one", "--config"]).arg(&cfg).arg("--y").arg(&y).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["AI:", "GP:", "GT:", "ML:"] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains(&"0".repeat(24)));
}
