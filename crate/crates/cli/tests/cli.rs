//! End-to-end checks of the installed binary: flag validation, config-file
//! precedence, warnings, and per-command artifact behavior.

use std::path::Path;
use std::process::{Command, Output};

fn antedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antedge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn zero_walk_length_exits_2_naming_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&["aco", "--L", "0", "--synth", "16", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('L'), "{}", stderr(&out));
}

#[test]
fn unparseable_values_exit_2_naming_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        antedge(&["aco", "--rho", "lots", "--synth", "16", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("rho"), "{}", stderr(&out));
}

#[test]
fn long_straight_rays_warn_but_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "aco", "--pattern", "hv-only", "--L", "6", "--synth", "16", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("blur"), "{}", stderr(&out));
    assert!(dir.path().join("mask.pgm").exists());
}

#[test]
fn missing_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&["aco", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let both = antedge(&[
        "aco", "--image", "a.pgm", "--synth", "16", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn unreadable_image_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "aco", "--image", "/nonexistent/x.pgm", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# comment\nseed=1\niters=2\n").unwrap();
    let out_dir = dir.path().join("run");
    let out = antedge(&[
        "aco", "--config", cfg.to_str().unwrap(), "--synth", "16", "--seed", "9", "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let manifest = read(&out_dir, "manifest.txt");
    assert!(manifest.contains("seed=9\n"), "flag wins: {manifest}");
    assert!(manifest.contains("iters=2\n"), "file fills in: {manifest}");
    assert!(!manifest.contains("out="), "out stays out of the manifest: {manifest}");
}

#[test]
fn unknown_config_keys_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "walk=4\n").unwrap();
    let out = antedge(&[
        "aco", "--config", cfg.to_str().unwrap(), "--synth", "16", "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("walk"), "{}", stderr(&out));
}

#[test]
fn config_written_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("o");
    let run = antedge(&["device", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let manifest = out_dir.join("manifest.txt");
    let out = antedge(&[
        "aco", "--config", manifest.to_str().unwrap(), "--synth", "16", "--out",
        dir.path().join("o2").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("device"), "{}", stderr(&out));
}

#[test]
fn equal_path_lengths_tie_in_both_systems() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "twopath", "--le1", "2", "--le2", "2", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let winner = read(dir.path(), "winner.txt");
    assert!(winner.contains("winner_swarm=tie"), "{winner}");
    assert!(winner.contains("winner_devices=tie"), "{winner}");
    assert!(winner.contains("agreement=true"), "{winner}");
}

#[test]
fn shorter_second_path_wins_in_both_systems() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "twopath", "--le1", "3", "--le2", "1.5", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let winner = read(dir.path(), "winner.txt");
    assert!(winner.contains("winner_swarm=path2"), "{winner}");
    assert!(winner.contains("winner_devices=path2"), "{winner}");
}

#[test]
fn lone_path_length_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&["twopath", "--le1", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn device_sweep_charges_on_the_positive_lobe_and_erases_on_the_negative() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&["device", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let peak: f64 = text
        .split("peak x ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(peak > 0.99, "peak x {peak}");
    let csv = read(dir.path(), "sweep.csv");
    let mut final_x = f64::NAN;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let v: f64 = cols[1].parse().unwrap();
        let i: f64 = cols[2].parse().unwrap();
        if v == 0.0 {
            assert_eq!(i, 0.0, "current must pinch at zero volts: {line}");
        }
        final_x = cols[3].parse().unwrap();
    }
    assert_eq!(final_x, 0.0, "reverse lobe discharges the device");
}

#[test]
fn device_sweep_inside_the_dead_zone_leaves_state_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "device", "--amplitude", "0.03", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = read(dir.path(), "sweep.csv");
    for line in csv.lines().skip(1) {
        let x: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(x, 0.0, "{line}");
    }
}

#[test]
fn hw_without_iterations_reports_no_traversal_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "hw", "--synth", "16", "--iters", "0", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let energy = read(dir.path(), "energy.txt");
    assert!(energy.contains("traversal_joules=0\n"), "{energy}");
    assert!(energy.contains("traversal_pulses=0\n"), "{energy}");
    for stage in ["init_pulses", "read_pulses", "reset_pulses"] {
        let line = energy.lines().find(|l| l.starts_with(stage)).unwrap();
        let count: u64 = line.split('=').nth(1).unwrap().parse().unwrap();
        assert!(count > 0, "{line}");
    }
}

#[test]
fn hw_invert_flips_the_mask_but_not_the_resistance_map() {
    let plain_dir = tempfile::tempdir().unwrap();
    let invert_dir = tempfile::tempdir().unwrap();
    let base = ["hw", "--synth", "16", "--iters", "2"];
    let plain = antedge(&[&base[..], &["--out", plain_dir.path().to_str().unwrap()]].concat());
    assert_eq!(plain.status.code(), Some(0), "{}", stderr(&plain));
    let inverted = antedge(
        &[&base[..], &["--invert", "--out", invert_dir.path().to_str().unwrap()]].concat(),
    );
    assert_eq!(inverted.status.code(), Some(0), "{}", stderr(&inverted));
    assert_eq!(
        read(plain_dir.path(), "resistance.csv"),
        read(invert_dir.path(), "resistance.csv"),
        "resistance artifacts must not change"
    );
    let a = std::fs::read(plain_dir.path().join("mask.pgm")).unwrap();
    let b = std::fs::read(invert_dir.path().join("mask.pgm")).unwrap();
    let split = |raw: &[u8]| -> Vec<u8> {
        // skip the three header lines of a binary PGM
        let mut idx = 0;
        for _ in 0..3 {
            idx += raw[idx..].iter().position(|&c| c == b'\n').unwrap() + 1;
        }
        raw[idx..].to_vec()
    };
    let (pa, pb) = (split(&a), split(&b));
    assert_eq!(pa.len(), pb.len());
    assert!(pa.iter().zip(&pb).all(|(x, y)| x != y), "every pixel flips");
}

#[test]
fn noise_level_zero_matches_the_plain_run() {
    let noise_dir = tempfile::tempdir().unwrap();
    let aco_dir = tempfile::tempdir().unwrap();
    let noise = antedge(&[
        "noise", "--levels", "0", "--seed", "5", "--out", noise_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(noise.status.code(), Some(0), "{}", stderr(&noise));
    let aco = antedge(&[
        "aco", "--synth", "32", "--seed", "5", "--out", aco_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(aco.status.code(), Some(0), "{}", stderr(&aco));
    let csv = read(noise_dir.path(), "noise_f1.csv");
    let row = csv.lines().nth(1).unwrap();
    let f1_noise: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    let scores = read(aco_dir.path(), "scores.txt");
    let f1_line = scores.lines().find(|l| l.starts_with("f1=")).unwrap();
    let f1_plain: f64 = f1_line.split('=').nth(1).unwrap().parse().unwrap();
    assert_eq!(f1_noise, f1_plain);
}

#[test]
fn noise_rows_come_back_sorted_ascending() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "noise", "--levels", "0.2,0,0.1", "--iters", "2", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = read(dir.path(), "noise_f1.csv");
    let levels: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(levels, vec![0.0, 0.1, 0.2]);
}

#[test]
fn aco_snapshots_follow_the_requested_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let out = antedge(&[
        "aco", "--synth", "16", "--iters", "4", "--snapshots", "0,2", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ["snapshot_0000.pgm", "snapshot_0002.pgm", "snapshot_0004.pgm"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let trace = read(dir.path(), "trace.csv");
    assert_eq!(trace.lines().count(), 4, "header + three snapshot rows: {trace}");
}
