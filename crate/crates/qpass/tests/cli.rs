// Copyright 2026 The qpass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The binary end to end: exit codes, output files, determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qpass(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpass"))
        .current_dir(dir)
        .env_remove("QPASS_OUTPUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_is_deterministic_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = qpass(
            dir.path(),
            &["--seed", "11", "--mode", "extended", "--decoys", "6", "--out", out, "run", "--sessions", "4"],
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(dir.path().join("a/transcripts.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/transcripts.json")).unwrap();
    let (va, vb) = (json(&dir.path().join("a/transcripts.json")), json(&dir.path().join("b/transcripts.json")));
    assert_eq!(va["transcripts"], vb["transcripts"]);
    assert_ne!(a, b, "output dirs differ, so the echoed config must too");
    assert_eq!(va["accepted"], 4);
    assert_eq!(va["config"]["seed"], 11);
    assert_eq!(va["protocol"]["decoys"], 6);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qpass"))
        .current_dir(dir.path())
        .env("QPASS_OUTPUT_DIR", "envout")
        .args(["--seed", "1", "run"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("envout/transcripts.json").exists());
}

#[test]
fn fixture_roundtrip_keeps_round_counter() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qpass(dir.path(), &["--seed", "3", "--N", "5", "enroll", "--fixture", "card.json"])), 0);
    let before = json(&dir.path().join("card.json"));
    assert_eq!(before["config"]["blocks"], 5);
    for _ in 0..2 {
        let o = qpass(
            dir.path(),
            &[
                "--seed",
                "4",
                "--N",
                "5",
                "--mode",
                "extended",
                "--decoys",
                "3",
                "run",
                "--sessions",
                "2",
                "--fixture",
                "card.json",
            ],
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&dir.path().join("qpass-out/transcripts.json"))["accepted"], 2);
    }
    let after = json(&dir.path().join("card.json"));
    assert_eq!(after["last_pad_round"], 4);
    assert_eq!(after["password"], before["password"]);
    let rounds: Vec<_> = json(&dir.path().join("qpass-out/transcripts.json"))["transcripts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["round_id"].as_u64().unwrap())
        .collect();
    assert_eq!(rounds, [3, 4]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&qpass(d, &["run"])), 64, "missing seed");
    assert_eq!(code(&qpass(d, &["--seed", "1", "--alpha", "1.5", "run"])), 64);
    assert_eq!(code(&qpass(d, &["--seed", "1", "attack", "--kind", "nope"])), 64);
    assert_eq!(code(&qpass(d, &["--seed", "1", "attack", "--kind", "intercept-resend"])), 64, "needs extended mode");
    std::fs::write(d.join("cfg.json"), r#"{"protocol": {"blockz": 3}}"#).unwrap();
    assert_eq!(code(&qpass(d, &["--config", "cfg.json", "--seed", "1", "run"])), 64);
    assert_eq!(code(&qpass(d, &["--seed", "1", "run", "--fixture", "absent.json"])), 66);
    std::fs::write(d.join("broken.json"), "{").unwrap();
    assert_eq!(code(&qpass(d, &["--seed", "1", "run", "--fixture", "broken.json"])), 65);
    std::fs::write(d.join("blocker"), "").unwrap();
    assert_eq!(code(&qpass(d, &["--seed", "1", "--out", "blocker/sub", "run"])), 73);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"schema_version": 1, "protocol": {"blocks": 3, "alpha": 0.4}, "seed": 9, "trials": 300,
            "attack": {"kind": "card-steal"}}"#,
    )
    .unwrap();
    let o = qpass(dir.path(), &["--config", "cfg.json", "--xi", "0.6", "attack", "--kind", "card-steal"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("qpass-out/attack_card-steal.json"));
    assert_eq!(v["protocol"]["blocks"], 3);
    assert!((v["protocol"]["params"]["delta"].as_f64().unwrap().cos() - 0.6).abs() < 1e-12);
    assert_eq!(v["result"]["stats"]["session"]["trials"], 300);
    let csv = std::fs::read_to_string(dir.path().join("qpass-out/attack_card-steal.csv")).unwrap();
    assert!(csv.starts_with("metric,trials,detections,estimate"));
}

#[test]
fn single_point_bounds_report_the_attainment_gap() {
    let dir = tempfile::tempdir().unwrap();
    let o = qpass(dir.path(), &["verify-bounds", "--point", "--starts", "8"]);
    // Everything holds except that the optimum sits well below 1/2.
    assert_eq!(code(&o), 1);
    let v = json(&dir.path().join("qpass-out/bounds.json"));
    let failing: Vec<_> =
        v["rows"].as_array().unwrap().iter().filter(|r| r["pass"] == false).map(|r| r["quantity"].clone()).collect();
    assert_eq!(failing, ["ps-max-attains"]);
    let o = qpass(dir.path(), &["--alpha", "0.3", "--xi", "0.7", "verify-bounds", "--point", "--starts", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn report_rolls_up_earlier_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&qpass(d, &["--seed", "2", "attack", "--kind", "card-steal", "--trials", "200"])), 0);
    let _ = qpass(d, &["verify-bounds", "--point", "--starts", "4"]);
    let o = qpass(d, &["--seed", "2", "--N", "4", "report", "--trials", "200"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&d.join("qpass-out/summary.json"));
    assert!((v["headline"]["pn_closed_form"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert_eq!(v["attacks"][0]["kind"], "card-steal");
    assert_eq!(v["bounds"]["failed"], 1);
    assert!(d.join("qpass-out/summary.csv").exists());
}
