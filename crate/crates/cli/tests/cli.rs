//! End-to-end tests of the `repliq` binary: output schemas, exit codes and
//! error reporting.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use repliq_cli::RunRecord;

fn repliq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repliq")).args(args).output().expect("failed to spawn repliq")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn coefficients_match_golden() {
    assert_eq!(stdout(&repliq(&["--format", "csv", "coefficients", "2", "4"])), golden("coefficients_2_4.csv"));
}

#[test]
fn coefficient_bands() {
    let text = stdout(&repliq(&["--format", "csv", "coefficients", "5", "10"]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("2")));
    let single = stdout(&repliq(&["--format", "csv", "coefficients", "2", "2"]));
    assert_eq!(single.lines().count(), 2);
}

#[test]
fn bad_coefficient_range_is_a_validation_error() {
    for args in [["coefficients", "1", "4"], ["coefficients", "5", "3"]] {
        let out = repliq(&args);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error[validation]: "), "{err}");
    }
}

#[test]
fn threshold_matches_golden() {
    assert_eq!(
        stdout(&repliq(&["--format", "csv", "threshold", "--t-r", "1", "--t-d", "1"])),
        golden("threshold_1_1.csv")
    );
}

#[test]
fn classical_simulation_is_byte_stable() {
    let args = ["--seed", "42", "--format", "csv", "simulate", "--kind", "classical", "--a", "4", "--n", "1000", "--replicates", "100"];
    let first = stdout(&repliq(&args));
    assert_eq!(first, stdout(&repliq(&args)));
    assert_eq!(first, golden("simulate_classical_a4_n1000_seed42.csv"));
}

#[test]
fn ideal_quantum_time() {
    let out = stdout(&repliq(&["simulate", "--kind", "quantum-ideal", "--a", "4", "--n", "100", "--t-r", "1"]));
    let record = RunRecord::from_json(&out).unwrap();
    match record.results {
        repliq_cli::Results::Simulation(s) => assert_eq!(s.total_time, 100.0),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn zero_coherence_is_rejected() {
    let out = repliq(&["simulate", "--kind", "quantum-imperfect", "--a", "4", "--n", "100", "--p-coherence", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error[validation]"));
    let missing = repliq(&["simulate", "--kind", "quantum-imperfect", "--a", "4", "--n", "100"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn generated_samples_match_golden_schema() {
    let text = stdout(&repliq(&["--seed", "7", "--format", "csv", "generate", "--repeats", "2"]));
    assert_eq!(text, golden("generate_classical_seed7.csv"));
    assert!(text.starts_with("a,observed_rate,sigma_rel\n"));
}

fn verdict_for(csv: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "rates.csv", csv);
    let out = stdout(&repliq(&["--format", "csv", "discriminate", "--input", input.to_str().unwrap(), "--bootstrap", "200"]));
    out.lines().nth(1).unwrap().split(',').next().unwrap().to_owned()
}

#[test]
fn discriminate_files() {
    let classical = "a,observed_rate,sigma_rel\n1,1,0.05\n2,0.5,0.05\n3,0.333,0.05\n4,0.25,0.05\n";
    assert_eq!(verdict_for(classical), "Classical");
    let quantum = "a,observed_rate,sigma_rel\n1,1,0.05\n2,1,0.05\n3,1,0.05\n4,1,0.05\n";
    assert_eq!(verdict_for(quantum), "Quantum");
}

#[test]
fn malformed_row_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "a,observed_rate,sigma_rel\n1,1,0.05\n2,0.5,0.05\n3,oops,0.05\n");
    let out = repliq(&["discriminate", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[parse]: "), "{err}");
    assert!(err.contains("bad.csv:4:") && err.contains("3,oops,0.05"), "{err}");
}

#[test]
fn single_alphabet_dataset_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.csv", "a,observed_rate,sigma_rel\n2,0.5,0.05\n2,0.6,0.05\n");
    let out = repliq(&["discriminate", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn isotope_and_power_edge_cases() {
    let iso = stdout(&repliq(&["--format", "csv", "isotope", "--exchange-prob", "0", "--n", "200", "--replicates", "2"]));
    let row: Vec<&str> = iso.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "0");
    assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    assert_eq!(row[6], "true");

    let power = stdout(&repliq(&[
        "--format", "csv", "power", "--sigma", "0", "--trials", "10", "--bootstrap", "100", "--repeats", "2",
    ]));
    let row: Vec<&str> = power.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn output_file_and_replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let record_path = dir.path().join("run.json");
    let out = repliq(&[
        "--seed", "11", "--out", record_path.to_str().unwrap(), "isotope", "--exchange-prob", "0.3", "--n", "300",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let record = RunRecord::from_json(&std::fs::read_to_string(&record_path).unwrap()).unwrap();
    assert_eq!(record.command, "isotope");
    assert_eq!(record.master_seed, 11);
    assert!(record.rng_algorithm.contains("ChaCha8"));

    let replayed = repliq(&["replay", record_path.to_str().unwrap()]);
    assert!(replayed.status.success());

    // A tampered payload no longer replays.
    let text = std::fs::read_to_string(&record_path).unwrap();
    let tampered = text.replacen("\"separated_count\": ", "\"separated_count\": 1", 1);
    let tampered_path = write(dir.path(), "tampered.json", &tampered);
    assert_eq!(repliq(&["replay", tampered_path.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn bad_flags_fail_with_usage_error() {
    let out = repliq(&["simulate", "--kind", "teleport", "--a", "4", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_flags_accept_spaces_or_commas() {
    let base = ["--format", "csv", "power", "--trials", "10", "--bootstrap", "100", "--repeats", "2"];
    let spaced = stdout(&repliq(&[&base[..], &["--sigma", "0.05", "0.2"]].concat()));
    let commas = stdout(&repliq(&[&base[..], &["--sigma", "0.05,0.2"]].concat()));
    assert_eq!(spaced, commas);
    assert_eq!(spaced.lines().count(), 3);
}
