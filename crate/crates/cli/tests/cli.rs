use std::path::{Path, PathBuf};
use std::process::Command;

use syncong::algebra::AlgFile;
use syncong::samples;
use syncong::{serialize_algebra, serialize_dfa, serialize_system, SubsetL};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_syncong")
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> std::process::Output {
    run_in(Path::new("."), args)
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn payload(out: &std::process::Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(&stdout(out)).expect("stdout is JSON");
    assert_eq!(v["schema"], 1);
    v["payload"].clone()
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture written");
    path
}

fn cyclic_alg(n: usize, evens: bool) -> String {
    let subsets = if evens {
        vec![(
            "evens".to_string(),
            SubsetL::from_indices(n, &(0..n).step_by(2).collect::<Vec<_>>()).unwrap(),
        )]
    } else {
        Vec::new()
    };
    serialize_algebra(&AlgFile {
        algebra: samples::cyclic(n),
        subsets,
    })
}

#[test]
fn syn_reports_classes_in_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, true));
    let out = run(&["syn", "-a", z4.to_str().unwrap(), "-L", "0,2"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("syntactic classes {0,2}/{1,3} (2 classes)"), "{text}");
    assert!(text.contains("morphism [0 1 0 1]"), "{text}");

    let out = run(&["syn", "-a", z4.to_str().unwrap(), "-L", "evens", "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["class_count"], 2);
    assert_eq!(p["classes"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(p["monoid_size"], 4);
}

#[test]
fn exit_codes_follow_the_contract() {
    let out = run(&["syn", "-a", "definitely-missing.alg", "-L", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("definitely-missing.alg"));

    let out = run(&["no-such-verb"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("syn"));

    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, false));
    // A partition that is not a congruence is bad input, not an internal bug.
    let out = run(&["quotient", "-a", z4.to_str().unwrap(), "--by", "0,1/2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "check", "--suite", "oracle", "--samples", "5", "--seed", "7", "--json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success(), "stderr: {}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let p = payload(&first);
    assert_eq!(p["samples"], 5);
    assert_eq!(p["failures"], serde_json::json!([]));
}

#[test]
fn quotient_emits_dot_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, false));
    let out = run(&["quotient", "-a", z4.to_str().unwrap(), "--by", "0,2/1,3", "--dot"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph quotient {"), "{dot}");
    assert!(dot.contains("s3 -> q1;"), "{dot}");

    let out = run(&["quotient", "-a", z4.to_str().unwrap(), "--by", "0,2/1,3", "--json"]);
    let p = payload(&out);
    assert_eq!(p["projection"], serde_json::json!([0, 1, 0, 1]));
    assert_eq!(p["quotient"]["carrier"], 2);
}

#[test]
fn fmt_round_trips_canonical_files() {
    let dir = tempfile::tempdir().unwrap();
    let canonical_alg = cyclic_alg(4, true);
    let z4 = write_fixture(dir.path(), "z4.alg", &canonical_alg);
    let out = run(&["fmt", "--algebra", z4.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), canonical_alg);

    let canonical_sys = serialize_system(&samples::power_tower());
    let sys = write_fixture(dir.path(), "tower.sys", &canonical_sys);
    let out = run(&["fmt", "--system", sys.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), canonical_sys);

    let canonical_dfa = serialize_dfa(&samples::abstar_dfa());
    let dfa = write_fixture(dir.path(), "abstar.dfa", &canonical_dfa);
    let out = run(&["fmt", "--dfa", dfa.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), canonical_dfa);

    let out = run(&[
        "fmt",
        "--algebra",
        z4.to_str().unwrap(),
        "--dfa",
        dfa.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn omega_powers_match_hand_computation() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, false));
    let out = run(&["omega", "-a", z4.to_str().unwrap(), "-e", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1^omega = 0\n");

    let out = run(&["omega", "-a", z4.to_str().unwrap(), "-e", "1", "--power", "3"]);
    assert_eq!(stdout(&out), "1^3! = 2\n");
}

#[test]
fn dfa_synmon_builds_the_six_element_monoid() {
    let dir = tempfile::tempdir().unwrap();
    let dfa = write_fixture(
        dir.path(),
        "abstar.dfa",
        &serialize_dfa(&samples::abstar_dfa()),
    );
    let out = run(&["dfa-synmon", "-d", dfa.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let p = payload(&out);
    assert_eq!(p["monoid_size"], 6);
    assert_eq!(p["faithful"], true);
    assert_eq!(p["minimal"]["states"], 3);
}

#[test]
fn system_verbs_validate_separate_recognize_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let canonical = serialize_system(&samples::power_tower());
    let sys = write_fixture(dir.path(), "tower.sys", &canonical);

    let out = run(&["sys-validate", "-s", sys.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("valid: yes"));

    // Corrupt the first connecting map so it is no longer a homomorphism.
    let broken_text = canonical.replace("map 2 1\n0 1 0 1\n", "map 2 1\n0 0 0 1\n");
    assert_ne!(broken_text, canonical, "corruption must hit");
    let broken = write_fixture(dir.path(), "broken.sys", &broken_text);
    let out = run(&["sys-validate", "-s", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("homomorphism no"), "{}", stdout(&out));

    let out = run(&[
        "sys-separate",
        "-s",
        sys.to_str().unwrap(),
        "--t1",
        "1,3,7",
        "--t2",
        "1,3,3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("level 3"), "{}", stdout(&out));

    let out = run(&[
        "sys-recognize",
        "-s",
        sys.to_str().unwrap(),
        "--cyl",
        "2:0,2",
        "--json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let p = payload(&out);
    assert_eq!(p["recognizer_carrier"], 2);
    assert_eq!(p["levels"][1]["cylinder"], serde_json::json!([0, 2, 4, 6]));
    assert_eq!(p["levels"][1]["identity_holds"], true);

    let out = run(&[
        "sys-quotient",
        "-s",
        sys.to_str().unwrap(),
        "--theta",
        "1:0/1",
        "--theta",
        "2:0,2/1,3",
        "--theta",
        "3:0,2,4,6/1,3,5,7",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("carrier 2").count(), 3, "{text}");
    assert!(text.contains("projection at level 3: [0 1 0 1 0 1 0 1]"), "{text}");
}

#[test]
fn meet_of_block_congruences() {
    let dir = tempfile::tempdir().unwrap();
    let z8 = write_fixture(dir.path(), "z8.alg", &cyclic_alg(8, false));
    let out = run(&[
        "meet",
        "-a",
        z8.to_str().unwrap(),
        "--blocks",
        "0,4/1,2,3,5,6,7",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("{0,4}/{1,5}/{2,6}/{3,7}"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn thm61_emits_ten_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, true));
    let out = run(&["thm61", "-a", z4.to_str().unwrap(), "-L", "evens", "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["conditions"].as_array().unwrap().len(), 10);
    assert_eq!(p["conditions"][0]["status"], "trivial");
    assert_eq!(p["conditions"][8]["status"]["implied_by"]["condition"], 8);
}

#[test]
fn pullback_verifies_along_a_surjection() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, false));
    let z2 = write_fixture(dir.path(), "z2.alg", &cyclic_alg(2, false));
    let out = run(&[
        "pullback",
        "-a",
        z4.to_str().unwrap(),
        "-b",
        z2.to_str().unwrap(),
        "--map",
        "0,1,0,1",
        "-L",
        "0",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("preimage {0,2}"), "{text}");
    assert!(text.contains("pullback equals the source congruence"), "{text}");
}

#[test]
fn window_suite_reports_pair_counts() {
    let out = run(&[
        "check", "--suite", "ex512", "--n", "8", "--xmax", "64", "--json",
    ]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["pairs_total"], 36);
    assert_eq!(p["unseparated"], serde_json::json!([]));
    assert_eq!(p["min_determining_size"], 4);

    let out = run(&["check", "--suite", "ex517", "--n", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("expected 0"));
}

#[test]
fn eval_and_linearize_work_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, false));
    let out = run(&[
        "eval",
        "-a",
        z4.to_str().unwrap(),
        "-t",
        "add(add(x,y),x)",
        "--assign",
        "x=1,y=2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "add(add(x,y),x) = 0\n");

    let out = run(&[
        "linearize",
        "-a",
        z4.to_str().unwrap(),
        "-t",
        "add(add(x1,x1),x2)",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2 splits"), "{text}");
    assert!(text.contains("add(add(x,z),x2)"), "{text}");
    assert!(text.contains("add(add(y,x),x2)"), "{text}");
}

#[test]
fn tm_and_detset_agree_on_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write_fixture(dir.path(), "z4.alg", &cyclic_alg(4, true));
    let out = run(&["tm", "-a", z4.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    assert_eq!(payload(&out)["size"], 4);

    let out = run(&["detset", "-a", z4.to_str().unwrap(), "-L", "evens", "--json"]);
    assert!(out.status.success());
    let p = payload(&out);
    assert_eq!(p["determined"], true);
    assert_eq!(p["index_bound"]["holds"], true);

    let out = run(&[
        "mindetset",
        "-a",
        z4.to_str().unwrap(),
        "-L",
        "evens",
        "--json",
    ]);
    assert!(out.status.success());
    let p = payload(&out);
    assert!(p["minimal_count"].as_u64().unwrap() <= p["initial_count"].as_u64().unwrap());
}
