use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn kacomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kacomm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn machine_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "machines", name]
        .iter()
        .collect();
    p.to_str().expect("utf-8 path").to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn derive_and_member() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write(dir.path(), "ab.txt", "alphabet a b\ncommute a b\n");
    let discrete = write(dir.path(), "d.txt", "alphabet a b\n");
    assert_eq!(stdout(&kacomm(&["derive", &ab, "b a", "a"])), "b\n");
    assert_eq!(stdout(&kacomm(&["derive", &discrete, "b a", "a"])), "0\n");
    assert_eq!(
        stdout(&kacomm(&["derive", &discrete, "a + b", "a", "--residue"])),
        "b\n"
    );
    assert_eq!(
        stdout(&kacomm(&[
            "derive",
            &discrete,
            "(a b)*",
            "a",
            "--expansion"
        ])),
        "b (a b)*\n"
    );
    let bad = kacomm(&["derive", &discrete, "a*", "a", "--expansion"]);
    assert!(bad.status.success());
    let bad = kacomm(&["derive", &discrete, "(a*)*", "a", "--expansion"]);
    assert_eq!(bad.status.code(), Some(2));

    let yes = kacomm(&["member", &ab, "a* b*", "b a"]);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "true\n");
    let no = kacomm(&["member", &discrete, "a* b*", "b a"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn expand_and_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", "alphabet a b\n");
    assert_eq!(
        stdout(&kacomm(&["expand", &x, "a + a b", "1"])),
        "a: 1 + b\n"
    );
    assert_eq!(stdout(&kacomm(&["expand", &x, "a b", "2"])), "a b: 1\n");
    let dump = stdout(&kacomm(&["automaton", &x, "(a b)*", "--dump"]));
    assert!(dump.lines().any(|l| l == "s0 = (a b)*"));
    assert!(dump.contains("--a-->"));
    assert_eq!(
        dump,
        stdout(&kacomm(&["automaton", &x, "(a b)*", "--dump"]))
    );
}

#[test]
fn machines() {
    let parity = machine_file("parity.cm");
    let out = stdout(&kacomm(&["run", &parity, "2", "--trace"]));
    assert!(out.starts_with("a^2 b^0 q0\n"));
    assert!(out.ends_with("c1\noutput 1 after 4 steps\n"));
    let out = stdout(&kacomm(&["run", &parity, "3", "--fuel", "2"]));
    assert_eq!(out, "no output after 2 steps\n");
    let enc = stdout(&kacomm(&["encode", &parity]));
    assert!(enc.contains("c1_r qA_l"));
}

#[test]
fn reduce_writes_instance() {
    let dir = tempfile::tempdir().unwrap();
    let parity = machine_file("parity.cm");
    let out = dir.path().join("inst");
    let status = kacomm(&["reduce", &parity, "0", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let terms = std::fs::read_to_string(out.join("instance.terms")).unwrap();
    let labels: Vec<&str> = terms
        .lines()
        .map(|l| l.split(" = ").next().unwrap())
        .collect();
    assert_eq!(labels, ["E_L", "E_R", "RHO", "E_R_SOUND", "SIGMA_NEQ"]);
    assert!(terms.starts_with("E_L = q0_r ("));
    let alphabet = std::fs::read_to_string(out.join("alphabet.txt")).unwrap();
    assert!(alphabet.starts_with("alphabet q0_l q0_r"));
    let again = stdout(&kacomm(&["reduce", &parity, "0"]));
    assert_eq!(again, format!("{alphabet}{terms}"));
}

#[test]
fn eta_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(machine_file("parity.cm")).unwrap();
    let good = write(dir.path(), "good.txt", &format!("{text}input 2\n"));
    let bad = write(dir.path(), "bad.txt", "hello\n");
    let out = stdout(&kacomm(&["eta", &good]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].ends_with(lines[1]));
    assert_eq!(stdout(&kacomm(&["eta", &bad])), "0\n1\n");
}

#[test]
fn verify_reports() {
    let parity = machine_file("parity.cm");
    let out = kacomm(&["verify", &parity, "2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"completeness_inclusion") && names.contains(&"next_replay"));
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for r in v.as_array().unwrap() {
        assert_eq!(r["verdict"], "pass");
        assert!(r.get("counterexample").is_none());
        assert!(r["millis"].is_u64());
    }
    let out = stdout(&kacomm(&["verify", &parity, "1"]));
    assert!(out.lines().any(|l| l.starts_with("PASS soundness_witness")));
    let out = stdout(&kacomm(&["verify", &parity, "0", "--bound", "14"]));
    assert!(out.contains("bound=14"));
}

#[test]
fn selftest_passes() {
    let out = kacomm(&["selftest", "--seed", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn errors_exit_with_two() {
    let out = kacomm(&["run", "/nonexistent/machine.cm", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}
