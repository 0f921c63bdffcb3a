//! The acceptance suite: one line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kacomm::harness::selftest::{
    derivative_commutation, derivative_expansion, encoding_correctness, unfolding_identity,
};
use kacomm::harness::{
    check_preka_axioms, model_eval, verify_completeness_bounded, verify_soundness_witness,
    BotTopNat, CheckReport,
};
use kacomm::reduction::{check_machine_representable, eta};
use kacomm::terms::parse_term;
use kacomm::{CommutableSet, Machine};

const SEED: u64 = 2024;
const FUEL: usize = 100_000;

fn machine(file: &str) -> Machine {
    let path = format!("{}/../../machines/{file}", env!("CARGO_MANIFEST_DIR"));
    Machine::parse(&std::fs::read_to_string(path).expect("machine file")).expect("well-formed")
}

fn summarize(reports: &[CheckReport]) -> Result<String, String> {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(ToString::to_string)
        .collect();
    if failed.is_empty() {
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        Ok(format!("{} checks ({})", reports.len(), names.join(", ")))
    } else {
        Err(failed.join("; "))
    }
}

fn counterexample_model() -> Result<String, String> {
    let report = check_preka_axioms(&BotTopNat::sample(5));
    let x = CommutableSet::discrete(&["x"]).expect("valid");
    let bot = |_| BotTopNat::Bot;
    let once = model_eval(&parse_term("x*", &x).expect("term"), &bot);
    let twice = model_eval(&parse_term("(x*)*", &x).expect("term"), &bot);
    if once != BotTopNat::Nat(0) || twice != BotTopNat::Top {
        return Err(format!("⊥* = {once}, (⊥*)* = {twice}"));
    }
    summarize(&[report]).map(|s| format!("{s}, (⊥*)* = {twice} ≠ {once} = ⊥*"))
}

fn derivative_language() -> Result<String, String> {
    summarize(&[derivative_commutation(SEED, 200, 4)])
}

fn fundamental() -> Result<String, String> {
    summarize(&[derivative_expansion(SEED, 200, 4)])
}

fn expansion() -> Result<String, String> {
    summarize(&[unfolding_identity(SEED, 50)])
}

fn encoding() -> Result<String, String> {
    summarize(&[encoding_correctness(5)])
}

fn representability() -> Result<String, String> {
    let mut reports = Vec::new();
    for file in ["parity.cm", "transfer.cm"] {
        let m = machine(file);
        reports.extend(
            check_machine_representable(&m, 8)
                .into_iter()
                .map(|r| r.with_param("machine", m.name())),
        );
    }
    let ks: Vec<String> = reports
        .iter()
        .filter_map(|r| {
            Some(format!(
                "{}: k={}",
                r.params.get("machine")?,
                r.params.get("k")?
            ))
        })
        .collect();
    summarize(&reports).map(|s| format!("{s}; {}", ks.join(", ")))
}

fn completeness() -> Result<String, String> {
    let m = machine("parity.cm");
    let mut reports = Vec::new();
    for n in [0, 2, 4] {
        reports.extend(verify_completeness_bounded(&m, n, FUEL, None).map_err(|e| e.to_string())?);
    }
    let bounds: Vec<&str> = reports
        .iter()
        .filter_map(|r| r.params.get("bound").map(String::as_str))
        .collect();
    summarize(&reports).map(|s| format!("{s}; bounds {}", bounds.join(", ")))
}

fn soundness() -> Result<String, String> {
    let m = machine("parity.cm");
    let mut reports = Vec::new();
    for n in [1, 3] {
        reports.push(verify_soundness_witness(&m, n, FUEL).map_err(|e| e.to_string())?);
    }
    let lens: Vec<&str> = reports
        .iter()
        .filter_map(|r| r.params.get("witness_len").map(String::as_str))
        .collect();
    summarize(&reports).map(|s| format!("{s}; witness lengths {}", lens.join(", ")))
}

fn determinism() -> Result<String, String> {
    let m = machine("parity.cm");
    let inputs: Vec<Vec<u8>> = (0..3)
        .map(|n| format!("{}input {n}\n", m.render()).into_bytes())
        .collect();
    let reference: Vec<(String, String)> = inputs.iter().map(|i| eta(i)).collect();
    for run in 0..10 {
        let order: Vec<usize> = if run % 2 == 0 {
            vec![0, 1, 2]
        } else {
            vec![2, 0, 1]
        };
        for &i in &order {
            if eta(&inputs[i]) != reference[i] {
                return Err(format!("run {run} differs on input {i}"));
            }
        }
    }
    for bad in [
        &b"garbage"[..],
        b"",
        &[0xff, 0x00],
        b"machine p\nstart q\nq: halt 1\n",
    ] {
        let got = eta(bad);
        if got != ("0".to_string(), "1".to_string()) {
            return Err(format!("malformed input gave {got:?}"));
        }
    }
    Ok("10 runs identical, malformed input gives (0, 1)".to_string())
}

type Criterion = (&'static str, Duration, fn() -> Result<String, String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "counterexample model",
            Duration::from_secs(1),
            counterexample_model,
        ),
        (
            "derivative and language commute",
            Duration::from_secs(30),
            derivative_language,
        ),
        (
            "derivative expansion and residues",
            Duration::from_secs(30),
            fundamental,
        ),
        ("unfolding identity", Duration::from_secs(30), expansion),
        ("encoding correctness", Duration::from_secs(10), encoding),
        (
            "representability of R_M",
            Duration::from_secs(60),
            representability,
        ),
        (
            "completeness at desk scale",
            Duration::from_secs(300),
            completeness,
        ),
        ("soundness separation", Duration::from_secs(30), soundness),
        ("reduction determinism", Duration::from_secs(1), determinism),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (verdict, detail) = match result {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {} s limit", limit.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {}: {verdict} {name} ({:.3} s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
