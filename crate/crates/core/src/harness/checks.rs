//! Bounded checks of the soundness and completeness statements.

use thiserror::Error;

use crate::alphabet::{CommutableSet, Side};
use crate::derivatives::fanout_certificate;
use crate::derivatives::search::{bounded_inclusion, SearchOptions};
use crate::machines::{config_word, Machine, MachineAlphabet, MachineError, Outcome, Run};
use crate::reduction::{build_instance, diagonal_star, letters, next_replay, ReductionError};
use crate::terms::{member, Language, Term};
use crate::traces::TraceWord;

use super::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("expected the machine to output {expected}, but the run ended with {found}")]
    Precondition { expected: u8, found: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Passes iff every word of `e1` up to the bound is in `e2`; the
/// counterexample is the shortlex least failing word.
pub fn check_language_leq(e1: &Term, e2: &Term, bound: usize, x: &CommutableSet) -> CheckReport {
    CheckReport::run("language_leq", &[("bound", bound.to_string())], || {
        let outcome =
            bounded_inclusion(e1, e2, x, &SearchOptions::new(bound)).map_err(|e| e.to_string())?;
        match outcome.witness {
            Some(w) => Err(w.render(x)),
            None => Ok(()),
        }
    })
}

fn expect_output(m: &Machine, n: u64, fuel: usize, expected: u8) -> Result<Run, HarnessError> {
    let run = m.run(n, fuel);
    match run.outcome {
        Outcome::Output(x) if x == expected => Ok(run),
        Outcome::Output(x) => Err(HarnessError::Precondition {
            expected,
            found: format!("output {x}"),
        }),
        Outcome::FuelExhausted => Err(HarnessError::Precondition {
            expected,
            found: format!("no output after {fuel} steps"),
        }),
    }
}

/// `(s₀)_r (s₀)_l (s₁)_r (s₁)_l ⋯ (s_k)_r` for a run `s₀, ..., s_k`.
pub fn trace_witness(run: &Run, alph: &MachineAlphabet) -> Result<TraceWord, HarnessError> {
    let d = &alph.doubled;
    let mut p = TraceWord::empty();
    for (i, c) in run.trace.iter().enumerate() {
        let s = config_word(c, alph)?;
        if i > 0 {
            let prev = config_word(&run.trace[i - 1], alph)?;
            p = p.concat(&prev.on_side(Side::Left, d).expect("Σ_M word"), d);
        }
        p = p.concat(&s.on_side(Side::Right, d).expect("Σ_M word"), d);
    }
    Ok(p)
}

/// The completeness bound for an accepting run: the witness length plus 4.
pub fn default_completeness_bound(m: &Machine, n: u64, fuel: usize) -> Result<usize, HarnessError> {
    let run = expect_output(m, n, fuel, 1)?;
    Ok(trace_witness(&run, &MachineAlphabet::new(m))?.len() + 4)
}

/// For a run ending in `c₀`, builds the trace witness `p` and checks that
/// `p ∈ e_L` while `p` escapes each part of the soundness right-hand side.
pub fn verify_soundness_witness(
    m: &Machine,
    n: u64,
    fuel: usize,
) -> Result<CheckReport, HarnessError> {
    let run = expect_output(m, n, fuel, 0)?;
    let inst = build_instance(m, n)?;
    let alph = &inst.alphabet;
    let d = &alph.doubled;
    let p = trace_witness(&run, alph)?;
    let params = [
        ("input", n.to_string()),
        ("steps", run.steps().to_string()),
        ("witness_len", p.len().to_string()),
    ];
    let report = CheckReport::run("soundness_witness", &params, || {
        let fail = |clause: &str| Err(format!("{clause}: {}", p.render(d)));
        if !member(&p, &inst.e_l, d) {
            return fail("not in e_L");
        }
        let rights = (0..alph.sigma.len()).map(|i| alph.r(crate::alphabet::Symbol::new(i)));
        let right_plus = Term::sum(rights.collect::<Vec<_>>());
        let right_plus = right_plus.times(&right_plus.star());
        let shape = diagonal_star(d)
            .map_err(|e| e.to_string())?
            .times(&right_plus);
        if !member(&p, &shape, d) {
            return fail("not of the form Σ*(Σ_M)_r⁺");
        }
        if member(&p, &inst.mismatch_part(), d) {
            return fail("absorbed by Σ*Σ^≠Ẍ*");
        }
        let right = p.project(Side::Right, d).map_err(|e| e.to_string())?;
        if right.letters().last() != Some(&alph.c(0)) {
            return fail("right projection does not end in c0");
        }
        if member(&p, &inst.accepting_part(), d) {
            return fail("accepted by Σ*(C_M + c1)_r");
        }
        if member(&p, &inst.e_r_sound, d) {
            return fail("in e_R_sound");
        }
        Ok(())
    });
    Ok(report)
}

/// For a run ending in `c₁`, checks `l(e_L) ⊆ l(e_R)` on words up to the
/// bound and replays `Next^i({s}) = {sᵢ}` along the run, then `∅`.
pub fn verify_completeness_bounded(
    m: &Machine,
    n: u64,
    fuel: usize,
    bound: Option<usize>,
) -> Result<Vec<CheckReport>, HarnessError> {
    let run = expect_output(m, n, fuel, 1)?;
    let inst = build_instance(m, n)?;
    let alph = &inst.alphabet;
    let d = &alph.doubled;
    let bound = match bound {
        Some(b) => b,
        None => trace_witness(&run, alph)?.len() + 4,
    };
    let mut nodes = 0;
    let inclusion = CheckReport::run(
        "completeness_inclusion",
        &[("bound", bound.to_string()), ("input", n.to_string())],
        || {
            let outcome = bounded_inclusion(
                &inst.e_l,
                &inst.e_r,
                d,
                &SearchOptions::new(bound).balanced(),
            )
            .map_err(|e| e.to_string())?;
            nodes = outcome.nodes;
            match outcome.witness {
                Some(w) => Err(w.render(d)),
                None => Ok(()),
            }
        },
    )
    .with_param("nodes", nodes);
    let replay = CheckReport::run(
        "next_replay",
        &[("input", n.to_string()), ("steps", run.steps().to_string())],
        || {
            let cert = fanout_certificate(&inst.r_m, d).map_err(|e| e.to_string())?;
            let sets = next_replay(&inst, &cert, run.trace.len() + 2).map_err(|e| e.to_string())?;
            let mut expected: Vec<Language> = run
                .trace
                .iter()
                .map(|c| config_word(c, alph).map(|w| Language::from([w])))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            expected.push(Language::new());
            if sets == expected {
                return Ok(());
            }
            let shown: Vec<String> = sets
                .iter()
                .map(|s| {
                    let ws: Vec<String> = s.iter().map(|w| w.render(&alph.sigma)).collect();
                    format!("{{{}}}", ws.join(", "))
                })
                .collect();
            Err(shown.join(" "))
        },
    );
    Ok(vec![inclusion, replay])
}

/// `Ẍ*`, used to bound residues.
pub fn full_star(x: &CommutableSet) -> Term {
    letters(x).star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Verdict;
    use crate::terms::parse_term;

    #[test]
    fn language_leq_examples() {
        let x = CommutableSet::discrete(&["a", "b"]).unwrap();
        let p = |s| parse_term(s, &x).unwrap();
        assert!(check_language_leq(&p("a"), &p("a + b"), 5, &x).passed());
        let r = check_language_leq(&p("a + b"), &p("a"), 5, &x);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.counterexample.as_deref(), Some("b"));
        assert!(check_language_leq(&p("a* b*"), &p("(a + b)*"), 4, &x).passed());
        let r = check_language_leq(&p("(a + b)*"), &p("a* b*"), 4, &x);
        assert_eq!(r.counterexample.as_deref(), Some("b a"));
    }

    #[test]
    fn soundness_on_rejected_inputs() {
        let m = Machine::parity();
        let r = verify_soundness_witness(&m, 1, 1000).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.params["witness_len"], "9");
        assert!(matches!(
            verify_soundness_witness(&m, 2, 1000),
            Err(HarnessError::Precondition { expected: 0, .. })
        ));
        let h = Machine::parse("machine h\nstart q\nq: halt 0\n").unwrap();
        let run = h.run(0, 10);
        let alph = MachineAlphabet::new(&h);
        let p = trace_witness(&run, &alph).unwrap();
        assert_eq!(p, TraceWord::parse("q_r q_l c0_r", &alph.doubled).unwrap());
        assert!(verify_soundness_witness(&h, 0, 10).unwrap().passed());
    }

    #[test]
    fn completeness_small() {
        let m = Machine::parity();
        let reports = verify_completeness_bounded(&m, 0, 1000, None).unwrap();
        assert!(reports.iter().all(CheckReport::passed), "{reports:?}");
        assert_eq!(reports[0].params["bound"], "9");
        assert!(matches!(
            verify_completeness_bounded(&m, 1, 1000, None),
            Err(HarnessError::Precondition { expected: 1, .. })
        ));
        assert!(matches!(
            verify_completeness_bounded(&m, 1, 0, None),
            Err(HarnessError::Precondition { .. })
        ));
    }

    #[test]
    fn inclusion_search_finds_planted_failures() {
        let m = Machine::parity();
        let inst = build_instance(&m, 0).unwrap();
        let d = &inst.alphabet.doubled;
        let c_m_only = diagonal_star(d).unwrap().times(
            &inst
                .alphabet
                .on_side(&crate::machines::c_m(&inst.alphabet), Side::Right),
        );
        let weakened = c_m_only.plus(&Term::product([
            diagonal_star(d).unwrap(),
            inst.sigma_neq.clone(),
            inst.rho.clone(),
        ]));
        let opts = SearchOptions::new(9).balanced();
        let w = bounded_inclusion(&inst.e_l, &weakened, d, &opts)
            .unwrap()
            .witness
            .unwrap();
        assert!(member(&w, &inst.e_l, d) && !member(&w, &weakened, d));
        assert_eq!(
            w.project(Side::Right, d).unwrap().letters().last(),
            Some(&inst.alphabet.c(1))
        );

        let rejected = build_instance(&m, 1).unwrap();
        let opts = SearchOptions::new(9).balanced();
        let out = bounded_inclusion(&rejected.e_l, &rejected.e_r_sound, d, &opts).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.len(), 9);
        assert_eq!(
            w,
            trace_witness(&m.run(1, 100), &rejected.alphabet).unwrap()
        );
    }

    #[test]
    fn exactly_one_precondition_holds() {
        let m = Machine::parity();
        for n in 0..6 {
            let s = verify_soundness_witness(&m, n, 1000).is_ok();
            let c = default_completeness_bound(&m, n, 1000).is_ok();
            assert!(s != c, "input {n}");
        }
    }

    #[test]
    fn witness_lengths() {
        let m = Machine::parity();
        let alph = MachineAlphabet::new(&m);
        let lens: Vec<usize> = (0..5)
            .map(|n| trace_witness(&m.run(n, 1000), &alph).unwrap().len())
            .collect();
        assert_eq!(lens, [5, 9, 15, 23, 33]);
    }
}
