//! Seeded property checks over random terms.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::alphabet::CommutableSet;
use crate::derivatives::fanout_certificate;
use crate::derivatives::{build_automaton_with_cap, comm_derivative, expand, residue};
use crate::machines::{config_word, encode_machine, next_set, Config, Machine, MachineAlphabet};
use crate::terms::{language_upto, Language, Term};
use crate::traces::words_upto;

use super::gen::{corpus_alphabets, random_term};
use super::{check_preka_axioms, BotTopNat, CheckReport};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const MAX_NODES: usize = 12;

/// `count` random terms spread evenly over the corpus alphabets.
pub fn corpus(seed: u64, count: usize) -> Vec<(Arc<CommutableSet>, Term)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let alphabets = corpus_alphabets();
    (0..count)
        .map(|i| {
            let (_, x) = &alphabets[i % alphabets.len()];
            let t = random_term(&mut rng, x, MAX_NODES);
            (x.clone(), t)
        })
        .collect()
}

fn show(e: &Term, x: &CommutableSet) -> String {
    e.render(x)
}

/// `l(δ_x(e))` against the left quotient `{s : x·s ∈ l(e)}` of the
/// enumerated language.
pub fn derivative_commutation(seed: u64, count: usize, bound: usize) -> CheckReport {
    let params = [
        ("bound", bound.to_string()),
        ("seed", seed.to_string()),
        ("terms", count.to_string()),
    ];
    CheckReport::run("derivative_commutation", &params, || {
        for (x, e) in corpus(seed, count) {
            let longer = language_upto(&e, bound + 1, &x);
            let words = words_upto(&x, bound);
            for sym in x.symbols() {
                let d = comm_derivative(&e, sym, &x);
                let got = language_upto(&d, bound, &x);
                let want: Language = words
                    .iter()
                    .filter(|s| longer.contains(&s.prepend(sym, &x)))
                    .cloned()
                    .collect();
                if got != want {
                    return Err(format!("e = {}, x = {}", show(&e, &x), x.name(sym)));
                }
            }
        }
        Ok(())
    })
}

/// `l(e) = l([e]₀ + Σ_x x·δ_x(e))` and `l(e) = l(ρ_x(e) + x·δ_x(e))`.
pub fn derivative_expansion(seed: u64, count: usize, bound: usize) -> CheckReport {
    let params = [
        ("bound", bound.to_string()),
        ("seed", seed.to_string()),
        ("terms", count.to_string()),
    ];
    CheckReport::run("derivative_expansion", &params, || {
        for (x, e) in corpus(seed, count) {
            let lang = language_upto(&e, bound, &x);
            let mut parts = vec![e.empty_word()];
            for sym in x.symbols() {
                let d = comm_derivative(&e, sym, &x);
                let step = Term::sym(sym).times(&d);
                let split = residue(&e, sym, &x).plus(&step);
                if language_upto(&split, bound, &x) != lang {
                    return Err(format!(
                        "residue: e = {}, x = {}",
                        show(&e, &x),
                        x.name(sym)
                    ));
                }
                parts.push(step);
            }
            if language_upto(&Term::sum(parts), bound, &x) != lang {
                return Err(format!("expansion: e = {}", show(&e, &x)));
            }
        }
        Ok(())
    })
}

/// Random terms that have an automaton of at most `cap` states.
pub fn finite_state_corpus(seed: u64, count: usize, cap: usize) -> Vec<(Arc<CommutableSet>, Term)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let alphabets = corpus_alphabets();
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let (_, x) = &alphabets[i % alphabets.len()];
        i += 1;
        let t = random_term(&mut rng, x, MAX_NODES);
        if build_automaton_with_cap(&t, x, cap).is_ok() {
            out.push((x.clone(), t));
        }
    }
    out
}

/// For each term and `k ∈ {1, 2, 3}`: `l(e) = l(Σ short + Σ s·e_s)` at bound
/// `k + 3`, and every `e_s` is a sum of automaton states.
pub fn unfolding_identity(seed: u64, count: usize) -> CheckReport {
    let params = [("seed", seed.to_string()), ("terms", count.to_string())];
    CheckReport::run("unfolding_identity", &params, || {
        for (x, e) in finite_state_corpus(seed, count, 2_000) {
            for k in 1..=3 {
                let ex = expand(&e, k, &x).map_err(|err| err.to_string())?;
                let bound = k + 3;
                if language_upto(&ex.recombine(), bound, &x) != language_upto(&e, bound, &x) {
                    return Err(format!("partition: e = {}, k = {k}", show(&e, &x)));
                }
                if let Some(f) = ex
                    .frontier
                    .iter()
                    .find(|f| !ex.automaton.is_state_sum(&f.term))
                {
                    return Err(format!(
                        "frontier {}: e = {}",
                        f.word.render(&x),
                        show(&e, &x)
                    ));
                }
            }
        }
        Ok(())
    })
}

/// A machine whose start state `q` runs `instr`, with `q1` and `q2` halting.
pub fn instruction_machine(instr: &str) -> Machine {
    Machine::parse(&format!(
        "machine t\nstart q\nq: {instr}\nq1: halt 0\nq2: halt 1\n"
    ))
    .expect("well-formed")
}

pub const INSTRUCTION_KINDS: [&str; 5] =
    ["inc 1 q1", "inc 2 q1", "if 1 q1 q2", "if 2 q1 q2", "halt 1"];

/// `Next_{R_M}({a^n b^m q}) = {step(a^n b^m q)}` for every instruction kind,
/// every state and all `n, m ≤ max`.
pub fn encoding_correctness(max: u64) -> CheckReport {
    CheckReport::run("encoding_correctness", &[("max", max.to_string())], || {
        for instr in INSTRUCTION_KINDS {
            let m = instruction_machine(instr);
            let alph = MachineAlphabet::new(&m);
            let rm = encode_machine(&m, &alph);
            let cert = fanout_certificate(&rm, &alph.doubled).map_err(|e| e.to_string())?;
            let mut configs = vec![Config::Halted(0), Config::Halted(1)];
            for q in 0..m.states().len() {
                for n in 0..=max {
                    for k in 0..=max {
                        configs.push(Config::running(n, k, q));
                    }
                }
            }
            for c in configs {
                let s = config_word(&c, &alph).map_err(|e| e.to_string())?;
                let next = next_set(&rm, &Language::from([s]), &cert, &alph.doubled);
                let want: Language = m
                    .step(&c)
                    .map(|c2| config_word(&c2, &alph))
                    .transpose()
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .collect();
                if next.len() > 1 || next != want {
                    let got: Vec<String> = next.iter().map(|w| w.render(&alph.sigma)).collect();
                    return Err(format!(
                        "{instr} at {}: got {{{}}}",
                        m.show_config(&c),
                        got.join(", ")
                    ));
                }
            }
        }
        Ok(())
    })
}

/// The suite behind the `selftest` command.
pub fn run_selftest(seed: u64) -> Vec<CheckReport> {
    let mut reports = vec![
        check_preka_axioms(&BotTopNat::sample(5)),
        derivative_commutation(seed, 200, 4),
        derivative_expansion(seed, 200, 4),
        unfolding_identity(seed, 50),
        encoding_correctness(5),
    ];
    super::sort_reports(&mut reports);
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs() {
        assert!(derivative_commutation(1, 24, 3).passed());
        assert!(derivative_expansion(1, 24, 3).passed());
        assert!(unfolding_identity(1, 8).passed());
        let r = encoding_correctness(2);
        assert!(r.passed(), "{r}");
    }
}
