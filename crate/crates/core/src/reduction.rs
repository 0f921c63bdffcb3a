//! Representable relations and the inequality instances built from a
//! machine and an input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::{CommutableSet, Side};
use crate::derivatives::search::{bounded_inclusion, SearchOptions};
use crate::derivatives::{
    build_automaton, fanout_certificate, restrict, DerivError, FanoutCertificate,
};
use crate::harness::CheckReport;
use crate::machines::{
    c_m, config_word, encode_machine, next_set, t_m, Machine, MachineAlphabet, MachineError,
};
use crate::terms::{find_word, language_upto, member, Kind, Language, Term};
use crate::traces::TraceWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("the alphabet is not a doubled alphabet")]
    NotDoubled,
}

fn operands(x: &CommutableSet) -> Result<&CommutableSet, ReductionError> {
    match (x.left(), x.right()) {
        (Some(l), Some(r)) if l.same_as(r) => Ok(l),
        _ => Err(ReductionError::NotDoubled),
    }
}

/// The sum of all symbols of an alphabet.
pub fn letters(x: &CommutableSet) -> Term {
    Term::sum(x.symbols().map(Term::sym).collect::<Vec<_>>())
}

/// `Σ*` read in the doubled alphabet: `(Σ_x x_l x_r)*`.
pub fn diagonal_star(x: &CommutableSet) -> Result<Term, ReductionError> {
    let base = operands(x)?;
    let pairs = base.symbols().map(|s| {
        let l = x.embed(Side::Left, s).expect("doubled");
        let r = x.embed(Side::Right, s).expect("doubled");
        Term::sym(l).times(&Term::sym(r))
    });
    Ok(Term::sum(pairs.collect::<Vec<_>>()).star())
}

/// `Σ^≠ = Σ_{x ≠ y} x_l y_r`.
pub fn sigma_neq(x: &CommutableSet) -> Result<Term, ReductionError> {
    let base = operands(x)?;
    let mut summands = Vec::new();
    for s in base.symbols() {
        for t in base.symbols().filter(|&t| t != s) {
            let l = x.embed(Side::Left, s).expect("doubled");
            let r = x.embed(Side::Right, t).expect("doubled");
            summands.push(Term::sym(l).times(&Term::sym(r)));
        }
    }
    Ok(Term::sum(summands))
}

/// A term over the base alphabet read on one side of a direct sum.
pub fn side_term(e: &Term, side: Side, x: &CommutableSet) -> Term {
    e.substitute(&mut |s| Term::sym(x.embed(side, s).expect("operand symbol")))
}

/// A finite word set as a sum of words read on one side.
fn side_words(words: &Language, side: Side, x: &CommutableSet) -> Term {
    Term::sum(
        words
            .iter()
            .map(|w| Term::word(&w.on_side(side, x).expect("operand word")))
            .collect::<Vec<_>>(),
    )
}

/// A finite word set read in the doubled alphabet, `x ↦ x_l x_r`.
fn doubled_words(words: &Language, x: &CommutableSet) -> Term {
    Term::sum(
        words
            .iter()
            .map(|w| Term::word(&w.embed_doubled(x).expect("operand word")))
            .collect::<Vec<_>>(),
    )
}

/// Residue terms of a finite-state term.
#[derive(Clone, Debug)]
pub struct Residue {
    /// The sum of all automaton base states.
    pub rho_e: Term,
    /// `Ẍ*·ρ_e`, the residue of a single step.
    pub single: Term,
    /// `Ẍ*·ρ_e·e*`, the residue of the iterated relation.
    pub starred: Term,
}

pub fn residue_term(e: &Term, x: &CommutableSet) -> Result<Residue, DerivError> {
    let aut = build_automaton(e, x)?;
    let rho_e = aut.greatest();
    let all = letters(x).star();
    let single = all.times(&rho_e);
    let starred = single.times(&e.star());
    Ok(Residue {
        rho_e,
        single,
        starred,
    })
}

/// The inequality instance for a machine and an input.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub machine: Machine,
    pub input: u64,
    pub alphabet: MachineAlphabet,
    pub r_m: Term,
    pub e_l: Term,
    pub e_r: Term,
    pub rho: Term,
    pub e_r_sound: Term,
    pub sigma_neq: Term,
}

impl ReductionInstance {
    /// One labeled term per line.
    pub fn render(&self) -> String {
        let d = &self.alphabet.doubled;
        let mut out = String::new();
        for (label, t) in [
            ("E_L", &self.e_l),
            ("E_R", &self.e_r),
            ("RHO", &self.rho),
            ("E_R_SOUND", &self.e_r_sound),
            ("SIGMA_NEQ", &self.sigma_neq),
        ] {
            let _ = writeln!(out, "{label} = {}", t.render(d));
        }
        out
    }

    /// `Σ*(C_M + c1)_r`, the accepting part shared by both right-hand sides.
    pub fn accepting_part(&self) -> Term {
        let d = &self.alphabet.doubled;
        let target = c_m(&self.alphabet).plus(&Term::sym(self.alphabet.c(1)));
        diagonal_star(d)
            .expect("doubled")
            .times(&side_term(&target, Side::Right, d))
    }

    /// `Σ*Σ^≠Ẍ*`, the mismatch part of the soundness right-hand side.
    pub fn mismatch_part(&self) -> Term {
        let d = &self.alphabet.doubled;
        Term::product([
            diagonal_star(d).expect("doubled"),
            self.sigma_neq.clone(),
            letters(d).star(),
        ])
    }
}

pub fn build_instance(m: &Machine, n: u64) -> Result<ReductionInstance, ReductionError> {
    let alph = MachineAlphabet::new(m);
    let d = alph.doubled.clone();
    let r_m = encode_machine(m, &alph);
    let s = config_word(&m.initial(n), &alph)?;
    let s_r = Term::word(&s.on_side(Side::Right, &d).expect("Σ_M word"));
    let e_l = s_r.times(&r_m.star());
    let dstar = diagonal_star(&d)?;
    let neq = sigma_neq(&d)?;
    let target = c_m(&alph).plus(&Term::sym(alph.c(1)));
    let accepting = dstar.times(&side_term(&target, Side::Right, &d));
    let rho = residue_term(&r_m, &d)?.starred;
    let e_r = accepting.plus(&Term::product([dstar.clone(), neq.clone(), rho.clone()]));
    let e_r_sound = accepting.plus(&Term::product([dstar, neq.clone(), letters(&d).star()]));
    Ok(ReductionInstance {
        machine: m.clone(),
        input: n,
        alphabet: alph,
        r_m,
        e_l,
        e_r,
        rho,
        e_r_sound,
        sigma_neq: neq,
    })
}

/// Parses a machine followed by a line `input N`.
pub fn parse_pair(text: &str) -> Option<(Machine, u64)> {
    let mut input = None;
    let mut machine_text = String::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("input") {
            if rest.starts_with(char::is_whitespace) {
                if input.is_some() {
                    return None;
                }
                input = Some(rest.trim().parse::<u64>().ok()?);
                continue;
            }
        }
        machine_text.push_str(line);
        machine_text.push('\n');
    }
    Some((Machine::parse(&machine_text).ok()?, input?))
}

/// `⟨e_L + e_R, e_R⟩` rendered, or `⟨0, 1⟩` when the input does not encode a
/// machine and an input.
pub fn eta(input: &[u8]) -> (String, String) {
    let degenerate = || ("0".to_string(), "1".to_string());
    let Ok(text) = std::str::from_utf8(input) else {
        return degenerate();
    };
    let Some((m, n)) = parse_pair(text) else {
        return degenerate();
    };
    match build_instance(&m, n) {
        Ok(inst) => {
            let d = &inst.alphabet.doubled;
            (inst.e_l.plus(&inst.e_r).render(d), inst.e_r.render(d))
        }
        Err(_) => degenerate(),
    }
}

fn witness_of_unbounded_star(e: &Term, x: &CommutableSet, bound: usize) -> Option<TraceWord> {
    let right = x.side_set(Side::Right);
    match e.kind() {
        Kind::Zero | Kind::One | Kind::Sym(_) => None,
        Kind::Plus(ts) | Kind::Times(ts) => ts
            .iter()
            .find_map(|t| witness_of_unbounded_star(t, x, bound)),
        Kind::Star(b) => language_upto(&restrict(b, &right), bound.max(1), x)
            .into_iter()
            .find(|w| !w.is_empty())
            .or_else(|| witness_of_unbounded_star(b, x, bound)),
    }
}

/// Checks the conditions making `e` a representable relation on `l`, up to
/// the bound: both projections inside `l`, a finite automaton, a fanout
/// certificate and prefix-freeness of `l`.
pub fn check_representable(
    e: &Term,
    l: &Term,
    bound: usize,
    x: &CommutableSet,
) -> Vec<CheckReport> {
    let params = [("bound", bound.to_string())];
    let words = language_upto(e, bound, x);
    let base = operands(x).ok();
    let projection = |side: Side| {
        let words = &words;
        move || -> Result<(), String> {
            let base = base.ok_or("the alphabet is not a doubled alphabet")?;
            for w in words {
                let p = w.project(side, x).map_err(|e| e.to_string())?;
                if !member(&p, l, base) {
                    return Err(p.render(base));
                }
            }
            Ok(())
        }
    };
    let mut out = vec![
        CheckReport::run("projection_left", &params, projection(Side::Left)),
        CheckReport::run("projection_right", &params, projection(Side::Right)),
    ];
    let mut states = None;
    out.push(CheckReport::run("finite_state", &params, || {
        let aut = build_automaton(e, x).map_err(|e| e.to_string())?;
        states = Some(aut.len());
        Ok(())
    }));
    if let Some(n) = states {
        let last = out.pop().expect("just pushed").with_param("states", n);
        out.push(last);
    }
    let mut k = None;
    out.push(CheckReport::run(
        "bounded_output",
        &params,
        || match fanout_certificate(e, x) {
            Ok(cert) => {
                k = Some(cert.k);
                Ok(())
            }
            Err(DerivError::UnboundedOutput) => Err(witness_of_unbounded_star(e, x, bound)
                .map_or_else(|| "unbounded output".to_string(), |w| w.render(x))),
            Err(err) => Err(err.to_string()),
        },
    ));
    if let Some(k) = k {
        let last = out.pop().expect("just pushed").with_param("k", k);
        out.push(last);
    }
    out.push(CheckReport::run("prefix_free", &params, || {
        let base = base.ok_or("the alphabet is not a doubled alphabet")?;
        let lang: Vec<TraceWord> = language_upto(l, bound, base).into_iter().collect();
        for s1 in &lang {
            for s2 in &lang {
                if s1 != s2 && s1.is_prefix(s2, base).map_err(|e| e.to_string())? {
                    return Err(format!("{} < {}", s1.render(base), s2.render(base)));
                }
            }
        }
        Ok(())
    }));
    out
}

/// Checks `Λ_r e ≤ Λ·Next_e(Λ)_r + Σ*Σ^≠ρ` on words up to the bound.
pub fn step_inequality_check(
    e: &Term,
    lambda: &Language,
    cert: &FanoutCertificate,
    rho: &Term,
    bound: usize,
    x: &CommutableSet,
) -> CheckReport {
    let params = [
        ("bound", bound.to_string()),
        ("lambda", lambda.len().to_string()),
    ];
    CheckReport::run("step_inequality", &params, || {
        let next = next_set(e, lambda, cert, x);
        let lhs = side_words(lambda, Side::Right, x).times(e);
        let mismatch = Term::product([
            diagonal_star(x).map_err(|e| e.to_string())?,
            sigma_neq(x).map_err(|e| e.to_string())?,
            rho.clone(),
        ]);
        let rhs = doubled_words(lambda, x)
            .times(&side_words(&next, Side::Right, x))
            .plus(&mismatch);
        inclusion(&lhs, &rhs, bound, x)
    })
}

/// Checks `Λ_r e* ≤ Σ*Next^{<n}(Λ)_r + Σ*Next^n(Λ)_r e* + Σ*Σ^≠ρ` on words up
/// to the bound, with `ρ` the starred residue of `e`.
pub fn iterated_step_check(
    e: &Term,
    lambda: &Language,
    n: usize,
    cert: &FanoutCertificate,
    bound: usize,
    x: &CommutableSet,
) -> CheckReport {
    let params = [
        ("bound", bound.to_string()),
        ("iterations", n.to_string()),
        ("lambda", lambda.len().to_string()),
    ];
    CheckReport::run("iterated_step_inequality", &params, || {
        let rho = residue_term(e, x).map_err(|e| e.to_string())?.starred;
        let dstar = diagonal_star(x).map_err(|e| e.to_string())?;
        let mut earlier = Language::new();
        let mut current = lambda.clone();
        for _ in 0..n {
            earlier.extend(current.iter().cloned());
            current = next_set(e, &current, cert, x);
        }
        let lhs = side_words(lambda, Side::Right, x).times(&e.star());
        let rhs = Term::sum([
            dstar.times(&side_words(&earlier, Side::Right, x)),
            Term::product([
                dstar.clone(),
                side_words(&current, Side::Right, x),
                e.star(),
            ]),
            Term::product([dstar, sigma_neq(x).map_err(|e| e.to_string())?, rho]),
        ]);
        inclusion(&lhs, &rhs, bound, x)
    })
}

fn inclusion(lhs: &Term, rhs: &Term, bound: usize, x: &CommutableSet) -> Result<(), String> {
    let outcome = bounded_inclusion(lhs, rhs, x, &SearchOptions::new(bound).balanced())
        .map_err(|e| e.to_string())?;
    match outcome.witness {
        Some(w) => Err(w.render(x)),
        None => Ok(()),
    }
}

/// `Next^i({s})` for `i = 0, 1, ...` until it is empty or `limit` sets have
/// been produced.
pub fn next_replay(
    inst: &ReductionInstance,
    cert: &FanoutCertificate,
    limit: usize,
) -> Result<Vec<Language>, ReductionError> {
    let s = config_word(&inst.machine.initial(inst.input), &inst.alphabet)?;
    let mut sets = vec![Language::from([s])];
    while sets.len() < limit {
        let next = next_set(
            &inst.r_m,
            sets.last().expect("nonempty"),
            cert,
            &inst.alphabet.doubled,
        );
        let done = next.is_empty();
        sets.push(next);
        if done {
            break;
        }
    }
    Ok(sets)
}

/// `check_representable(R_M, T_M, bound)` for a machine.
pub fn check_machine_representable(m: &Machine, bound: usize) -> Vec<CheckReport> {
    let alph = MachineAlphabet::new(m);
    let r_m = encode_machine(m, &alph);
    check_representable(&r_m, &t_m(&alph), bound, &alph.doubled)
}

/// A shortest word of `e`, if any, rendered; used in reports.
pub fn sample_word(e: &Term, x: &CommutableSet) -> Option<String> {
    find_word(e, x).map(|w| w.render(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Verdict;
    use crate::terms::parse_term;
    use crate::traces::words_upto;
    use std::sync::Arc;

    fn doubled(names: &[&str]) -> CommutableSet {
        CommutableSet::double(Arc::new(CommutableSet::discrete(names).unwrap()))
    }

    #[test]
    fn sigma_neq_counts() {
        let m = Machine::parity();
        let inst = build_instance(&m, 0).unwrap();
        let k = inst.alphabet.sigma.len();
        assert_eq!(inst.sigma_neq.summands().len(), k * (k - 1));
    }

    #[test]
    fn parity_instance_shape() {
        let m = Machine::parity();
        let inst = build_instance(&m, 0).unwrap();
        let d = &inst.alphabet.doubled;
        let expected = parse_term("q0_r", d).unwrap().times(&inst.r_m.star());
        assert_eq!(inst.e_l, expected);
        let again = build_instance(&m, 0).unwrap();
        assert_eq!(inst.render(), again.render());
        assert!(inst
            .render()
            .lines()
            .map(|l| l.split(' ').next().unwrap())
            .eq(["E_L", "E_R", "RHO", "E_R_SOUND", "SIGMA_NEQ"]));
    }

    #[test]
    fn residues() {
        let d = doubled(&["a"]);
        let e = parse_term("a_l a_r", &d).unwrap();
        let r = residue_term(&e, &d).unwrap();
        for s in ["1", "a_r", "a_l a_r"] {
            let t = parse_term(s, &d).unwrap();
            assert!(r.rho_e.summands().contains(&t), "{s}");
        }
        let r = residue_term(&Term::zero(), &d).unwrap();
        assert_eq!(r.rho_e, Term::one());
        assert!(r.rho_e.nullable());
    }

    #[test]
    fn residue_is_inside_the_full_star() {
        let inst = build_instance(&Machine::parity(), 1).unwrap();
        let d = &inst.alphabet.doubled;
        let all: Language = words_upto(d, 3).into_iter().collect();
        assert!(language_upto(&inst.rho, 3, d).is_subset(&all));
        assert_eq!(language_upto(&inst.rho, 3, d), all);
    }

    #[test]
    fn representability_checks() {
        let reports = check_machine_representable(&Machine::parity(), 6);
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");

        let d = doubled(&["a", "b"]);
        let base = d.left().unwrap().clone();
        let t = parse_term("a", &base).unwrap();
        let reports = check_representable(&parse_term("a_r*", &d).unwrap(), &t, 4, &d);
        let bo = reports.iter().find(|r| r.name == "bounded_output").unwrap();
        assert_eq!(bo.verdict, Verdict::Fail);
        assert_eq!(bo.counterexample.as_deref(), Some("a_r"));

        let reports = check_representable(&parse_term("a_l b_r", &d).unwrap(), &t, 4, &d);
        let pr = reports
            .iter()
            .find(|r| r.name == "projection_right")
            .unwrap();
        assert_eq!(pr.counterexample.as_deref(), Some("b"));
        let pl = reports
            .iter()
            .find(|r| r.name == "projection_left")
            .unwrap();
        assert!(pl.passed());

        let not_free = parse_term("a + a b", &base).unwrap();
        let reports = check_representable(&parse_term("a_l a_r", &d).unwrap(), &not_free, 4, &d);
        let pf = reports.iter().find(|r| r.name == "prefix_free").unwrap();
        assert_eq!(pf.counterexample.as_deref(), Some("a < a b"));
    }

    #[test]
    fn step_inequalities() {
        let m = Machine::parity();
        let inst = build_instance(&m, 2).unwrap();
        let d = &inst.alphabet.doubled;
        let cert = fanout_certificate(&inst.r_m, d).unwrap();
        let rho = residue_term(&inst.r_m, d).unwrap().single;
        let s = config_word(&m.initial(2), &inst.alphabet).unwrap();
        let lambda = Language::from([s]);
        assert!(step_inequality_check(&inst.r_m, &lambda, &cert, &rho, 12, d).passed());
        assert!(step_inequality_check(&inst.r_m, &Language::new(), &cert, &rho, 12, d).passed());
        for n in 0..=3 {
            let r = iterated_step_check(&inst.r_m, &lambda, n, &cert, 12, d);
            assert!(r.passed(), "{r}");
        }

        // a faulty residue: the mismatched word b_r a_l b_r is not absorbed
        let d2 = doubled(&["a", "b"]);
        let base = d2.left().unwrap().clone();
        let e = parse_term("a_l b_r", &d2).unwrap();
        let cert = fanout_certificate(&e, &d2).unwrap();
        let lambda = Language::from([TraceWord::parse("b", &base).unwrap()]);
        let r = step_inequality_check(&e, &lambda, &cert, &Term::zero(), 4, &d2);
        assert_eq!(r.verdict, Verdict::Fail);
        let w = TraceWord::parse(r.counterexample.as_deref().unwrap(), &d2).unwrap();
        assert_eq!(w, TraceWord::parse("a_l b_r b_r", &d2).unwrap());
        let good = residue_term(&e, &d2).unwrap().single;
        assert!(step_inequality_check(&e, &lambda, &cert, &good, 4, &d2).passed());
    }

    #[test]
    fn eta_degenerate_and_regular() {
        assert_eq!(eta(b"not a machine"), ("0".to_string(), "1".to_string()));
        assert_eq!(eta(&[0xff, 0xfe]), ("0".to_string(), "1".to_string()));
        let text = format!("{}input 2\n", Machine::parity().render());
        let (both, right) = eta(text.as_bytes());
        let inst = build_instance(&Machine::parity(), 2).unwrap();
        let d = &inst.alphabet.doubled;
        assert_eq!(right, inst.e_r.render(d));
        assert_eq!(both, inst.e_l.plus(&inst.e_r).render(d));
        assert_eq!(eta(text.as_bytes()), (both, right));
        let missing_input = Machine::parity().render();
        assert_eq!(
            eta(missing_input.as_bytes()),
            ("0".to_string(), "1".to_string())
        );
    }

    #[test]
    fn halting_machine_instance() {
        let m = Machine::parse("machine h\nstart q\nq: halt 1\n").unwrap();
        let inst = build_instance(&m, 0).unwrap();
        let cert = fanout_certificate(&inst.r_m, &inst.alphabet.doubled).unwrap();
        let sets = next_replay(&inst, &cert, 10).unwrap();
        let c1 = TraceWord::parse("c1", &inst.alphabet.sigma).unwrap();
        assert_eq!(sets.len(), 3);
        assert_eq!(sets[1], Language::from([c1]));
        assert!(sets[2].is_empty());
    }
}
