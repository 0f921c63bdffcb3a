//! Configuration words and the term encoding `R_M` of a machine.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Config, Instruction, Machine, MachineError, Register};
use crate::alphabet::{CommutableSet, Side, Symbol};
use crate::derivatives::{restrict, word_derivative, FanoutCertificate};
use crate::terms::{language_upto, member, Language, Term};
use crate::traces::TraceWord;

/// Symbols of `Σ_M` besides the states.
pub const RESERVED: [&str; 4] = ["a", "b", "c0", "c1"];

/// `Σ_M = Q_M + {a, b, c0, c1}` (discrete) and its doubled alphabet.
#[derive(Clone, Debug)]
pub struct MachineAlphabet {
    pub sigma: Arc<CommutableSet>,
    pub doubled: Arc<CommutableSet>,
    states: usize,
}

impl MachineAlphabet {
    pub fn new(m: &Machine) -> Self {
        let names: Vec<&str> = m
            .states()
            .iter()
            .map(String::as_str)
            .chain(RESERVED)
            .collect();
        let sigma = Arc::new(CommutableSet::discrete(&names).expect("machine names are validated"));
        let doubled = Arc::new(CommutableSet::double(sigma.clone()));
        MachineAlphabet {
            sigma,
            doubled,
            states: m.states().len(),
        }
    }

    pub fn state(&self, q: usize) -> Symbol {
        Symbol::new(q)
    }

    pub fn a(&self) -> Symbol {
        Symbol::new(self.states)
    }

    pub fn b(&self) -> Symbol {
        Symbol::new(self.states + 1)
    }

    pub fn c(&self, x: u8) -> Symbol {
        Symbol::new(self.states + 2 + x as usize)
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    /// `s_l` as a term over the doubled alphabet.
    pub fn l(&self, s: Symbol) -> Term {
        Term::sym(self.doubled.embed(Side::Left, s).expect("symbol of Σ_M"))
    }

    /// `s_r` as a term over the doubled alphabet.
    pub fn r(&self, s: Symbol) -> Term {
        Term::sym(self.doubled.embed(Side::Right, s).expect("symbol of Σ_M"))
    }

    /// `s_l s_r`: a symbol of `Σ_M` read in the doubled alphabet.
    pub fn lr(&self, s: Symbol) -> Term {
        self.l(s).times(&self.r(s))
    }

    /// The sum of all states.
    pub fn states_sum(&self) -> Term {
        Term::sum(
            (0..self.states)
                .map(|q| Term::sym(self.state(q)))
                .collect::<Vec<_>>(),
        )
    }

    /// A term over `Σ_M` read on one side of the doubled alphabet.
    pub fn on_side(&self, e: &Term, side: Side) -> Term {
        e.substitute(&mut |s| Term::sym(self.doubled.embed(side, s).expect("symbol of Σ_M")))
    }

    /// A term over `Σ_M` read in the doubled alphabet, `x ↦ x_l x_r`.
    pub fn doubled_reading(&self, e: &Term) -> Term {
        e.substitute(&mut |s| self.lr(s))
    }
}

fn count(n: &BigUint) -> Result<usize, MachineError> {
    n.to_usize().ok_or(MachineError::CounterTooLarge)
}

/// `a^n b^m q` for running configurations, `c_x` for halted ones.
pub fn config_word(c: &Config, alph: &MachineAlphabet) -> Result<TraceWord, MachineError> {
    let letters = match c {
        Config::Halted(x) => vec![alph.c(*x)],
        Config::Running { n, m, q } => {
            let (n, m) = (count(n)?, count(m)?);
            let mut v = Vec::with_capacity(n + m + 1);
            v.extend(std::iter::repeat_n(alph.a(), n));
            v.extend(std::iter::repeat_n(alph.b(), m));
            v.push(alph.state(*q));
            v
        }
    };
    Ok(TraceWord::normalize(&letters, &alph.sigma).expect("symbols of Σ_M"))
}

/// The configuration whose word is `w`, if any.
pub fn decode_config(w: &TraceWord, alph: &MachineAlphabet) -> Option<Config> {
    let letters = w.letters();
    if let [c] = letters {
        for x in 0..2 {
            if *c == alph.c(x) {
                return Some(Config::Halted(x));
            }
        }
    }
    let (&q, body) = letters.split_last()?;
    if q.index() >= alph.state_count() {
        return None;
    }
    let n = body.iter().take_while(|&&s| s == alph.a()).count();
    let m = body[n..].iter().take_while(|&&s| s == alph.b()).count();
    (n + m == body.len()).then(|| Config::Running {
        n: BigUint::from(n),
        m: BigUint::from(m),
        q: q.index(),
    })
}

/// `⟦i⟧` over the doubled alphabet; the stars `a*`, `b*` are read doubled.
/// `Halt(x)` also consumes the counters, `a_l* b_l* (c_x)_r`, so that every
/// halting configuration steps to `c_x`.
pub fn encode_instruction(i: &Instruction, alph: &MachineAlphabet) -> Term {
    let (a, b) = (alph.a(), alph.b());
    let da = alph.lr(a).star();
    let db = alph.lr(b).star();
    let qr = |q: usize| alph.r(alph.state(q));
    match i {
        Instruction::Inc(Register::One, q) => Term::product([alph.r(a), da, db, qr(*q)]),
        Instruction::Inc(Register::Two, q) => Term::product([da, alph.r(b), db, qr(*q)]),
        Instruction::If(Register::One, q1, q2) => Term::sum([
            Term::product([db.clone(), qr(*q1)]),
            Term::product([alph.l(a), da, db, qr(*q2)]),
        ]),
        Instruction::If(Register::Two, q1, q2) => Term::sum([
            Term::product([da.clone(), qr(*q1)]),
            Term::product([da, alph.l(b), db, qr(*q2)]),
        ]),
        Instruction::Halt(x) => {
            Term::product([alph.l(a).star(), alph.l(b).star(), alph.r(alph.c(*x))])
        }
    }
}

/// `R_M = Σ_q ⟦ι(q)⟧·q_l`.
pub fn encode_machine(m: &Machine, alph: &MachineAlphabet) -> Term {
    Term::sum(
        (0..m.states().len())
            .map(|q| encode_instruction(m.instruction(q), alph).times(&alph.l(alph.state(q))))
            .collect::<Vec<_>>(),
    )
}

/// `C_M = a* b* Q_M` over `Σ_M`.
pub fn c_m(alph: &MachineAlphabet) -> Term {
    Term::product([
        Term::sym(alph.a()).star(),
        Term::sym(alph.b()).star(),
        alph.states_sum(),
    ])
}

/// `T_M = C_M + c0 + c1`.
pub fn t_m(alph: &MachineAlphabet) -> Term {
    Term::sum([c_m(alph), Term::sym(alph.c(0)), Term::sym(alph.c(1))])
}

/// `Next_e(Λ) = { s' : s_l s'_r ∈ l(e) for some s ∈ Λ }` over the direct sum
/// `x`. Candidates come from `restrict(δ_{s_l}(e), right)`, limited to
/// length `(maxlen(Λ) + 1)·k`, and each is confirmed by membership.
pub fn next_set(
    e: &Term,
    lambda: &Language,
    cert: &FanoutCertificate,
    x: &CommutableSet,
) -> Language {
    let right = x.side_set(Side::Right);
    let maxlen = lambda.iter().map(TraceWord::len).max().unwrap_or(0);
    let cap = (maxlen + 1) * cert.k;
    let mut out = Language::new();
    for s in lambda {
        let Ok(sl) = s.on_side(Side::Left, x) else {
            continue;
        };
        let tails = restrict(&word_derivative(e, &sl, x), &right);
        for t in language_upto(&tails, cap, x) {
            let Ok(s2) = t.project(Side::Right, x) else {
                continue;
            };
            let joined = TraceWord::pair_join(s, &s2, x).expect("operands of x");
            if member(&joined, e, x) {
                out.insert(s2);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivatives::fanout_certificate;
    use crate::machines::Instruction;
    use crate::terms::parse_term;

    fn machine(first: &str) -> Machine {
        Machine::parse(&format!(
            "machine t\nstart q\nq: {first}\nq1: halt 0\nq2: halt 1\n"
        ))
        .unwrap()
    }

    #[test]
    fn config_words() {
        let m = machine("halt 0");
        let alph = MachineAlphabet::new(&m);
        let w = config_word(&Config::running(2, 1, 0), &alph).unwrap();
        assert_eq!(w.render(&alph.sigma), "a a b q");
        assert_eq!(
            config_word(&Config::Halted(0), &alph)
                .unwrap()
                .render(&alph.sigma),
            "c0"
        );
        assert_eq!(
            config_word(&Config::running(0, 0, 0), &alph)
                .unwrap()
                .render(&alph.sigma),
            "q"
        );
        for c in [
            Config::running(2, 1, 0),
            Config::Halted(1),
            Config::running(0, 3, 2),
        ] {
            assert_eq!(
                decode_config(&config_word(&c, &alph).unwrap(), &alph),
                Some(c)
            );
        }
        let junk = TraceWord::parse("b a q", &alph.sigma).unwrap();
        assert_eq!(decode_config(&junk, &alph), None);
    }

    #[test]
    fn instruction_templates() {
        let m = machine("halt 0");
        let alph = MachineAlphabet::new(&m);
        let d = &alph.doubled;
        let p = |s| parse_term(s, d).unwrap();
        assert_eq!(
            encode_instruction(&Instruction::Halt(1), &alph),
            p("a_l* b_l* c1_r")
        );
        assert_eq!(
            encode_instruction(&Instruction::If(Register::Two, 1, 2), &alph),
            p("(a_l a_r)* q1_r + (a_l a_r)* b_l (b_l b_r)* q2_r")
        );
        assert_eq!(
            encode_instruction(&Instruction::Inc(Register::One, 1), &alph),
            p("a_r (a_l a_r)* (b_l b_r)* q1_r")
        );
        let single = Machine::parse("machine h\nstart q\nq: halt 0\n").unwrap();
        let alph = MachineAlphabet::new(&single);
        assert_eq!(
            encode_machine(&single, &alph),
            parse_term("a_l* b_l* c0_r q_l", &alph.doubled).unwrap()
        );
    }

    #[test]
    fn next_set_examples() {
        let m = machine("inc 1 q1");
        let alph = MachineAlphabet::new(&m);
        let rm = encode_machine(&m, &alph);
        let cert = fanout_certificate(&rm, &alph.doubled).unwrap();
        let w = |s| TraceWord::parse(s, &alph.sigma).unwrap();
        let next = next_set(&rm, &Language::from([w("a b q")]), &cert, &alph.doubled);
        assert_eq!(next, Language::from([w("a a b q1")]));
        assert!(next_set(&rm, &Language::from([w("c1")]), &cert, &alph.doubled).is_empty());

        let m = machine("if 1 q1 q2");
        let alph = MachineAlphabet::new(&m);
        let rm = encode_machine(&m, &alph);
        let cert = fanout_certificate(&rm, &alph.doubled).unwrap();
        let w = |s| TraceWord::parse(s, &alph.sigma).unwrap();
        let next = next_set(&rm, &Language::from([w("q")]), &cert, &alph.doubled);
        assert_eq!(next, Language::from([w("q1")]));
        let next = next_set(&rm, &Language::from([w("a b q2")]), &cert, &alph.doubled);
        assert_eq!(next, Language::from([w("c1")]));
    }
}
