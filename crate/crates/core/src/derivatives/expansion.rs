//! The expansion derivative of derivable terms and the automata it generates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use super::DerivError;
use crate::alphabet::{CommutableSet, Symbol};
use crate::terms::{Kind, Language, Term};
use crate::traces::TraceWord;

pub const DEFAULT_STATE_CAP: usize = 10_000;

/// Fails when some starred subterm accepts the empty word.
pub fn check_derivable(e: &Term) -> Result<(), DerivError> {
    match e.kind() {
        Kind::Zero | Kind::One | Kind::Sym(_) => Ok(()),
        Kind::Plus(ts) | Kind::Times(ts) => ts.iter().try_for_each(check_derivable),
        Kind::Star(b) => {
            if b.nullable() {
                Err(DerivError::NonDerivableStar)
            } else {
                check_derivable(b)
            }
        }
    }
}

fn derive_unchecked(e: &Term, x: Symbol) -> Term {
    match e.kind() {
        Kind::Zero | Kind::One => Term::zero(),
        Kind::Sym(s) => {
            if *s == x {
                Term::one()
            } else {
                Term::zero()
            }
        }
        Kind::Plus(ts) => Term::sum(
            ts.iter()
                .map(|t| derive_unchecked(t, x))
                .collect::<Vec<_>>(),
        ),
        Kind::Times(fs) => {
            let mut summands = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let d = derive_unchecked(f, x);
                if !d.is_zero() {
                    summands.push(Term::product(
                        std::iter::once(d)
                            .chain(fs[i + 1..].iter().cloned())
                            .collect::<Vec<_>>(),
                    ));
                }
                if !f.nullable() {
                    break;
                }
            }
            Term::sum(summands)
        }
        Kind::Star(b) => derive_unchecked(b, x).times(e),
    }
}

/// `δ_x(e)` with `e = [e]₀ + Σ_x x·δ_x(e)`.
pub fn exp_derivative(e: &Term, x: Symbol) -> Result<Term, DerivError> {
    check_derivable(e)?;
    Ok(derive_unchecked(e, x))
}

/// The automaton generated by a derivable term: its base states are closed
/// under taking summands of derivatives.
#[derive(Clone, Debug)]
pub struct Automaton {
    states: Vec<Term>,
    index: HashMap<Term, usize>,
    delta: BTreeMap<(usize, Symbol), Vec<usize>>,
    alphabet_len: usize,
}

impl Automaton {
    /// Base states in discovery order; the root term is state 0 and `1` is
    /// state 1 unless the root is `1` itself.
    pub fn states(&self) -> &[Term] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn root(&self) -> &Term {
        &self.states[0]
    }

    /// Base states whose sum is `δ_x(state)`.
    pub fn delta(&self, state: usize, x: Symbol) -> &[usize] {
        self.delta.get(&(state, x)).map_or(&[], Vec::as_slice)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Symbol, &[usize])> {
        self.delta.iter().map(|(&(q, x), ts)| (q, x, ts.as_slice()))
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    /// The sum of all base states.
    pub fn greatest(&self) -> Term {
        Term::sum(self.states.to_vec())
    }

    /// Whether `t` is a sum of base states.
    pub fn is_state_sum(&self, t: &Term) -> bool {
        t.is_zero()
            || self.index.contains_key(t)
            || t.summands().iter().all(|s| self.index.contains_key(s))
    }

    /// One base state per line, then `state --x--> {states}` lines.
    pub fn dump(&self, x: &CommutableSet) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            let _ = writeln!(out, "s{i} = {}", s.render(x));
        }
        for ((q, sym), targets) in &self.delta {
            let ts: Vec<String> = targets.iter().map(|t| format!("s{t}")).collect();
            let _ = writeln!(out, "s{q} --{}--> {{{}}}", x.name(*sym), ts.join(", "));
        }
        out
    }
}

pub fn build_automaton(e: &Term, x: &CommutableSet) -> Result<Automaton, DerivError> {
    build_automaton_with_cap(e, x, DEFAULT_STATE_CAP)
}

pub fn build_automaton_with_cap(
    e: &Term,
    x: &CommutableSet,
    cap: usize,
) -> Result<Automaton, DerivError> {
    check_derivable(e)?;
    let mut aut = Automaton {
        states: Vec::new(),
        index: HashMap::new(),
        delta: BTreeMap::new(),
        alphabet_len: x.len(),
    };
    let mut queue = VecDeque::new();
    let add =
        |t: Term, aut: &mut Automaton, queue: &mut VecDeque<usize>| -> Result<usize, DerivError> {
            if let Some(&i) = aut.index.get(&t) {
                return Ok(i);
            }
            if aut.states.len() >= cap {
                return Err(DerivError::StateExplosion(cap));
            }
            let i = aut.states.len();
            aut.index.insert(t.clone(), i);
            aut.states.push(t);
            queue.push_back(i);
            Ok(i)
        };
    add(e.clone(), &mut aut, &mut queue)?;
    add(Term::one(), &mut aut, &mut queue)?;
    while let Some(q) = queue.pop_front() {
        let state = aut.states[q].clone();
        for sym in x.symbols() {
            let d = derive_unchecked(&state, sym);
            if d.is_zero() {
                continue;
            }
            let mut targets: Vec<usize> = Vec::new();
            for s in d.summands() {
                targets.push(add(s.clone(), &mut aut, &mut queue)?);
            }
            targets.sort_unstable();
            targets.dedup();
            aut.delta.insert((q, sym), targets);
        }
    }
    Ok(aut)
}

/// One frontier entry of an expansion: the word `s` of length `k` and the
/// base states whose sum is `e_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierEntry {
    pub word: TraceWord,
    pub states: Vec<usize>,
    pub term: Term,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub short: Language,
    pub frontier: Vec<FrontierEntry>,
    pub automaton: Automaton,
}

impl Expansion {
    /// `Σ short + Σ s·e_s`.
    pub fn recombine(&self) -> Term {
        let short = self.short.iter().map(Term::word);
        let long = self
            .frontier
            .iter()
            .map(|f| Term::word(&f.word).times(&f.term));
        Term::sum(short.chain(long).collect::<Vec<_>>())
    }
}

/// Unfolds `e` to depth `k`: words shorter than `k` accepted along the way
/// and, for every word `s` of length `k`, the remaining state sum `e_s`.
pub fn expand(e: &Term, k: usize, x: &CommutableSet) -> Result<Expansion, DerivError> {
    let automaton = build_automaton(e, x)?;
    let mut short = Language::new();
    let mut layer: BTreeMap<TraceWord, BTreeSet<usize>> = BTreeMap::new();
    if !e.is_zero() {
        layer.insert(TraceWord::empty(), BTreeSet::from([0]));
    }
    for _ in 0..k {
        let mut next: BTreeMap<TraceWord, BTreeSet<usize>> = BTreeMap::new();
        for (w, states) in &layer {
            if states.iter().any(|&q| automaton.states[q].nullable()) {
                short.insert(w.clone());
            }
            for sym in x.symbols() {
                let targets: Vec<usize> = states
                    .iter()
                    .flat_map(|&q| automaton.delta(q, sym).iter().copied())
                    .collect();
                if !targets.is_empty() {
                    next.entry(w.concat(&TraceWord::singleton(sym), x))
                        .or_default()
                        .extend(targets);
                }
            }
        }
        layer = next;
    }
    let frontier = layer
        .into_iter()
        .filter_map(|(word, states)| {
            let states: Vec<usize> = states
                .into_iter()
                .filter(|&q| !automaton.states[q].is_zero())
                .collect();
            if states.is_empty() {
                return None;
            }
            let term = Term::sum(
                states
                    .iter()
                    .map(|&q| automaton.states[q].clone())
                    .collect::<Vec<_>>(),
            );
            Some(FrontierEntry { word, states, term })
        })
        .collect();
    Ok(Expansion {
        short,
        frontier,
        automaton,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{language_upto, parse_term};

    fn set() -> CommutableSet {
        CommutableSet::discrete(&["a", "b"]).unwrap()
    }

    #[test]
    fn derivative_table() {
        let x = set();
        let a = x.symbol("a").unwrap();
        let p = |s| parse_term(s, &x).unwrap();
        assert_eq!(exp_derivative(&p("a"), a).unwrap(), Term::one());
        assert_eq!(exp_derivative(&p("a b*"), a).unwrap(), p("b*"));
        assert_eq!(exp_derivative(&p("(a b)*"), a).unwrap(), p("b (a b)*"));
        assert_eq!(exp_derivative(&p("b"), a).unwrap(), Term::zero());
        assert_eq!(
            exp_derivative(&p("(1 + a)*"), a).unwrap_err(),
            DerivError::NonDerivableStar
        );
    }

    #[test]
    fn expansion_identity_one_step() {
        let x = set();
        for text in ["(a b)* a", "a* b + b (a + b)*", "(a b* b)*"] {
            let e = parse_term(text, &x).unwrap();
            let rebuilt = Term::sum(
                std::iter::once(e.empty_word())
                    .chain(
                        x.symbols()
                            .map(|s| Term::sym(s).times(&exp_derivative(&e, s).unwrap())),
                    )
                    .collect::<Vec<_>>(),
            );
            assert_eq!(language_upto(&rebuilt, 6, &x), language_upto(&e, 6, &x));
        }
    }

    #[test]
    fn automata() {
        let x = CommutableSet::discrete(&["a"]).unwrap();
        let e = parse_term("a*", &x).unwrap();
        let aut = build_automaton(&e, &x).unwrap();
        assert!(aut.index_of(&e).is_some());
        assert!(aut.index_of(&Term::one()).is_some());
        let zero = build_automaton(&Term::zero(), &x).unwrap();
        assert_eq!(zero.states(), &[Term::zero(), Term::one()]);
        let big = parse_term("(a a)* a + a* a*", &x).unwrap();
        assert_eq!(
            build_automaton_with_cap(&big, &x, 2).unwrap_err(),
            DerivError::StateExplosion(2)
        );
    }

    #[test]
    fn automaton_closure() {
        let x = set();
        let e = parse_term("(a b + b)* a (b a)*", &x).unwrap();
        let aut = build_automaton(&e, &x).unwrap();
        for (q, sym, targets) in aut.transitions() {
            assert!(targets.iter().all(|&t| t < aut.len()));
            let sum = Term::sum(
                targets
                    .iter()
                    .map(|&t| aut.states()[t].clone())
                    .collect::<Vec<_>>(),
            );
            assert_eq!(sum, derive_unchecked(&aut.states()[q], sym));
        }
        let dump = aut.dump(&x);
        assert!(dump.starts_with("s0 = "));
        assert!(dump.contains("--a-->"));
    }

    #[test]
    fn expansion_examples() {
        let x = set();
        let p = |s| parse_term(s, &x).unwrap();
        let w = |s| TraceWord::parse(s, &x).unwrap();

        let ex = expand(&p("a"), 0, &x).unwrap();
        assert!(ex.short.is_empty());
        assert_eq!(ex.frontier.len(), 1);
        assert_eq!(
            (ex.frontier[0].word.clone(), ex.frontier[0].term.clone()),
            (w("1"), p("a"))
        );

        let ex = expand(&p("a + a b"), 1, &x).unwrap();
        assert!(ex.short.is_empty());
        assert_eq!(ex.frontier.len(), 1);
        assert_eq!(ex.frontier[0].word, w("a"));
        assert_eq!(ex.frontier[0].term, p("1 + b"));
        assert_eq!(
            language_upto(&ex.recombine(), 3, &x),
            language_upto(&p("a + a b"), 3, &x)
        );

        let ex = expand(&p("a b"), 2, &x).unwrap();
        assert!(ex.short.is_empty());
        assert_eq!(ex.frontier.len(), 1);
        assert_eq!(
            (ex.frontier[0].word.clone(), ex.frontier[0].term.clone()),
            (w("a b"), Term::one())
        );
    }
}
