//! The commuting-aware derivative and residue.
//!
//! For a letter `x` split the alphabet into `Y = {y ∼ x, y ≠ x}` and
//! `Z = {z ≁ x}`. Every word of `l(e)` then falls in exactly one of three
//! classes: words over `Y` only (`restrict(e, Y)`), words whose first non-`Y`
//! letter is `x` (these are `x·δ_x(e)`), and words whose first non-`Y` letter
//! lies in `Z`. The residue `ρ_x(e)` collects the first and last class.

use std::collections::HashMap;

use crate::alphabet::{CommutableSet, Symbol, SymbolSet};
use crate::terms::{Kind, Term};
use crate::traces::TraceWord;

/// `l(restrict(e, S)) = l(e) ∩ S*`: symbols outside `S` become `0`.
pub fn restrict(e: &Term, s: &SymbolSet) -> Term {
    e.substitute(&mut |c| {
        if s.contains(c) {
            Term::sym(c)
        } else {
            Term::zero()
        }
    })
}

#[derive(Default)]
struct Memo {
    restricted: HashMap<Term, Term>,
    derivative: HashMap<Term, Term>,
    blocked: HashMap<Term, Term>,
}

/// Derivatives and residues of one letter, with memo tables.
struct Deriver {
    x: Symbol,
    y: SymbolSet,
    memo: Memo,
}

#[derive(Clone, Copy)]
enum Part {
    Derivative,
    Blocked,
}

impl Deriver {
    fn new(x: Symbol, set: &CommutableSet) -> Self {
        let y = set
            .symbols()
            .filter(|&s| s != x && set.commute(s, x))
            .collect();
        Deriver {
            x,
            y,
            memo: Memo::default(),
        }
    }

    fn restricted(&mut self, e: &Term) -> Term {
        if let Some(t) = self.memo.restricted.get(e) {
            return t.clone();
        }
        let t = match e.kind() {
            Kind::Zero | Kind::One => e.clone(),
            Kind::Sym(s) => {
                if self.y.contains(*s) {
                    e.clone()
                } else {
                    Term::zero()
                }
            }
            Kind::Plus(ts) => Term::sum(ts.iter().map(|t| self.restricted(t)).collect::<Vec<_>>()),
            Kind::Times(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for f in fs {
                    let r = self.restricted(f);
                    if r.is_zero() {
                        return self.remember_restricted(e, Term::zero());
                    }
                    out.push(r);
                }
                Term::product(out)
            }
            Kind::Star(b) => self.restricted(b).star(),
        };
        self.remember_restricted(e, t)
    }

    fn remember_restricted(&mut self, e: &Term, t: Term) -> Term {
        self.memo.restricted.insert(e.clone(), t.clone());
        t
    }

    /// Shared shape of the derivative (`Part::Derivative`) and of the
    /// `Z`-blocked part of the residue (`Part::Blocked`).
    fn part(&mut self, e: &Term, part: Part) -> Term {
        let table = match part {
            Part::Derivative => &self.memo.derivative,
            Part::Blocked => &self.memo.blocked,
        };
        if let Some(t) = table.get(e) {
            return t.clone();
        }
        let t = match e.kind() {
            Kind::Zero | Kind::One => Term::zero(),
            Kind::Sym(s) => match part {
                Part::Derivative if *s == self.x => Term::one(),
                Part::Blocked if *s != self.x && !self.y.contains(*s) => e.clone(),
                _ => Term::zero(),
            },
            Kind::Plus(ts) => Term::sum(ts.iter().map(|t| self.part(t, part)).collect::<Vec<_>>()),
            Kind::Times(fs) => {
                let mut summands = Vec::new();
                let mut prefix: Vec<Term> = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    let g = self.part(f, part);
                    if !g.is_zero() {
                        let mut factors = prefix.clone();
                        factors.push(g);
                        factors.extend(fs[i + 1..].iter().cloned());
                        summands.push(Term::product(factors));
                    }
                    let r = self.restricted(f);
                    if r.is_zero() {
                        break;
                    }
                    prefix.push(r);
                }
                Term::sum(summands)
            }
            Kind::Star(b) => {
                let g = self.part(b, part);
                if g.is_zero() {
                    Term::zero()
                } else {
                    Term::product([self.restricted(b).star(), g, e.clone()])
                }
            }
        };
        let table = match part {
            Part::Derivative => &mut self.memo.derivative,
            Part::Blocked => &mut self.memo.blocked,
        };
        table.insert(e.clone(), t.clone());
        t
    }

    fn derivative(&mut self, e: &Term) -> Term {
        self.part(e, Part::Derivative)
    }

    fn residue(&mut self, e: &Term) -> Term {
        let a = self.restricted(e);
        let b = self.part(e, Part::Blocked);
        a.plus(&b)
    }
}

/// `δ_x(e)`: `l(δ_x(e)) = { s : x·s ∈ l(e) }`.
pub fn comm_derivative(e: &Term, x: Symbol, set: &CommutableSet) -> Term {
    Deriver::new(x, set).derivative(e)
}

/// `ρ_x(e)`: the words of `l(e)` that cannot be written `x·s`.
pub fn residue(e: &Term, x: Symbol, set: &CommutableSet) -> Term {
    Deriver::new(x, set).residue(e)
}

/// `δ_w(e)`, deriving by the letters of `w` from left to right.
pub fn word_derivative(e: &Term, w: &TraceWord, set: &CommutableSet) -> Term {
    let mut cache = DerivativeCache::new(set);
    cache.word_derivative(e, w)
}

/// `ρ_w(e)` with `e = ρ_w(e) + w·δ_w(e)`; built by `ρ_1 = 0` and
/// `ρ_{w x}(e) = ρ_w(e) + w·ρ_x(δ_w(e))`.
pub fn word_residue(e: &Term, w: &TraceWord, set: &CommutableSet) -> Term {
    let mut cache = DerivativeCache::new(set);
    let mut rho = Term::zero();
    let mut current = e.clone();
    let mut prefix = Vec::new();
    for &x in w.letters() {
        let step = cache.residue(&current, x);
        rho = rho.plus(&Term::product(
            prefix
                .iter()
                .map(|&s| Term::sym(s))
                .chain([step])
                .collect::<Vec<_>>(),
        ));
        current = cache.derivative(&current, x);
        prefix.push(x);
    }
    rho
}

/// Memoized derivatives over one alphabet, shared between many calls.
pub struct DerivativeCache<'a> {
    set: &'a CommutableSet,
    derivers: Vec<Option<Deriver>>,
}

impl<'a> DerivativeCache<'a> {
    pub fn new(set: &'a CommutableSet) -> Self {
        DerivativeCache {
            set,
            derivers: (0..set.len()).map(|_| None).collect(),
        }
    }

    pub fn alphabet(&self) -> &'a CommutableSet {
        self.set
    }

    fn deriver(&mut self, x: Symbol) -> &mut Deriver {
        let set = self.set;
        self.derivers[x.index()].get_or_insert_with(|| Deriver::new(x, set))
    }

    pub fn derivative(&mut self, e: &Term, x: Symbol) -> Term {
        self.deriver(x).derivative(e)
    }

    pub fn residue(&mut self, e: &Term, x: Symbol) -> Term {
        self.deriver(x).residue(e)
    }

    pub fn word_derivative(&mut self, e: &Term, w: &TraceWord) -> Term {
        let mut current = e.clone();
        for &x in w.letters() {
            if current.is_zero() {
                break;
            }
            current = self.derivative(&current, x);
        }
        current
    }

    /// Drops memo tables once they grow beyond `limit` entries in total.
    pub fn trim(&mut self, limit: usize) {
        let total: usize = self
            .derivers
            .iter()
            .flatten()
            .map(|d| d.memo.restricted.len() + d.memo.derivative.len() + d.memo.blocked.len())
            .sum();
        if total > limit {
            for d in self.derivers.iter_mut().flatten() {
                d.memo = Memo::default();
            }
        }
    }
}
