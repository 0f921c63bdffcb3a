//! The algebra on `ℕ + {⊥, ⊤}` that satisfies left unfolding but not the
//! induction rules.

use std::fmt;

use crate::alphabet::Symbol;
use crate::terms::{Kind, Term};

use super::CheckReport;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum BotTopNat {
    Bot,
    Nat(u64),
    Top,
}

use BotTopNat::{Bot, Nat, Top};

impl BotTopNat {
    pub fn zero() -> Self {
        Bot
    }

    pub fn one() -> Self {
        Nat(0)
    }

    pub fn plus(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn times(self, other: Self) -> Self {
        match (self, other) {
            (Bot, _) | (_, Bot) => Bot,
            (Top, _) | (_, Top) => Top,
            (Nat(m), Nat(n)) => m.checked_add(n).map_or(Top, Nat),
        }
    }

    pub fn star(self) -> Self {
        match self {
            Bot => Nat(0),
            _ => Top,
        }
    }

    /// `⊥, 0, 1, ..., n, ⊤`.
    pub fn sample(n: u64) -> Vec<Self> {
        std::iter::once(Bot)
            .chain((0..=n).map(Nat))
            .chain(std::iter::once(Top))
            .collect()
    }
}

impl fmt::Display for BotTopNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bot => f.write_str("⊥"),
            Nat(n) => write!(f, "{n}"),
            Top => f.write_str("⊤"),
        }
    }
}

pub fn model_eval(e: &Term, assignment: &dyn Fn(Symbol) -> BotTopNat) -> BotTopNat {
    match e.kind() {
        Kind::Zero => BotTopNat::zero(),
        Kind::One => BotTopNat::one(),
        Kind::Sym(s) => assignment(*s),
        Kind::Plus(ts) => ts
            .iter()
            .fold(Bot, |acc, t| acc.plus(model_eval(t, assignment))),
        Kind::Times(ts) => ts
            .iter()
            .fold(Nat(0), |acc, t| acc.times(model_eval(t, assignment))),
        Kind::Star(b) => model_eval(b, assignment).star(),
    }
}

type Axiom = (&'static str, fn(BotTopNat, BotTopNat, BotTopNat) -> bool);

/// The pre-Kleene algebra equations, each over up to three variables.
pub const AXIOMS: [Axiom; 9] = [
    ("unit", |x, _, _| {
        BotTopNat::one().times(x) == x && x.times(BotTopNat::one()) == x
    }),
    ("annihilation", |x, _, _| {
        BotTopNat::zero().times(x) == Bot && x.times(BotTopNat::zero()) == Bot
    }),
    ("times_assoc", |x, y, z| {
        x.times(y.times(z)) == x.times(y).times(z)
    }),
    ("plus_unit", |x, _, _| BotTopNat::zero().plus(x) == x),
    ("plus_comm", |x, y, _| x.plus(y) == y.plus(x)),
    ("plus_assoc", |x, y, z| {
        x.plus(y.plus(z)) == x.plus(y).plus(z)
    }),
    ("left_distrib", |x, y, z| {
        x.times(y.plus(z)) == x.times(y).plus(x.times(z))
    }),
    ("right_distrib", |x, y, z| {
        x.plus(y).times(z) == x.times(z).plus(y.times(z))
    }),
    ("left_unfolding", |x, _, _| {
        x.star() == BotTopNat::one().plus(x.times(x.star()))
    }),
];

/// Checks every axiom on all assignments from the sample, then that
/// `(⊥*)* ≠ ⊥*`.
pub fn check_preka_axioms(domain: &[BotTopNat]) -> CheckReport {
    let params = [("sample", domain.len().to_string())];
    CheckReport::run("preka_axioms", &params, || {
        for (name, holds) in AXIOMS {
            for &x in domain {
                for &y in domain {
                    for &z in domain {
                        if !holds(x, y, z) {
                            return Err(format!("{name} at x={x}, y={y}, z={z}"));
                        }
                    }
                }
            }
        }
        let once = Bot.star();
        let twice = once.star();
        if once != Nat(0) || twice != Top {
            return Err(format!("⊥* = {once}, (⊥*)* = {twice}"));
        }
        Ok(())
    })
}
