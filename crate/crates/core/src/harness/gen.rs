//! Random terms and the alphabets they range over.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use crate::alphabet::{CommutableSet, Mode, Symbol};
use crate::terms::Term;

/// A discrete, a commutative, a one-pair and a doubled alphabet.
pub fn corpus_alphabets() -> Vec<(&'static str, Arc<CommutableSet>)> {
    vec![
        (
            "discrete",
            Arc::new(CommutableSet::discrete(&["a", "b", "c"]).expect("valid")),
        ),
        (
            "commutative",
            Arc::new(CommutableSet::commutative(&["a", "b"]).expect("valid")),
        ),
        (
            "one_pair",
            Arc::new(
                CommutableSet::new(&["a", "b", "c"], Mode::Pairs(&[("a", "b")])).expect("valid"),
            ),
        ),
        (
            "doubled",
            Arc::new(CommutableSet::double(Arc::new(
                CommutableSet::discrete(&["a", "b"]).expect("valid"),
            ))),
        ),
    ]
}

/// A random term with exactly `nodes` syntax nodes.
pub fn random_term_sized(rng: &mut StdRng, x: &CommutableSet, nodes: usize) -> Term {
    if nodes <= 1 {
        return match rng.gen_range(0..20) {
            0 => Term::zero(),
            1 => Term::one(),
            _ => Term::sym(Symbol::new(rng.gen_range(0..x.len()))),
        };
    }
    if nodes == 2 || rng.gen_range(0..5) == 0 {
        return random_term_sized(rng, x, nodes - 1).star();
    }
    let left = rng.gen_range(1..nodes - 1);
    let a = random_term_sized(rng, x, left);
    let b = random_term_sized(rng, x, nodes - 1 - left);
    if rng.gen_bool(0.5) {
        a.plus(&b)
    } else {
        a.times(&b)
    }
}

/// A random term with at most `max_nodes` syntax nodes, and at least a third
/// of that before simplification.
pub fn random_term(rng: &mut StdRng, x: &CommutableSet, max_nodes: usize) -> Term {
    let max_nodes = max_nodes.max(1);
    let n = rng.gen_range((max_nodes / 3).max(1)..=max_nodes);
    random_term_sized(rng, x, n)
}
