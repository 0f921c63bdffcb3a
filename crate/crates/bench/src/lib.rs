//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use kacomm::reduction::{build_instance, ReductionInstance};
use kacomm::terms::parse_term;
use kacomm::{CommutableSet, Machine, Term};

/// `{a, b, c}` with `a` and `b` commuting.
pub fn one_pair() -> CommutableSet {
    CommutableSet::new(
        &["a", "b", "c"],
        kacomm::alphabet::Mode::Pairs(&[("a", "b")]),
    )
    .expect("valid")
}

pub fn doubled() -> CommutableSet {
    CommutableSet::double(Arc::new(
        CommutableSet::discrete(&["a", "b"]).expect("valid"),
    ))
}

/// A handful of terms exercising products, sums and nested stars.
pub fn sample_terms(x: &CommutableSet) -> Vec<Term> {
    [
        "(a b + c)* a",
        "(a + b)* c (b a)*",
        "((a c)* b + a)* (c + 1)",
        "a* b* c* (a b c)*",
    ]
    .iter()
    .map(|t| parse_term(t, x).expect("term over a, b, c"))
    .collect()
}

pub fn parity_instance(n: u64) -> ReductionInstance {
    build_instance(&Machine::parity(), n).expect("parity instance")
}
