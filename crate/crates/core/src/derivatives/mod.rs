//! Derivative calculi: the commuting-aware derivative and residue, the
//! expansion derivative with its term automata, bounded-output certificates
//! and a derivative-based bounded inclusion search.

mod comm;
mod expansion;
mod fanout;
pub mod search;

use thiserror::Error;

pub use comm::{
    comm_derivative, residue, restrict, word_derivative, word_residue, DerivativeCache,
};
pub use expansion::{
    build_automaton, build_automaton_with_cap, check_derivable, exp_derivative, expand, Automaton,
    Expansion, FrontierEntry, DEFAULT_STATE_CAP,
};
pub use fanout::{fanout_certificate, structural_fanout, FanoutCertificate, SAMPLE_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivError {
    #[error("a starred subterm accepts the empty word")]
    NonDerivableStar,
    #[error("automaton exceeds {0} base states")]
    StateExplosion(usize),
    #[error("a starred subterm has a word with right symbols only")]
    UnboundedOutput,
    #[error("the alphabet is not a direct sum")]
    NotDirectSum,
    #[error("fanout certificate refuted by the word `{0}`")]
    CertificateRefuted(String),
}
