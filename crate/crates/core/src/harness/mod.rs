//! Bounded checks of the main constructions and the property suites.

mod checks;
pub mod gen;
mod model;
mod report;
pub mod selftest;

pub use checks::{
    check_language_leq, default_completeness_bound, full_star, trace_witness,
    verify_completeness_bounded, verify_soundness_witness, HarnessError,
};
pub use model::{check_preka_axioms, model_eval, BotTopNat, AXIOMS};
pub use report::{sort_reports, CheckReport, Verdict};
