pub mod alphabet;
pub mod derivatives;
pub mod harness;
pub mod machines;
pub mod reduction;
pub mod terms;
pub mod traces;

pub use alphabet::{CommutableSet, Side, Symbol};
pub use harness::{CheckReport, Verdict};
pub use machines::Machine;
pub use terms::Term;
pub use traces::TraceWord;
