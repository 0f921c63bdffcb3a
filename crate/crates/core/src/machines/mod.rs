//! Two-counter machines, their step semantics and their encoding as terms.

mod encode;
mod parse;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub use encode::{
    c_m, config_word, decode_config, encode_instruction, encode_machine, next_set, t_m,
    MachineAlphabet, RESERVED,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("state `{0}` has no instruction")]
    UndefinedState(String),
    #[error("state `{0}` is defined twice")]
    DuplicateState(String),
    #[error("`{0}` cannot name a state")]
    ReservedName(String),
    #[error("register must be 1 or 2, got {0}")]
    BadRegister(u8),
    #[error("halt output must be 0 or 1, got {0}")]
    BadOutput(u8),
    #[error("machine has no states")]
    Empty,
    #[error("counter value does not fit in memory")]
    CounterTooLarge,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Register {
    One,
    Two,
}

impl Register {
    pub fn new(r: u8) -> Result<Self, MachineError> {
        match r {
            1 => Ok(Register::One),
            2 => Ok(Register::Two),
            _ => Err(MachineError::BadRegister(r)),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Register::One => 1,
            Register::Two => 2,
        }
    }
}

/// An instruction whose state references have type `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Instruction<Q = usize> {
    Inc(Register, Q),
    /// Jump to the first state if the register is zero, otherwise decrement
    /// it and jump to the second.
    If(Register, Q, Q),
    Halt(u8),
}

impl<Q> Instruction<Q> {
    fn try_map<R, E>(self, mut f: impl FnMut(Q) -> Result<R, E>) -> Result<Instruction<R>, E> {
        Ok(match self {
            Instruction::Inc(r, q) => Instruction::Inc(r, f(q)?),
            Instruction::If(r, q1, q2) => Instruction::If(r, f(q1)?, f(q2)?),
            Instruction::Halt(x) => Instruction::Halt(x),
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Machine {
    name: String,
    states: Vec<String>,
    start: usize,
    iota: Vec<Instruction>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Config {
    Running { n: BigUint, m: BigUint, q: usize },
    Halted(u8),
}

impl Config {
    pub fn running(n: u64, m: u64, q: usize) -> Self {
        Config::Running {
            n: BigUint::from(n),
            m: BigUint::from(m),
            q,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Output(u8),
    FuelExhausted,
}

/// The result of running a machine: the outcome and every configuration
/// visited, starting with the initial one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Run {
    pub outcome: Outcome,
    pub trace: Vec<Config>,
}

impl Run {
    pub fn steps(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn last(&self) -> &Config {
        self.trace
            .last()
            .expect("a run has an initial configuration")
    }
}

pub const DEFAULT_FUEL: usize = 100_000;

impl Machine {
    /// Builds a machine from named instructions; states are numbered in the
    /// order given.
    pub fn new(
        name: &str,
        start: &str,
        entries: Vec<(String, Instruction<String>)>,
    ) -> Result<Self, MachineError> {
        if entries.is_empty() {
            return Err(MachineError::Empty);
        }
        let mut states: Vec<String> = Vec::new();
        for (q, _) in &entries {
            if RESERVED.contains(&q.as_str()) {
                return Err(MachineError::ReservedName(q.clone()));
            }
            let valid = q.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                && q.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !q.ends_with("_l")
                && !q.ends_with("_r");
            if !valid {
                return Err(MachineError::ReservedName(q.clone()));
            }
            if states.contains(q) {
                return Err(MachineError::DuplicateState(q.clone()));
            }
            states.push(q.clone());
        }
        let lookup = |q: String| {
            states
                .iter()
                .position(|s| *s == q)
                .ok_or(MachineError::UndefinedState(q))
        };
        let mut iota = Vec::with_capacity(entries.len());
        for (_, instr) in entries {
            if let Instruction::Halt(x) = instr {
                if x > 1 {
                    return Err(MachineError::BadOutput(x));
                }
            }
            iota.push(instr.try_map(lookup)?);
        }
        let start = lookup(start.to_string())?;
        Ok(Machine {
            name: name.to_string(),
            states,
            start,
            iota,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn instruction(&self, q: usize) -> &Instruction {
        &self.iota[q]
    }

    pub fn initial(&self, n: u64) -> Config {
        Config::running(n, 0, self.start)
    }

    /// One step of the machine; halted configurations have no successor.
    pub fn step(&self, c: &Config) -> Option<Config> {
        let Config::Running { n, m, q } = c else {
            return None;
        };
        let one = BigUint::one();
        Some(match &self.iota[*q] {
            Instruction::Inc(Register::One, q2) => Config::Running {
                n: n + &one,
                m: m.clone(),
                q: *q2,
            },
            Instruction::Inc(Register::Two, q2) => Config::Running {
                n: n.clone(),
                m: m + &one,
                q: *q2,
            },
            Instruction::If(Register::One, qz, qd) => {
                if n.is_zero() {
                    Config::Running {
                        n: n.clone(),
                        m: m.clone(),
                        q: *qz,
                    }
                } else {
                    Config::Running {
                        n: n - &one,
                        m: m.clone(),
                        q: *qd,
                    }
                }
            }
            Instruction::If(Register::Two, qz, qd) => {
                if m.is_zero() {
                    Config::Running {
                        n: n.clone(),
                        m: m.clone(),
                        q: *qz,
                    }
                } else {
                    Config::Running {
                        n: n.clone(),
                        m: m - &one,
                        q: *qd,
                    }
                }
            }
            Instruction::Halt(x) => Config::Halted(*x),
        })
    }

    /// Runs from `(n, 0, start)` for at most `fuel` steps.
    pub fn run(&self, n: u64, fuel: usize) -> Run {
        self.run_from(self.initial(n), fuel)
    }

    pub fn run_from(&self, initial: Config, fuel: usize) -> Run {
        let mut trace = vec![initial];
        for _ in 0..fuel {
            match self.step(trace.last().expect("nonempty")) {
                Some(next) => trace.push(next),
                None => break,
            }
        }
        let outcome = match trace.last().expect("nonempty") {
            Config::Halted(x) => Outcome::Output(*x),
            Config::Running { .. } => Outcome::FuelExhausted,
        };
        Run { outcome, trace }
    }

    /// Renders a configuration as `a^n b^m q` or `c_x` in plain text.
    pub fn show_config(&self, c: &Config) -> String {
        match c {
            Config::Halted(x) => format!("c{x}"),
            Config::Running { n, m, q } => format!("a^{n} b^{m} {}", self.states[*q]),
        }
    }

    /// The machine file format.
    pub fn render(&self) -> String {
        let mut out = format!("machine {}\nstart {}\n", self.name, self.states[self.start]);
        for (q, instr) in self.iota.iter().enumerate() {
            let body = match instr {
                Instruction::Inc(r, q2) => format!("inc {} {}", r.number(), self.states[*q2]),
                Instruction::If(r, q1, q2) => {
                    format!(
                        "if {} {} {}",
                        r.number(),
                        self.states[*q1],
                        self.states[*q2]
                    )
                }
                Instruction::Halt(x) => format!("halt {x}"),
            };
            out.push_str(&format!("{}: {}\n", self.states[q], body));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MachineError> {
        parse::parse_machine(text)
    }

    /// The four-state machine accepting exactly the even inputs.
    pub fn parity() -> Self {
        Machine::parse(
            "machine parity\nstart q0\nq0: if 1 qA q1\nq1: if 1 qR q0\nqA: halt 1\nqR: halt 0\n",
        )
        .expect("well-formed")
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
