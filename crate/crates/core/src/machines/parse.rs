//! The machine file format:
//!
//! ```text
//! machine parity
//! start q0
//! q0: if 1 qA q1
//! q1: if 1 qR q0
//! qA: halt 1
//! qR: halt 0
//! ```

use super::{Instruction, Machine, MachineError, Register};

fn syntax(line: usize, msg: impl Into<String>) -> MachineError {
    MachineError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<u8, MachineError> {
    tok.parse::<u8>()
        .map_err(|_| syntax(line, format!("expected a number, found `{tok}`")))
}

pub(super) fn parse_machine(text: &str) -> Result<Machine, MachineError> {
    let mut name: Option<String> = None;
    let mut start: Option<String> = None;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words.as_slice() {
            ["machine", n] => {
                if name.replace(n.to_string()).is_some() {
                    return Err(syntax(line, "repeated `machine` line"));
                }
            }
            ["start", q] => {
                if start.replace(q.to_string()).is_some() {
                    return Err(syntax(line, "repeated `start` line"));
                }
            }
            [label, rest @ ..] if label.ends_with(':') => {
                let q = label.trim_end_matches(':').to_string();
                let instr = match rest {
                    ["inc", r, q2] => {
                        Instruction::Inc(Register::new(number(r, line)?)?, q2.to_string())
                    }
                    ["if", r, q1, q2] => Instruction::If(
                        Register::new(number(r, line)?)?,
                        q1.to_string(),
                        q2.to_string(),
                    ),
                    ["halt", x] => Instruction::Halt(number(x, line)?),
                    _ => return Err(syntax(line, "expected `inc R Q`, `if R Q Q` or `halt X`")),
                };
                entries.push((q, instr));
            }
            _ => return Err(syntax(line, format!("cannot read `{content}`"))),
        }
    }
    let start = start.ok_or_else(|| syntax(0, "missing `start` line"))?;
    Machine::new(name.as_deref().unwrap_or("machine"), &start, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_example() {
        let m = parse_machine(
            "machine parity\nstart q0\n# comment\nq0: if 1 qA q1\nq1: if 1 qR q0\nqA: halt 1\nqR: halt 0\n",
        )
        .unwrap();
        assert_eq!(m.name(), "parity");
        assert_eq!(m.states(), &["q0", "q1", "qA", "qR"]);
        assert_eq!(m.instruction(0), &Instruction::If(Register::One, 2, 1));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_machine("start q\nq: jump q\n"),
            Err(MachineError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_machine("q: halt 1\n"),
            Err(MachineError::Syntax { line: 0, .. })
        ));
        assert!(matches!(
            parse_machine("start q\nq: inc x q\n"),
            Err(MachineError::Syntax { line: 2, .. })
        ));
        assert_eq!(
            parse_machine("start q\nq: inc 3 q\n").unwrap_err(),
            MachineError::BadRegister(3)
        );
        assert!(matches!(
            parse_machine("start q\nstart q\n"),
            Err(MachineError::Syntax { line: 2, .. })
        ));
    }
}
