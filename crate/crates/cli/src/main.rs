use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use kacomm::derivatives::{build_automaton, exp_derivative, expand, word_derivative, word_residue};
use kacomm::harness::selftest::{run_selftest, DEFAULT_SEED};
use kacomm::harness::{
    sort_reports, verify_completeness_bounded, verify_soundness_witness, CheckReport,
};
use kacomm::machines::{encode_machine, MachineAlphabet, Outcome, DEFAULT_FUEL};
use kacomm::reduction::{build_instance, check_machine_representable, eta};
use kacomm::terms::{member, parse_term};
use kacomm::{CommutableSet, Machine, Term, TraceWord};

#[derive(Parser)]
#[command(
    name = "kacomm",
    version,
    about = "Kleene algebra terms over alphabets with commutativity conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derivative of a term by a word.
    Derive {
        alphabet: PathBuf,
        term: String,
        word: String,
        /// Print the residue instead of the derivative.
        #[arg(long)]
        residue: bool,
        /// Use the expansion derivative, which rejects stars over nullable bodies.
        #[arg(long, conflicts_with = "residue")]
        expansion: bool,
    },
    /// Unfold a term to depth k: short words, then `s: e_s` frontier lines.
    Expand {
        alphabet: PathBuf,
        term: String,
        k: usize,
    },
    /// Build the term automaton and print its size.
    Automaton {
        alphabet: PathBuf,
        term: String,
        /// Print every state and transition.
        #[arg(long)]
        dump: bool,
    },
    /// Decide whether a word belongs to the language of a term.
    Member {
        alphabet: PathBuf,
        term: String,
        word: String,
    },
    /// Run a two-counter machine on an input.
    Run {
        machine: PathBuf,
        n: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
    },
    /// Print the transition term R_M of a machine.
    Encode { machine: PathBuf },
    /// Build the inequality instance of a machine and an input.
    Reduce {
        machine: PathBuf,
        n: u64,
        /// Write `instance.terms` and `alphabet.txt` here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the pair of terms for a file holding a machine and an `input N` line.
    Eta { input: PathBuf },
    /// Run the bounded checks for a machine and an input.
    Verify {
        machine: PathBuf,
        n: u64,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the seeded property suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn alphabet(path: &Path) -> Result<CommutableSet> {
    CommutableSet::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn machine(path: &Path) -> Result<Machine> {
    Machine::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn term(text: &str, x: &CommutableSet) -> Result<Term> {
    parse_term(text, x).with_context(|| format!("cannot parse term `{text}`"))
}

fn word(text: &str, x: &CommutableSet) -> Result<TraceWord> {
    TraceWord::parse(text, x).with_context(|| format!("cannot parse word `{text}`"))
}

fn print_reports(reports: &[CheckReport], json: bool) -> Result<bool> {
    if json {
        println!("{}", serde_json::to_string_pretty(reports)?);
    } else {
        for r in reports {
            println!("{r}");
        }
    }
    Ok(reports.iter().all(CheckReport::passed))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Derive {
            alphabet: a,
            term: t,
            word: w,
            residue: res,
            expansion,
        } => {
            let x = alphabet(&a)?;
            let e = term(&t, &x)?;
            let w = word(&w, &x)?;
            let out = if expansion {
                let mut d = e;
                for &c in w.letters() {
                    d = exp_derivative(&d, c)?;
                }
                d
            } else if res {
                word_residue(&e, &w, &x)
            } else {
                word_derivative(&e, &w, &x)
            };
            println!("{}", out.render(&x));
        }
        Command::Expand {
            alphabet: a,
            term: t,
            k,
        } => {
            let x = alphabet(&a)?;
            let ex = expand(&term(&t, &x)?, k, &x)?;
            for s in &ex.short {
                println!("{}", s.render(&x));
            }
            for f in &ex.frontier {
                println!("{}: {}", f.word.render(&x), f.term.render(&x));
            }
        }
        Command::Automaton {
            alphabet: a,
            term: t,
            dump,
        } => {
            let x = alphabet(&a)?;
            let aut = build_automaton(&term(&t, &x)?, &x)?;
            if dump {
                print!("{}", aut.dump(&x));
            } else {
                println!("{} states", aut.len());
            }
        }
        Command::Member {
            alphabet: a,
            term: t,
            word: w,
        } => {
            let x = alphabet(&a)?;
            let found = member(&word(&w, &x)?, &term(&t, &x)?, &x);
            println!("{found}");
            return Ok(found);
        }
        Command::Run {
            machine: p,
            n,
            fuel,
            trace,
        } => {
            let m = machine(&p)?;
            let r = m.run(n, fuel);
            if trace {
                for c in &r.trace {
                    println!("{}", m.show_config(c));
                }
            }
            match r.outcome {
                Outcome::Output(x) => println!("output {x} after {} steps", r.steps()),
                Outcome::FuelExhausted => println!("no output after {fuel} steps"),
            }
        }
        Command::Encode { machine: p } => {
            let m = machine(&p)?;
            let alph = MachineAlphabet::new(&m);
            println!("{}", encode_machine(&m, &alph).render(&alph.doubled));
        }
        Command::Reduce { machine: p, n, out } => {
            let inst = build_instance(&machine(&p)?, n)?;
            let terms = inst.render();
            let alph = inst.alphabet.doubled.render();
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("cannot create {}", dir.display()))?;
                    fs::write(dir.join("instance.terms"), terms)?;
                    fs::write(dir.join("alphabet.txt"), alph)?;
                }
                None => print!("{alph}{terms}"),
            }
        }
        Command::Eta { input } => {
            let bytes =
                fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let (both, right) = eta(&bytes);
            println!("{both}\n{right}");
        }
        Command::Verify {
            machine: p,
            n,
            bound,
            fuel,
            json,
        } => {
            let m = machine(&p)?;
            let mut reports = check_machine_representable(&m, 8);
            match m.run(n, fuel).outcome {
                Outcome::Output(0) => reports.push(verify_soundness_witness(&m, n, fuel)?),
                Outcome::Output(_) => {
                    reports.extend(verify_completeness_bounded(&m, n, fuel, bound)?)
                }
                Outcome::FuelExhausted => {
                    bail!("the machine gives no output on {n} within {fuel} steps")
                }
            }
            sort_reports(&mut reports);
            return print_reports(&reports, json);
        }
        Command::Selftest { seed, json } => return print_reports(&run_selftest(seed), json),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
