use clap::{Parser, Subcommand, ValueEnum};
use pltl2dra::automata::{from_hoa, to_dot, to_hoa, AutomatonError, OmegaAutomaton};
use pltl2dra::selftest::{self, Suite};
use pltl2dra::{parse, translate, Formula, LassoWord, TranslateError, DEFAULT_MAX_STATES};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pltl2dra", version, about = "Past LTL to deterministic Rabin automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Hoa,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula and print the automaton.
    Translate {
        formula: String,
        #[arg(long, value_enum, default_value = "hoa")]
        format: Format,
        /// Print sizes to stderr.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Evaluate a formula at position `t` of a lasso word `u ; v`.
    Eval { formula: String, word: String, t: usize },
    /// Membership of a lasso word in a HOA file or in the translation of a formula.
    Check {
        automaton: String,
        word: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Run a seeded property suite: theorem1, lemma2, master or e2e.
    Selftest {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<TranslateError> for Failure {
    fn from(e: TranslateError) -> Self {
        let code = match e {
            TranslateError::Automaton(AutomatonError::StateLimit { .. }) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn formula(src: &str) -> Result<Formula, Failure> {
    parse(src).map_err(|e| Failure::input(format!("parse error: {e}")))
}

fn word(src: &str) -> Result<LassoWord, Failure> {
    LassoWord::parse(src).map_err(|e| Failure::input(format!("word error: {e}")))
}

fn load_automaton(src: &str, max_states: usize) -> Result<OmegaAutomaton, Failure> {
    let text = if Path::new(src).is_file() {
        Some(std::fs::read_to_string(src).map_err(Failure::input)?)
    } else if src.trim_start().starts_with("HOA:") {
        Some(src.to_string())
    } else {
        None
    };
    match text {
        Some(t) => from_hoa(&t).map_err(|e| Failure::input(format!("HOA error: {e}"))),
        None => Ok(translate(&formula(src)?, max_states)?.automaton),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Translate {
            formula: src,
            format,
            stats,
            max_states,
        } => {
            let t = translate(&formula(&src)?, max_states)?;
            match format {
                Format::Hoa => print!("{}", to_hoa(&t.automaton)),
                Format::Dot => print!("{}", to_dot(&t.automaton)),
            }
            if stats {
                let s = &t.stats;
                eprintln!("states: {}", s.states);
                eprintln!("rabin-pairs: {}", s.pairs);
                eprintln!("branches: {}", s.branches);
                eprintln!("pairs-per-branch: 1");
                eprintln!("wc-states: {}", s.wc_states);
                eprintln!("k: {}", s.k);
                eprintln!("n: {}", s.n);
                eprintln!("m: {}", s.m);
            }
        }
        Command::Eval { formula: f, word: w, t } => {
            let value = pltl2dra::holds(&formula(&f)?, &word(&w)?, t);
            println!("{value}");
        }
        Command::Check {
            automaton,
            word: w,
            max_states,
        } => {
            let w = word(&w)?;
            let a = load_automaton(&automaton, max_states)?;
            println!("{}", if a.accepts(&w) { "accept" } else { "reject" });
        }
        Command::Selftest { suite, seed, count } => {
            let suite: Suite = suite.parse().map_err(Failure::input)?;
            let report = selftest::run(suite, seed, count);
            println!("seed {seed}");
            for f in &report.failures {
                println!("FAIL {f}");
            }
            println!("{}/{} pass", report.passed, report.total);
            if !report.all_passed() {
                return Err(Failure {
                    code: 3,
                    message: format!("{} failing cases", report.total - report.passed),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
