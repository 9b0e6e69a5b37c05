//! Seeded property suites shared by the command line and the test targets.

use crate::after::af_ext;
use crate::formula::Formula;
use crate::gen::{random_formula, random_word, rng, FormulaParams, WordParams};
use crate::lasso::{check_master, holds, Alphabet, EntailedTrace, LassoWord};
use crate::prop::Canonicalizer;
use crate::translation::{translate_with, TranslationContext, DEFAULT_MAX_STATES};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Lemma2,
    Master,
    EndToEnd,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Theorem1, Suite::Lemma2, Suite::Master, Suite::EndToEnd];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Lemma2 => "lemma2",
            Suite::Master => "master",
            Suite::EndToEnd => "e2e",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`; expected theorem1, lemma2, master or e2e"))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: usize,
    pub total: usize,
    /// Up to ten failing cases.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} seed {}: {}/{} pass", self.suite.name(), self.seed, self.passed, self.total)
    }
}

const PROPS: [&str; 3] = ["p", "q", "r"];

fn formula_params(rng: &mut impl Rng) -> FormulaParams {
    let aps = rng.gen_range(1..=3);
    FormulaParams::new(&PROPS[..aps], 6, 2)
}

fn word_for(rng: &mut impl Rng, phi: &Formula) -> LassoWord {
    let props: Vec<String> = phi.vars().into_iter().collect();
    random_word(rng, &WordParams::new(&props, 4, 4))
}

/// `w ⊨ φ` iff the suffix from `t` satisfies the after-function image.
pub fn theorem1_case(phi: &Formula, w: &LassoWord, t: usize) -> bool {
    let mut canon = Canonicalizer::new();
    let image = af_ext(&mut canon, phi, &w.first(t));
    holds(phi, w, 0) == holds(&canon.to_formula(image), &w.suffix(t), 0)
}

/// `φ` holds at `t` iff its rewrite by the composed entailed sets holds on
/// the suffix.
pub fn lemma2_case(phi: &Formula, w: &LassoWord, t: usize) -> bool {
    let trace = EntailedTrace::new(phi, w);
    holds(phi, w, t) == holds(trace.rewritten(t), &w.suffix(t), 0)
}

/// Membership in the translation agrees with the evaluator on every word.
pub fn end_to_end_case(phi: &Formula, words: &[LassoWord], max_states: usize) -> Result<(), String> {
    let mut alphabet: Vec<String> = phi.vars().into_iter().collect();
    for w in words {
        alphabet.extend(w.vars());
    }
    let mut ctx = TranslationContext::with_alphabet(phi, Alphabet::new(alphabet), max_states)
        .map_err(|e| e.to_string())?;
    let t = translate_with(&mut ctx).map_err(|e| e.to_string())?;
    for w in words {
        let want = holds(phi, w, 0);
        if t.automaton.accepts(w) != want {
            return Err(format!("{phi} on {w}: expected {want}"));
        }
    }
    Ok(())
}

pub fn run(suite: Suite, seed: u64, count: usize) -> SuiteReport {
    let mut r = rng(seed);
    let mut report = SuiteReport {
        suite,
        seed,
        passed: 0,
        total: count,
        failures: Vec::new(),
    };
    for _ in 0..count {
        let outcome = match suite {
            Suite::Theorem1 | Suite::Lemma2 => {
                let params = formula_params(&mut r);
                let phi = random_formula(&mut r, &params);
                let w = word_for(&mut r, &phi);
                let t = r.gen_range(0..=8);
                let ok = if suite == Suite::Theorem1 {
                    theorem1_case(&phi, &w, t)
                } else {
                    lemma2_case(&phi, &w, t)
                };
                ok.then_some(()).ok_or_else(|| format!("{phi} on {w} at {t}"))
            }
            Suite::Master => {
                let params = formula_params(&mut r).fixpoints(3);
                let phi = random_formula(&mut r, &params);
                let w = word_for(&mut r, &phi);
                let rep = check_master(&phi, &w);
                rep.consistent().then_some(()).ok_or_else(|| format!("{phi} on {w}"))
            }
            Suite::EndToEnd => {
                let params = formula_params(&mut r);
                let phi = random_formula(&mut r, &params);
                let words: Vec<LassoWord> = (0..20).map(|_| word_for(&mut r, &phi)).collect();
                end_to_end_case(&phi, &words, DEFAULT_MAX_STATES)
            }
        };
        match outcome {
            Ok(()) => report.passed += 1,
            Err(msg) if report.failures.len() < 10 => report.failures.push(msg),
            Err(_) => {}
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for s in Suite::ALL {
            let rep = run(s, 11, 25);
            assert!(rep.all_passed(), "{rep} {:?}", rep.failures);
        }
    }
}
