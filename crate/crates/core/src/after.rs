//! The local after-function `af_loc`, its one-step companion `pu_loc`, and the
//! global after-function `af` that guesses the past.

use crate::formula::{Formula, FormulaSet, Node};
use crate::lasso::Letter;
use crate::past::{rewrite_under, wc};
use crate::prop::{CanonicalBool, Canonicalizer};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfterError {
    #[error("expected {expected} past sets for a word of length {word}, got {got}")]
    LengthMismatch {
        word: usize,
        expected: usize,
        got: usize,
    },
}

struct Local<'a> {
    sigma: &'a Letter,
    c: &'a FormulaSet,
    af: HashMap<u32, Formula>,
    pu: HashMap<u32, Formula>,
}

impl Local<'_> {
    fn af(&mut self, f: &Formula) -> Formula {
        if let Some(r) = self.af.get(&f.id()) {
            return r.clone();
        }
        let r = match f.node() {
            Node::True => Formula::tt(),
            Node::False => Formula::ff(),
            Node::Prop(p) => bool_formula(self.sigma.contains(p)),
            Node::NegProp(p) => bool_formula(!self.sigma.contains(p)),
            Node::And(a, b) => {
                let (x, y) = (self.af(a), self.af(b));
                Formula::and_s(x, y)
            }
            Node::Or(a, b) => {
                let (x, y) = (self.af(a), self.af(b));
                Formula::or_s(x, y)
            }
            Node::Next(a) => self.pu(a),
            Node::Until(a, b) | Node::WeakUntil(a, b) => {
                let now = self.af(b);
                let hold = self.af(a);
                let later = self.pu(f);
                Formula::or_s(now, Formula::and_s(hold, later))
            }
            Node::Release(a, b) | Node::StrongRelease(a, b) => {
                let now = self.af(b);
                let stop = self.af(a);
                let later = self.pu(f);
                Formula::and_s(now, Formula::or_s(stop, later))
            }
            Node::Yesterday(_) => Formula::ff(),
            Node::WeakYesterday(_) => Formula::tt(),
            Node::Since(..) | Node::WeakSince(..) | Node::Back(..) | Node::WeakBack(..) => {
                let cond = wc(f).expect("past-rooted");
                self.af(&cond)
            }
        };
        self.af.insert(f.id(), r.clone());
        r
    }

    fn pu(&mut self, f: &Formula) -> Formula {
        if let Some(r) = self.pu.get(&f.id()) {
            return r.clone();
        }
        let mut r = rewrite_under(f, self.c);
        for psi in f.psf() {
            if self.c.contains(&psi) {
                let cond = wc(&psi).expect("past-rooted");
                let v = self.af(&cond);
                r = Formula::and_s(r, v);
            }
        }
        self.pu.insert(f.id(), r.clone());
        r
    }
}

fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::tt()
    } else {
        Formula::ff()
    }
}

/// `af_loc(φ, σ, C)`.
pub fn af_loc(f: &Formula, sigma: &Letter, c: &FormulaSet) -> Formula {
    Local {
        sigma,
        c,
        af: HashMap::new(),
        pu: HashMap::new(),
    }
    .af(f)
}

/// `pu_loc(φ, σ, C) = φ⌊C⌋ ∧ ⋀_{ψ ∈ psf(φ) ∩ C} af_loc(wc(ψ), σ, C)`.
pub fn pu_loc(f: &Formula, sigma: &Letter, c: &FormulaSet) -> Formula {
    Local {
        sigma,
        c,
        af: HashMap::new(),
        pu: HashMap::new(),
    }
    .pu(f)
}

/// Extension of `af_loc` to a finite word. `cs` has one more entry than the
/// word; its first entry is ignored and letter `t` is read under `cs[t + 1]`.
pub fn af_loc_ext(f: &Formula, word: &[Letter], cs: &[FormulaSet]) -> Result<Formula, AfterError> {
    if cs.len() != word.len() + 1 {
        return Err(AfterError::LengthMismatch {
            word: word.len(),
            expected: word.len() + 1,
            got: cs.len(),
        });
    }
    Ok(word
        .iter()
        .zip(&cs[1..])
        .fold(f.clone(), |acc, (sigma, c)| af_loc(&acc, sigma, c)))
}

fn subsets(items: &[Formula]) -> impl Iterator<Item = FormulaSet> + '_ {
    assert!(items.len() < 24, "too many past subformulae");
    (0u32..(1 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| f.clone())
            .collect()
    })
}

/// `af(φ, σ) = ⋁_{C ⊆ psf(φ)} af_loc(φ, σ, C)`, guessing over the past
/// subformulae of the whole argument.
pub fn af(f: &Formula, sigma: &Letter) -> Formula {
    let psf: Vec<Formula> = f.psf().into_iter().collect();
    Formula::or_all(subsets(&psf).map(|c| af_loc(f, sigma, &c)))
}

/// `af` lifted to propositional classes: each atom is advanced by [`af`]
/// independently and the result is recombined. Caches per atom and letter.
#[derive(Default)]
pub struct AfEngine {
    cache: HashMap<(u32, Letter), CanonicalBool>,
}

impl AfEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `af` of an atom, canonicalized.
    pub fn atom(&mut self, canon: &mut Canonicalizer, atom: &Formula, sigma: &Letter) -> CanonicalBool {
        let key = (atom.id(), sigma.clone());
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let r = canon.canonicalize(&af(atom, sigma));
        self.cache.insert(key, r);
        r
    }

    pub fn step(&mut self, canon: &mut Canonicalizer, a: CanonicalBool, sigma: &Letter) -> CanonicalBool {
        canon.map_atoms_with(a, |c, atom| self.atom(c, atom, sigma))
    }

    /// `af(φ, w)` as a left fold over the letters of `w`.
    pub fn run(&mut self, canon: &mut Canonicalizer, f: &Formula, word: &[Letter]) -> CanonicalBool {
        let start = canon.canonicalize(f);
        word.iter().fold(start, |acc, sigma| self.step(canon, acc, sigma))
    }
}

/// `af(φ, w)` in `canon`.
pub fn af_ext(canon: &mut Canonicalizer, f: &Formula, word: &[Letter]) -> CanonicalBool {
    AfEngine::new().run(canon, f, word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::prop::prop_equiv;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn pu_loc_adds_weakening_conditions() {
        let phi = f("p S X q");
        let sigma = Letter::new(["q"]);
        let got = pu_loc(&phi, &sigma, &set(&["p S X q"]));
        let want = Formula::and(f("p wS X q"), af_loc(&f("X q"), &sigma, &set(&["p S X q"])));
        assert!(prop_equiv(&got, &want));
        assert!(prop_equiv(&got, &f("p wS X q & q")));
        assert_eq!(pu_loc(&phi, &sigma, &set(&[])), phi);
    }

    #[test]
    fn af_guesses_the_past() {
        let phi = f("X (p S X q)");
        let sigma = Letter::new(["p"]);
        assert!(prop_equiv(&af(&phi, &sigma), &f("(p wS X q & q) | p S X q")));
    }

    #[test]
    fn past_operators_at_origin() {
        let sigma = Letter::empty();
        let c = set(&[]);
        assert!(af_loc(&f("Y p"), &sigma, &c).is_false());
        assert!(af_loc(&f("wY p"), &sigma, &c).is_true());
        assert!(af_loc(&f("p wS q"), &Letter::new(["p"]), &c).is_true());
        assert!(af_loc(&f("p B q"), &Letter::new(["q"]), &c).is_false());
    }

    #[test]
    fn af_loc_ext_checks_lengths() {
        let err = af_loc_ext(&f("p"), &[Letter::empty()], &[FormulaSet::new()]).unwrap_err();
        assert_eq!(
            err,
            AfterError::LengthMismatch {
                word: 1,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn engine_reaches_true_on_eventualities() {
        let mut canon = Canonicalizer::new();
        let word = [Letter::empty(), Letter::new(["p"])];
        let r = af_ext(&mut canon, &f("F p"), &word);
        assert!(canon.is_true(r));
        let r = af_ext(&mut canon, &f("G p"), &word);
        assert!(canon.is_false(r));
    }
}
