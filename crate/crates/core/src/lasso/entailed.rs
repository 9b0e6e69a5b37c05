use super::{holds, LassoWord};
use crate::formula::{Formula, FormulaSet};
use crate::past::{is_weak, rewrite_under, wc, weak_part};
use std::collections::HashMap;

struct TraceStep {
    composed: FormulaSet,
    rewritten: Formula,
    next_entailed: FormulaSet,
}

/// Entailed sets `C_t` and their compositions `∘C⃗_t` along a lasso word.
///
/// `∘C⃗_{t+1}` depends only on `∘C⃗_t` and `w_t`, so the sequence becomes
/// periodic once a pair (composed set, suffix) repeats.
pub struct EntailedTrace {
    formula: Formula,
    steps: Vec<TraceStep>,
    cycle_start: usize,
}

impl EntailedTrace {
    pub fn new(formula: &Formula, word: &LassoWord) -> Self {
        let psf = formula.psf();
        let first = weak_part(formula);
        let mut steps: Vec<TraceStep> = Vec::new();
        let mut seen: HashMap<(FormulaSet, usize), usize> = HashMap::new();
        let mut composed = first;
        let mut t = 0;
        let cycle_start = loop {
            if t >= word.prefix_len() {
                let key = (composed.clone(), word.canonical_position(t));
                if let Some(&s) = seen.get(&key) {
                    break s;
                }
                seen.insert(key, t);
            }
            let rewritten = rewrite_under(formula, &composed);
            let suffix = word.suffix(t);
            let next_entailed: FormulaSet = rewritten
                .psf()
                .into_iter()
                .filter(|psi| holds(&wc(psi).expect("past-rooted"), &suffix, 0))
                .collect();
            let next_composed: FormulaSet = psf
                .iter()
                .filter(|psi| {
                    let now = rewrite_under(psi, &composed);
                    is_weak(&rewrite_under(&now, &next_entailed))
                })
                .cloned()
                .collect();
            steps.push(TraceStep {
                composed,
                rewritten,
                next_entailed,
            });
            composed = next_composed;
            t += 1;
        };
        EntailedTrace {
            formula: formula.clone(),
            steps,
            cycle_start,
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    fn index(&self, t: usize) -> usize {
        if t < self.steps.len() {
            t
        } else {
            let len = self.steps.len() - self.cycle_start;
            self.cycle_start + (t - self.cycle_start) % len
        }
    }

    /// Positions `0..n` cover every distinct (composed set, suffix) pair.
    pub fn distinct_positions(&self) -> std::ops::Range<usize> {
        0..self.steps.len()
    }

    /// Positions visited infinitely often, up to the periodicity above.
    pub fn recurrent_positions(&self) -> std::ops::Range<usize> {
        self.cycle_start..self.steps.len()
    }

    /// `∘C⃗_t`, a subset of `psf(φ)`.
    pub fn composed(&self, t: usize) -> &FormulaSet {
        &self.steps[self.index(t)].composed
    }

    /// `φ⌊∘C⃗_t⌋`.
    pub fn rewritten(&self, t: usize) -> &Formula {
        &self.steps[self.index(t)].rewritten
    }

    /// `C_t`, a subset of `psf(φ⌊∘C⃗_{t-1}⌋)`.
    pub fn entailed(&self, t: usize) -> FormulaSet {
        if t == 0 {
            weak_part(&self.formula)
        } else {
            self.steps[self.index(t - 1)].next_entailed.clone()
        }
    }

    /// `C_0, …, C_t`.
    pub fn entailed_sequence(&self, t: usize) -> Vec<FormulaSet> {
        (0..=t).map(|i| self.entailed(i)).collect()
    }
}

/// `C_{φ,t}` for `w`.
pub fn entailed_set(f: &Formula, w: &LassoWord, t: usize) -> FormulaSet {
    EntailedTrace::new(f, w).entailed(t)
}

/// `∘C⃗_{φ,t}` for `w`.
pub fn composed_entailed(f: &Formula, w: &LassoWord, t: usize) -> FormulaSet {
    EntailedTrace::new(f, w).composed(t).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::past::compose_sequence;

    #[test]
    fn composed_matches_sequential_rewriting() {
        let f = parse("(Y p & wY p) | X (q S Y r)").unwrap();
        let w = LassoWord::parse("{p},{r},{q} ; {p,q},{}").unwrap();
        let trace = EntailedTrace::new(&f, &w);
        for t in 0..12 {
            let seq = trace.entailed_sequence(t);
            assert_eq!(&compose_sequence(&f, &seq), trace.composed(t));
            let folded = seq.iter().fold(f.clone(), |acc, c| rewrite_under(&acc, c));
            assert_eq!(&folded, trace.rewritten(t));
        }
    }

    #[test]
    fn yesterday_tracks_previous_letter() {
        let f = parse("Y p").unwrap();
        let w = LassoWord::parse("{p},{} ; {p}").unwrap();
        assert!(composed_entailed(&f, &w, 0).is_empty());
        assert!(composed_entailed(&f, &w, 1).contains(&f));
        assert!(composed_entailed(&f, &w, 2).is_empty());
        assert!(composed_entailed(&f, &w, 3).contains(&f));
    }
}
