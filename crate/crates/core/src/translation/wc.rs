use super::{TranslateError, TranslationContext};
use crate::after::af_loc;
use crate::automata::{BedAutomaton, StateId};
use crate::past::{rewrite_under, wc};
use crate::prop::CanonicalBool;
use std::collections::HashMap;

/// One class per past set: the conditions still to be met for the rewrite
/// by that set.
pub type WcState = Vec<CanonicalBool>;

struct Rc<'a> {
    ctx: &'a mut TranslationContext,
    /// `⋀_{ξ ∈ C_i} af_loc(wc(ξ⌊C_j⌋), σ, C_i⌊C_j⌋)` per `(letter, i, j)`.
    conditions: HashMap<(usize, usize, usize), CanonicalBool>,
}

impl Rc<'_> {
    fn condition(&mut self, letter: usize, i: usize, j: usize) -> CanonicalBool {
        if let Some(&c) = self.conditions.get(&(letter, i, j)) {
            return c;
        }
        let ctx = &mut *self.ctx;
        let sigma = &ctx.letters[letter];
        let k_ij = &ctx.cross[i][j];
        let parts: Vec<_> = ctx.past_sets[i]
            .iter()
            .map(|xi| {
                let cond = wc(&rewrite_under(xi, &ctx.past_sets[j])).expect("past-rooted");
                af_loc(&cond, sigma, k_ij)
            })
            .collect();
        let mut acc = ctx.canon.top();
        for p in parts {
            let c = ctx.canon.canonicalize(&p);
            acc = ctx.canon.conj(acc, c);
        }
        self.conditions.insert((letter, i, j), acc);
        acc
    }

    fn step(&mut self, state: &WcState, letter: usize) -> WcState {
        let k = self.ctx.k();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let mut acc = self.ctx.canon.bottom();
            for jx in 0..self.ctx.saturation[i].len() {
                let j = self.ctx.saturation[i][jx];
                if self.ctx.canon.is_false(state[j]) {
                    continue;
                }
                let cond = self.condition(letter, i, j);
                if self.ctx.canon.is_false(cond) {
                    continue;
                }
                let moved = self.ctx.af_loc_class(state[j], letter, i, j);
                let term = self.ctx.canon.conj(moved, cond);
                acc = self.ctx.canon.disj(acc, term);
            }
            out.push(acc);
        }
        out
    }
}

/// The bed automaton `H_φ`, explored from `⟨⊤, ⊥, …, ⊥⟩`.
pub fn build_wc_automaton(ctx: &mut TranslationContext) -> Result<BedAutomaton<WcState>, TranslateError> {
    let k = ctx.k();
    let mut initial = vec![ctx.canon.bottom(); k];
    initial[0] = ctx.canon.top();
    let letters = ctx.letters.len();
    let limit = ctx.max_states;
    let alphabet = ctx.alphabet.clone();
    let mut rc = Rc {
        ctx,
        conditions: HashMap::new(),
    };
    let (labels, transitions): (Vec<WcState>, Vec<Vec<StateId>>) =
        crate::automata::explore(initial, letters, limit, "weakening conditions", |s, l| {
            Ok::<_, TranslateError>(rc.step(s, l))
        })?;
    Ok(BedAutomaton {
        alphabet,
        labels,
        initial: 0,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::Alphabet;
    use crate::parser::parse;

    #[test]
    fn pure_future_has_one_state() {
        let mut ctx = TranslationContext::new(&parse("G F p").unwrap(), 100).unwrap();
        let bed = build_wc_automaton(&mut ctx).unwrap();
        assert_eq!(bed.state_count(), 1);
        assert!(ctx.canon.is_true(bed.labels[0][0]));
    }

    #[test]
    fn yesterday_component_waits_for_p() {
        let phi = parse("Y p").unwrap();
        let mut ctx = TranslationContext::with_alphabet(&phi, Alphabet::new(["p"]), 100).unwrap();
        assert_eq!(ctx.k(), 2);
        let bed = build_wc_automaton(&mut ctx).unwrap();
        // index 1 is {Y p}
        let s0 = bed.initial;
        let after_empty = bed.transitions[s0][0];
        let after_p = bed.transitions[s0][1];
        assert!(ctx.canon.is_false(bed.labels[after_empty][1]));
        assert!(ctx.canon.is_true(bed.labels[after_p][1]));
        assert!(ctx.canon.is_true(bed.labels[after_empty][0]));
    }
}
