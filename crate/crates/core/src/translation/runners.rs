use super::{TranslationContext, WcState};
use crate::automata::{AcceptanceKind, Runner};
use crate::formula::{Formula, FormulaSet};
use crate::past::{rewrite_set, rewrite_under};
use crate::prop::CanonicalBool;
use crate::stability::{rewrite_m, rewrite_n};
use std::collections::HashMap;

/// Applies a per-set rewrite to the atoms of a class, caching by atom and set index.
fn rewrite_class(
    ctx: &mut TranslationContext,
    cache: &mut HashMap<(u32, usize), CanonicalBool>,
    sets: &[FormulaSet],
    a: CanonicalBool,
    i: usize,
    rewrite: fn(&Formula, &FormulaSet) -> Formula,
) -> CanonicalBool {
    ctx.canon.map_atoms_with(a, |c, atom| {
        *cache
            .entry((atom.id(), i))
            .or_insert_with(|| c.canonicalize(&rewrite(atom, &sets[i])))
    })
}

/// `⋁_i start_i ∧ ξ_i[S⌊C_i⌋]` over the components of the bed state.
fn restart(
    ctx: &mut TranslationContext,
    cache: &mut HashMap<(u32, usize), CanonicalBool>,
    sets: &[FormulaSet],
    starts: &[CanonicalBool],
    bed: &WcState,
    rewrite: fn(&Formula, &FormulaSet) -> Formula,
) -> CanonicalBool {
    let mut acc = ctx.canon.bottom();
    for i in 0..starts.len() {
        if ctx.canon.is_false(bed[i]) || ctx.canon.is_false(starts[i]) {
            continue;
        }
        let cond = rewrite_class(ctx, cache, sets, bed[i], i, rewrite);
        let term = ctx.canon.conj(starts[i], cond);
        acc = ctx.canon.disj(acc, term);
    }
    acc
}

fn rewritten_sets(ctx: &TranslationContext, s: &FormulaSet) -> Vec<FormulaSet> {
    ctx.past_sets.iter().map(|c| rewrite_set(s, c)).collect()
}

/// Büchi runner for `ψ ∈ μ(φ)` under `N`: checks `F(ψ[N]_μ)` and restarts
/// every time the check succeeds.
pub struct BuchiRunner<'a> {
    ctx: &'a mut TranslationContext,
    initial: CanonicalBool,
    starts: Vec<CanonicalBool>,
    sets: Vec<FormulaSet>,
    cache: HashMap<(u32, usize), CanonicalBool>,
}

impl<'a> BuchiRunner<'a> {
    pub fn new(ctx: &'a mut TranslationContext, psi: &Formula, n: &FormulaSet) -> Self {
        let sets = rewritten_sets(ctx, n);
        let initial = ctx.canon.canonicalize(&Formula::eventually(rewrite_n(psi, n)));
        let starts = ctx
            .past_sets
            .clone()
            .iter()
            .zip(&sets)
            .map(|(c, nc)| {
                let f = Formula::eventually(rewrite_n(&rewrite_under(psi, c), nc));
                ctx.canon.canonicalize(&f)
            })
            .collect();
        BuchiRunner {
            ctx,
            initial,
            starts,
            sets,
            cache: HashMap::new(),
        }
    }
}

impl Runner for BuchiRunner<'_> {
    type State = CanonicalBool;
    type BedLabel = WcState;

    fn initial(&mut self) -> CanonicalBool {
        self.initial
    }

    fn step(&mut self, zeta: &CanonicalBool, bed: &WcState, letter: usize) -> CanonicalBool {
        if self.ctx.canon.is_true(*zeta) {
            restart(self.ctx, &mut self.cache, &self.sets, &self.starts, bed, rewrite_n)
        } else {
            self.ctx.af_class(*zeta, letter)
        }
    }

    fn kind(&self) -> AcceptanceKind {
        AcceptanceKind::Buchi
    }

    fn marked(&mut self, zeta: &CanonicalBool) -> bool {
        self.ctx.canon.is_true(*zeta)
    }

    fn describe(&mut self, zeta: &CanonicalBool) -> String {
        self.ctx.canon.display(*zeta)
    }
}

/// co-Büchi runner for `ψ ∈ ν(φ)` under `M`: checks `G(ψ[M]_ν)` and
/// restarts every time the check fails.
pub struct CoBuchiRunner<'a> {
    ctx: &'a mut TranslationContext,
    initial: CanonicalBool,
    starts: Vec<CanonicalBool>,
    sets: Vec<FormulaSet>,
    cache: HashMap<(u32, usize), CanonicalBool>,
}

impl<'a> CoBuchiRunner<'a> {
    pub fn new(ctx: &'a mut TranslationContext, psi: &Formula, m: &FormulaSet) -> Self {
        let sets = rewritten_sets(ctx, m);
        let initial = ctx.canon.canonicalize(&Formula::globally(rewrite_m(psi, m)));
        let starts = ctx
            .past_sets
            .clone()
            .iter()
            .zip(&sets)
            .map(|(c, mc)| {
                let f = Formula::globally(rewrite_m(&rewrite_under(psi, c), mc));
                ctx.canon.canonicalize(&f)
            })
            .collect();
        CoBuchiRunner {
            ctx,
            initial,
            starts,
            sets,
            cache: HashMap::new(),
        }
    }
}

impl Runner for CoBuchiRunner<'_> {
    type State = CanonicalBool;
    type BedLabel = WcState;

    fn initial(&mut self) -> CanonicalBool {
        self.initial
    }

    fn step(&mut self, zeta: &CanonicalBool, bed: &WcState, letter: usize) -> CanonicalBool {
        if self.ctx.canon.is_false(*zeta) {
            restart(self.ctx, &mut self.cache, &self.sets, &self.starts, bed, rewrite_m)
        } else {
            self.ctx.af_class(*zeta, letter)
        }
    }

    fn kind(&self) -> AcceptanceKind {
        AcceptanceKind::CoBuchi
    }

    fn marked(&mut self, zeta: &CanonicalBool) -> bool {
        self.ctx.canon.is_false(*zeta)
    }

    fn describe(&mut self, zeta: &CanonicalBool) -> String {
        self.ctx.canon.display(*zeta)
    }
}

/// co-Büchi runner guessing the stability point for `M`. The state pairs the
/// after-function image of `φ` with its current `ν`-rewritten copy.
pub struct StabilityRunner<'a> {
    ctx: &'a mut TranslationContext,
    initial: (CanonicalBool, CanonicalBool),
    sets: Vec<FormulaSet>,
    cache: HashMap<(u32, usize), CanonicalBool>,
}

impl<'a> StabilityRunner<'a> {
    pub fn new(ctx: &'a mut TranslationContext, m: &FormulaSet) -> Self {
        let sets = rewritten_sets(ctx, m);
        let phi = ctx.phi.clone();
        let initial = (ctx.canon.canonicalize(&phi), ctx.canon.canonicalize(&rewrite_m(&phi, m)));
        StabilityRunner {
            ctx,
            initial,
            sets,
            cache: HashMap::new(),
        }
    }
}

impl Runner for StabilityRunner<'_> {
    type State = (CanonicalBool, CanonicalBool);
    type BedLabel = WcState;

    fn initial(&mut self) -> Self::State {
        self.initial
    }

    fn step(&mut self, (psi, zeta): &Self::State, bed: &WcState, letter: usize) -> Self::State {
        let next = self.ctx.af_class(*psi, letter);
        if self.ctx.canon.is_false(*zeta) {
            let k = self.ctx.k();
            let starts: Vec<CanonicalBool> = (0..k)
                .map(|i| rewrite_class(self.ctx, &mut self.cache, &self.sets, next, i, rewrite_m))
                .collect();
            let z = restart(self.ctx, &mut self.cache, &self.sets, &starts, bed, rewrite_m);
            (next, z)
        } else {
            (next, self.ctx.af_class(*zeta, letter))
        }
    }

    fn kind(&self) -> AcceptanceKind {
        AcceptanceKind::CoBuchi
    }

    fn marked(&mut self, state: &Self::State) -> bool {
        self.ctx.canon.is_false(state.1)
    }

    fn describe(&mut self, (psi, zeta): &Self::State) -> String {
        format!("{} | {}", self.ctx.canon.display(*psi), self.ctx.canon.display(*zeta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::cascade;
    use crate::lasso::{Alphabet, LassoWord};
    use crate::parser::parse;
    use crate::translation::build_wc_automaton;

    fn ctx(src: &str) -> TranslationContext {
        TranslationContext::with_alphabet(&parse(src).unwrap(), Alphabet::new(["p", "q"]), 1000).unwrap()
    }

    fn w(s: &str) -> LassoWord {
        LassoWord::parse(s).unwrap()
    }

    #[test]
    fn buchi_accepts_recurring_q() {
        let mut c = ctx("tt U q");
        let bed = build_wc_automaton(&mut c).unwrap();
        let psi = parse("tt U q").unwrap();
        let a = cascade(&bed, &mut BuchiRunner::new(&mut c, &psi, &FormulaSet::new()), 1000).unwrap();
        assert!(a.accepts(&w("; {q}")));
        assert!(a.accepts(&w("; {},{q}")));
        assert!(!a.accepts(&w("{q} ; {}")));
    }

    #[test]
    fn cobuchi_for_g_p() {
        let mut c = ctx("p W ff");
        let bed = build_wc_automaton(&mut c).unwrap();
        let psi = parse("p W ff").unwrap();
        let a = cascade(&bed, &mut CoBuchiRunner::new(&mut c, &psi, &FormulaSet::new()), 1000).unwrap();
        assert!(a.accepts(&w("; {p}")));
        assert!(a.accepts(&w("{},{} ; {p}")));
        assert!(!a.accepts(&w("; {p},{}")));
    }

    #[test]
    fn stability_branches_of_f_p() {
        let mut c = ctx("F p");
        let bed = build_wc_automaton(&mut c).unwrap();
        let none = cascade(&bed, &mut StabilityRunner::new(&mut c, &FormulaSet::new()), 1000).unwrap();
        let m: FormulaSet = [parse("F p").unwrap()].into_iter().collect();
        let some = cascade(&bed, &mut StabilityRunner::new(&mut c, &m), 1000).unwrap();
        // after the first p the image of F p is ⊤, so the re-guess settles
        assert!(none.accepts(&w("; {p}")));
        assert!(!none.accepts(&w("; {}")));
        assert!(some.accepts(&w("; {p}")));
        // tt W p: rejection of this branch is left to the Büchi side
        assert!(some.accepts(&w("; {}")));
    }

    #[test]
    fn stability_for_g_p() {
        let mut c = ctx("G p");
        let bed = build_wc_automaton(&mut c).unwrap();
        let a = cascade(&bed, &mut StabilityRunner::new(&mut c, &FormulaSet::new()), 1000).unwrap();
        assert!(a.accepts(&w("; {p}")));
    }
}
