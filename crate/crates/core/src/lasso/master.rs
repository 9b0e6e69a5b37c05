use super::{EntailedTrace, Evaluator, LassoWord};
use crate::after::af_loc_ext;
use crate::formula::{Formula, FormulaSet};
use crate::past::{rewrite_set, rewrite_under};
use crate::stability::{rewrite_m, rewrite_n};

/// `F`, `GF` over `μ(φ)` and `G`, `FG` over `ν(φ)` at a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSets {
    pub f: FormulaSet,
    pub gf: FormulaSet,
    pub g: FormulaSet,
    pub fg: FormulaSet,
}

impl LimitSets {
    pub fn is_stable(&self) -> bool {
        self.f == self.gf && self.g == self.fg
    }
}

pub fn limit_sets(phi: &Formula, w: &LassoWord, t: usize) -> LimitSets {
    let mut ev = Evaluator::new(w);
    limit_sets_with(phi, &mut ev, t)
}

fn limit_sets_with(phi: &Formula, ev: &mut Evaluator<'_>, t: usize) -> LimitSets {
    let mut out = LimitSets {
        f: FormulaSet::new(),
        gf: FormulaSet::new(),
        g: FormulaSet::new(),
        fg: FormulaSet::new(),
    };
    for psi in phi.mu_set() {
        let s = ev.eval(&psi);
        if s.eventually_from(t) {
            out.f.insert(psi.clone());
        }
        if s.eventually_from(s.threshold().max(t)) {
            out.gf.insert(psi);
        }
    }
    for psi in phi.nu_set() {
        let s = ev.eval(&psi);
        if s.always_from(t) {
            out.g.insert(psi.clone());
        }
        if s.always_from(s.threshold().max(t)) {
            out.fg.insert(psi);
        }
    }
    out
}

/// Least `r` at which `w` is stable with respect to `φ`.
pub fn stability_index(phi: &Formula, w: &LassoWord) -> usize {
    let mut ev = Evaluator::new(w);
    let limit = phi
        .mu_set()
        .into_iter()
        .chain(phi.nu_set())
        .map(|psi| ev.eval(&psi).threshold())
        .max()
        .unwrap_or(0);
    (0..=limit)
        .find(|&r| limit_sets_with(phi, &mut ev, r).is_stable())
        .unwrap_or(limit)
}

/// Outcome of checking the characterisation by stable limit sets.
#[derive(Clone, Debug)]
pub struct MasterReport {
    pub holds: bool,
    pub stability_index: usize,
    /// Every pair `(M, N)` satisfying the three premises.
    pub witnesses: Vec<(FormulaSet, FormulaSet)>,
    /// Whether `(GF(0), FG(0))` satisfies the premises.
    pub limit_pair_is_witness: bool,
}

impl MasterReport {
    /// `w ⊨ φ` iff some pair satisfies the premises; when `w ⊨ φ`, the pair of
    /// true limit sets is one of them.
    pub fn consistent(&self) -> bool {
        self.holds == !self.witnesses.is_empty() && (!self.holds || self.limit_pair_is_witness)
    }
}

fn subsets(s: &FormulaSet) -> Vec<FormulaSet> {
    let items: Vec<&Formula> = s.iter().collect();
    (0u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, f)| (*f).clone())
                .collect()
        })
        .collect()
}

/// Evaluates both sides of the characterisation of `w ⊨ φ` by a stable
/// index `r` and limit sets `M ⊆ μ(φ)`, `N ⊆ ν(φ)`.
pub fn check_master(phi: &Formula, w: &LassoWord) -> MasterReport {
    let mut ev = Evaluator::new(w);
    let holds = ev.holds(phi, 0);
    let r = stability_index(phi, w);
    let limits = limit_sets_with(phi, &mut ev, 0);
    let trace = EntailedTrace::new(phi, w);
    let reached = af_loc_ext(phi, &w.first(r), &trace.entailed_sequence(r)).expect("lengths agree");
    let at_r = w.suffix(r);

    let premise_1 = |m: &FormulaSet| {
        let cr = trace.composed(r);
        let g = rewrite_m(&reached, &rewrite_set(m, cr));
        super::holds(&g, &at_r, 0)
    };
    let premise_2 = |m: &FormulaSet, n: &FormulaSet| {
        m.iter().all(|psi| {
            trace.recurrent_positions().any(|t| {
                let c = trace.composed(t);
                let g = rewrite_n(&rewrite_under(psi, c), &rewrite_set(n, c));
                super::holds(&Formula::eventually(g), &w.suffix(t), 0)
            })
        })
    };
    let premise_3 = |m: &FormulaSet, n: &FormulaSet| {
        n.iter().all(|psi| {
            trace.distinct_positions().any(|t| {
                let c = trace.composed(t);
                let g = rewrite_m(&rewrite_under(psi, c), &rewrite_set(m, c));
                super::holds(&Formula::globally(g), &w.suffix(t), 0)
            })
        })
    };

    let mut witnesses = Vec::new();
    let mut limit_pair_is_witness = false;
    for m in subsets(&phi.mu_set()) {
        if !premise_1(&m) {
            continue;
        }
        for n in subsets(&phi.nu_set()) {
            if premise_2(&m, &n) && premise_3(&m, &n) {
                if m == limits.gf && n == limits.fg {
                    limit_pair_is_witness = true;
                }
                witnesses.push((m.clone(), n));
            }
        }
    }
    MasterReport {
        holds,
        stability_index: r,
        witnesses,
        limit_pair_is_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn limit_sets_of_gf() {
        let phi = parse("G F p").unwrap();
        let w = LassoWord::parse("{p},{p} ; {},{p}").unwrap();
        let l = limit_sets(&phi, &w, 0);
        assert_eq!(l.gf.len(), 1);
        assert_eq!(l.fg.len(), 1);
        assert!(l.is_stable());
    }

    #[test]
    fn stability_waits_for_last_occurrence() {
        let phi = parse("F p").unwrap();
        let w = LassoWord::parse("{},{p},{} ; {}").unwrap();
        assert_eq!(stability_index(&phi, &w), 2);
    }

    #[test]
    fn master_on_small_cases() {
        for (f, w) in [
            ("G F p", "{p} ; {},{p}"),
            ("F G p", "{p} ; {},{p}"),
            ("X (p S X q)", "{},{p} ; {q}"),
            ("G (p -> O q)", "{q},{p} ; {p}"),
            ("G (p -> O q)", "{},{p} ; {p}"),
        ] {
            let rep = check_master(&parse(f).unwrap(), &LassoWord::parse(w).unwrap());
            assert!(rep.consistent(), "{f} on {w}: {rep:?}");
        }
    }
}
