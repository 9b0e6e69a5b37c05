//! Weakening and strengthening of past operators, rewriting under a set of
//! past subformulae, weakening conditions, and saturation.

use crate::formula::{Formula, FormulaSet, Node, Op};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PastError {
    #[error("{0} is not rooted in a past operator")]
    NotPastRooted(Formula),
}

fn weak_op(op: Op) -> Op {
    match op {
        Op::Yesterday => Op::WeakYesterday,
        Op::Since => Op::WeakSince,
        Op::Back => Op::WeakBack,
        other => other,
    }
}

fn strong_op(op: Op) -> Op {
    match op {
        Op::WeakYesterday => Op::Yesterday,
        Op::WeakSince => Op::Since,
        Op::WeakBack => Op::Back,
        other => other,
    }
}

/// `ψ_W`: replaces a strong past root by its weak counterpart.
pub fn weaken(f: &Formula) -> Formula {
    if f.is_past() {
        Formula::with_op(weak_op(f.op()), &f.children())
    } else {
        f.clone()
    }
}

/// `ψ_S`: replaces a weak past root by its strong counterpart.
pub fn strengthen(f: &Formula) -> Formula {
    if f.is_past() {
        Formula::with_op(strong_op(f.op()), &f.children())
    } else {
        f.clone()
    }
}

/// `ψ = ψ_W`.
pub fn is_weak(f: &Formula) -> bool {
    weak_op(f.op()) == f.op()
}

/// `φ⌊C⌋`. Children are rewritten first; each past node is then weakened if
/// the original node belongs to `c`, strengthened otherwise.
pub fn rewrite_under(f: &Formula, c: &FormulaSet) -> Formula {
    let mut memo = HashMap::new();
    rewrite_memo(f, c, &mut memo)
}

fn rewrite_memo(f: &Formula, c: &FormulaSet, memo: &mut HashMap<u32, Formula>) -> Formula {
    if let Some(r) = memo.get(&f.id()) {
        return r.clone();
    }
    let kids: Vec<Formula> = f.children().iter().map(|k| rewrite_memo(k, c, memo)).collect();
    let r = if f.is_past() {
        let op = if c.contains(f) {
            weak_op(f.op())
        } else {
            strong_op(f.op())
        };
        Formula::with_op(op, &kids)
    } else {
        f.rebuild(&kids)
    };
    memo.insert(f.id(), r.clone());
    r
}

/// `S⌊C⌋ = {ψ⌊C⌋ | ψ ∈ S}`.
pub fn rewrite_set(s: &FormulaSet, c: &FormulaSet) -> FormulaSet {
    let mut memo = HashMap::new();
    s.iter().map(|f| rewrite_memo(f, c, &mut memo)).collect()
}

/// Weakening condition of a past-rooted formula.
pub fn wc(f: &Formula) -> Result<Formula, PastError> {
    Ok(match f.node() {
        Node::Yesterday(a) | Node::WeakYesterday(a) => a.clone(),
        Node::Since(_, b) => b.clone(),
        Node::WeakSince(a, b) => Formula::or(a.clone(), b.clone()),
        Node::Back(a, b) => Formula::and(a.clone(), b.clone()),
        Node::WeakBack(_, b) => b.clone(),
        _ => return Err(PastError::NotPastRooted(f.clone())),
    })
}

/// Members of `psf(φ)` that are already weak-rooted.
pub fn weak_part(f: &Formula) -> FormulaSet {
    f.psf().into_iter().filter(is_weak).collect()
}

/// All subsets of `psf(φ)`. Index 0 is the set of already-weak members;
/// the rest follow by cardinality, then lexicographically in interning order.
pub fn enumerate_past_sets(f: &Formula) -> Vec<FormulaSet> {
    let psf: Vec<Formula> = f.psf().into_iter().collect();
    assert!(psf.len() < 24, "too many past subformulae to enumerate");
    let first = weak_part(f);
    let mut rest: Vec<Vec<usize>> = (0u32..(1u32 << psf.len()))
        .map(|mask| (0..psf.len()).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    rest.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out = vec![first.clone()];
    for idxs in rest {
        let s: FormulaSet = idxs.iter().map(|&i| psf[i].clone()).collect();
        if s != first {
            out.push(s);
        }
    }
    out
}

/// `C_j ⪯ C_i`: every identification made by `⌊C_j⌋` on `psf(φ)` is also
/// made by `⌊C_i⌋`.
pub fn is_saturated(f: &Formula, cj: &FormulaSet, ci: &FormulaSet) -> bool {
    let psf: Vec<Formula> = f.psf().into_iter().collect();
    let under_j: Vec<Formula> = psf.iter().map(|x| rewrite_under(x, cj)).collect();
    let under_i: Vec<Formula> = psf.iter().map(|x| rewrite_under(x, ci)).collect();
    for a in 0..psf.len() {
        for b in (a + 1)..psf.len() {
            if under_j[a] == under_j[b] && under_i[a] != under_i[b] {
                return false;
            }
        }
    }
    true
}

/// `J_i` for every `i`: the indices `j` with `C_j ⪯ C_i`.
pub fn saturation_table(f: &Formula, sets: &[FormulaSet]) -> Vec<Vec<usize>> {
    (0..sets.len())
        .map(|i| {
            (0..sets.len())
                .filter(|&j| is_saturated(f, &sets[j], &sets[i]))
                .collect()
        })
        .collect()
}

/// `∘C⃗`: members of `psf(φ)` that end weak-rooted after rewriting by each
/// set of `cs` in turn.
pub fn compose_sequence(f: &Formula, cs: &[FormulaSet]) -> FormulaSet {
    f.psf()
        .into_iter()
        .filter(|psi| {
            let end = cs.iter().fold(psi.clone(), |acc, c| rewrite_under(&acc, c));
            is_weak(&end)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn rewrite_checks_original_node() {
        let f = parse("Y (p wS q)").unwrap();
        assert_eq!(rewrite_under(&f, &set(&["Y (p wS q)"])), parse("wY (p S q)").unwrap());
        assert_eq!(rewrite_under(&f, &set(&["p wS q"])), f);
        assert_eq!(rewrite_under(&f, &set(&[])), parse("Y (p S q)").unwrap());
    }

    #[test]
    fn weak_part_is_identity() {
        let f = parse("wY p & (q S r) & (a wB b)").unwrap();
        assert_eq!(rewrite_under(&f, &weak_part(&f)), f);
    }

    #[test]
    fn wc_table() {
        let cases = [
            ("Y p", "p"),
            ("wY p", "p"),
            ("p S q", "q"),
            ("p wS q", "p | q"),
            ("p B q", "p & q"),
            ("p wB q", "q"),
        ];
        for (f, w) in cases {
            assert_eq!(wc(&parse(f).unwrap()).unwrap(), parse(w).unwrap());
        }
        assert!(wc(&parse("X p").unwrap()).is_err());
    }

    #[test]
    fn enumeration_order() {
        let f = parse("wY p & Y q").unwrap();
        let sets = enumerate_past_sets(&f);
        assert_eq!(sets.len(), 4);
        assert_eq!(sets[0], set(&["wY p"]));
        assert_eq!(sets[1], set(&[]));
        assert_eq!(sets[3].len(), 2);
    }

    #[test]
    fn saturation_example() {
        let f = parse("Y p & wY p").unwrap();
        assert!(!is_saturated(&f, &set(&[]), &set(&["Y p"])));
        assert!(is_saturated(&f, &set(&[]), &set(&["Y p", "wY p"])));
        assert!(is_saturated(&f, &set(&[]), &set(&[])));
    }

    #[test]
    fn weaken_strengthen_inverse_on_past() {
        for s in ["Y p", "p S q", "p B q"] {
            let f = parse(s).unwrap();
            assert_eq!(strengthen(&weaken(&f)), f);
            assert!(is_weak(&weaken(&f)));
        }
        let u = parse("p U q").unwrap();
        assert_eq!(weaken(&u), u);
        assert_eq!(strengthen(&u), u);
    }
}
