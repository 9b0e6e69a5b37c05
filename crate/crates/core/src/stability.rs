//! Rewrites that fix the limit behaviour of the least and greatest fixpoint
//! subformulae: `φ[M]_ν` and `φ[N]_μ`.

use crate::formula::{Formula, FormulaSet, Node};
use std::collections::HashMap;

/// `φ[M]_ν`: `U`/`M` nodes in `M` become `W`/`R`, the others become `ff`.
pub fn rewrite_m(f: &Formula, m: &FormulaSet) -> Formula {
    rewrite(f, &mut |node, kids| match node.node() {
        Node::Until(..) if m.contains(node) => Some(Formula::weak_until(kids[0].clone(), kids[1].clone())),
        Node::StrongRelease(..) if m.contains(node) => Some(Formula::release(kids[0].clone(), kids[1].clone())),
        Node::Until(..) | Node::StrongRelease(..) => Some(Formula::ff()),
        _ => None,
    })
}

/// `φ[N]_μ`: `W`/`R` nodes in `N` become `tt`, the others become `U`/`M`.
pub fn rewrite_n(f: &Formula, n: &FormulaSet) -> Formula {
    rewrite(f, &mut |node, kids| match node.node() {
        Node::WeakUntil(..) | Node::Release(..) if n.contains(node) => Some(Formula::tt()),
        Node::WeakUntil(..) => Some(Formula::until(kids[0].clone(), kids[1].clone())),
        Node::Release(..) => Some(Formula::strong_release(kids[0].clone(), kids[1].clone())),
        _ => None,
    })
}

fn rewrite(f: &Formula, case: &mut impl FnMut(&Formula, &[Formula]) -> Option<Formula>) -> Formula {
    fn go(
        f: &Formula,
        case: &mut impl FnMut(&Formula, &[Formula]) -> Option<Formula>,
        memo: &mut HashMap<u32, Formula>,
    ) -> Formula {
        if let Some(r) = memo.get(&f.id()) {
            return r.clone();
        }
        let kids: Vec<Formula> = f.children().iter().map(|k| go(k, case, memo)).collect();
        let r = case(f, &kids).unwrap_or_else(|| f.rebuild(&kids));
        memo.insert(f.id(), r.clone());
        r
    }
    go(f, case, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn nu_rewrite() {
        let phi = f("(a U b) | (c M d) | Y (a U b)");
        let m: FormulaSet = [f("a U b")].into_iter().collect();
        assert_eq!(rewrite_m(&phi, &m), f("(a W b) | ff | Y (a W b)"));
    }

    #[test]
    fn mu_rewrite() {
        let phi = f("G (a W b) | (c R d)");
        let n: FormulaSet = [f("a W b")].into_iter().collect();
        assert_eq!(rewrite_n(&phi, &n), f("(tt U ff) | (c M d)"));
        assert_eq!(rewrite_n(&phi, &FormulaSet::new()), f("((a U b) U ff) | (c M d)"));
    }
}
