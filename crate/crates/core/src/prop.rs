//! Propositional equivalence. Formulas are abstracted to Boolean functions
//! over their atoms (propositional and temporal subformulae) and stored as
//! reduced ordered BDDs, so equivalent formulas get the same handle.

use crate::formula::{Formula, Node};
use std::collections::HashMap;

/// Handle to a canonical Boolean function. Only meaningful together with the
/// [`Canonicalizer`] that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalBool(u32);

const FALSE: u32 = 0;
const TRUE: u32 = 1;
const LEAF_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct BddNode {
    var: u32,
    lo: u32,
    hi: u32,
}

/// BDD manager. Variables are atom formulas ordered by interning id.
pub struct Canonicalizer {
    nodes: Vec<BddNode>,
    unique: HashMap<BddNode, u32>,
    ite_cache: HashMap<(u32, u32, u32), u32>,
    atoms: HashMap<u32, Formula>,
    formula_cache: HashMap<u32, CanonicalBool>,
}

impl Default for Canonicalizer {
    fn default() -> Self {
        Self::new()
    }
}

impl Canonicalizer {
    pub fn new() -> Self {
        let leaf = |v| BddNode {
            var: LEAF_VAR,
            lo: v,
            hi: v,
        };
        Canonicalizer {
            nodes: vec![leaf(FALSE), leaf(TRUE)],
            unique: HashMap::new(),
            ite_cache: HashMap::new(),
            atoms: HashMap::new(),
            formula_cache: HashMap::new(),
        }
    }

    pub fn top(&self) -> CanonicalBool {
        CanonicalBool(TRUE)
    }

    pub fn bottom(&self) -> CanonicalBool {
        CanonicalBool(FALSE)
    }

    pub fn constant(&self, value: bool) -> CanonicalBool {
        CanonicalBool(if value { TRUE } else { FALSE })
    }

    pub fn is_true(&self, a: CanonicalBool) -> bool {
        a.0 == TRUE
    }

    pub fn is_false(&self, a: CanonicalBool) -> bool {
        a.0 == FALSE
    }

    /// Number of live BDD nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let n = BddNode { var, lo, hi };
        if let Some(&i) = self.unique.get(&n) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(n);
        self.unique.insert(n, i);
        i
    }

    fn cofactors(&self, f: u32, var: u32) -> (u32, u32) {
        let n = self.nodes[f as usize];
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (f, f)
        }
    }

    fn ite_raw(&mut self, f: u32, g: u32, h: u32) -> u32 {
        if f == TRUE {
            return g;
        }
        if f == FALSE {
            return h;
        }
        if g == h {
            return g;
        }
        if g == TRUE && h == FALSE {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let var = [f, g, h]
            .iter()
            .map(|&x| self.nodes[x as usize].var)
            .min()
            .unwrap_or(LEAF_VAR);
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let (h0, h1) = self.cofactors(h, var);
        let lo = self.ite_raw(f0, g0, h0);
        let hi = self.ite_raw(f1, g1, h1);
        let r = self.mk(var, lo, hi);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    /// If-then-else on Boolean functions.
    pub fn ite(&mut self, f: CanonicalBool, g: CanonicalBool, h: CanonicalBool) -> CanonicalBool {
        CanonicalBool(self.ite_raw(f.0, g.0, h.0))
    }

    pub fn conj(&mut self, a: CanonicalBool, b: CanonicalBool) -> CanonicalBool {
        CanonicalBool(self.ite_raw(a.0, b.0, FALSE))
    }

    pub fn disj(&mut self, a: CanonicalBool, b: CanonicalBool) -> CanonicalBool {
        CanonicalBool(self.ite_raw(a.0, TRUE, b.0))
    }

    pub fn negation(&mut self, a: CanonicalBool) -> CanonicalBool {
        CanonicalBool(self.ite_raw(a.0, FALSE, TRUE))
    }

    pub fn conj_all(&mut self, items: impl IntoIterator<Item = CanonicalBool>) -> CanonicalBool {
        let mut acc = self.top();
        for x in items {
            acc = self.conj(acc, x);
            if self.is_false(acc) {
                break;
            }
        }
        acc
    }

    pub fn disj_all(&mut self, items: impl IntoIterator<Item = CanonicalBool>) -> CanonicalBool {
        let mut acc = self.bottom();
        for x in items {
            acc = self.disj(acc, x);
            if self.is_true(acc) {
                break;
            }
        }
        acc
    }

    /// The single-variable function for an atom.
    pub fn atom(&mut self, f: &Formula) -> CanonicalBool {
        debug_assert!(f.is_atom(), "{f} is not an atom");
        self.atoms.entry(f.id()).or_insert_with(|| f.clone());
        CanonicalBool(self.mk(f.id(), FALSE, TRUE))
    }

    /// Canonical form of the propositional abstraction of `f`.
    pub fn canonicalize(&mut self, f: &Formula) -> CanonicalBool {
        if let Some(&c) = self.formula_cache.get(&f.id()) {
            return c;
        }
        let c = match f.node() {
            Node::True => self.top(),
            Node::False => self.bottom(),
            Node::And(a, b) => {
                let (x, y) = (self.canonicalize(a), self.canonicalize(b));
                self.conj(x, y)
            }
            Node::Or(a, b) => {
                let (x, y) = (self.canonicalize(a), self.canonicalize(b));
                self.disj(x, y)
            }
            _ => self.atom(f),
        };
        self.formula_cache.insert(f.id(), c);
        c
    }

    /// `a ∼ b` on formulas.
    pub fn prop_equiv(&mut self, a: &Formula, b: &Formula) -> bool {
        self.canonicalize(a) == self.canonicalize(b)
    }

    /// Whether `a` propositionally implies `b`.
    pub fn implies(&mut self, a: CanonicalBool, b: CanonicalBool) -> bool {
        let nb = self.negation(b);
        let r = self.conj(a, nb);
        self.is_false(r)
    }

    /// Atoms the function depends on, in variable order.
    pub fn support(&self, a: CanonicalBool) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut vars = std::collections::BTreeSet::new();
        let mut stack = vec![a.0];
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            vars.insert(node.var);
            stack.push(node.lo);
            stack.push(node.hi);
        }
        vars.into_iter().map(|v| self.atoms[&v].clone()).collect()
    }

    /// Evaluates under an atom assignment.
    pub fn eval(&self, a: CanonicalBool, mut assignment: impl FnMut(&Formula) -> bool) -> bool {
        let mut n = a.0;
        while n > TRUE {
            let node = self.nodes[n as usize];
            n = if assignment(&self.atoms[&node.var]) {
                node.hi
            } else {
                node.lo
            };
        }
        n == TRUE
    }

    /// Substitutes every atom by the function returned from `f`, recomputing
    /// the canonical form from scratch.
    pub fn map_atoms_with(
        &mut self,
        a: CanonicalBool,
        mut f: impl FnMut(&mut Canonicalizer, &Formula) -> CanonicalBool,
    ) -> CanonicalBool {
        let mut memo: HashMap<u32, u32> = HashMap::new();
        self.map_rec(a.0, &mut f, &mut memo)
    }

    fn map_rec(
        &mut self,
        n: u32,
        f: &mut impl FnMut(&mut Canonicalizer, &Formula) -> CanonicalBool,
        memo: &mut HashMap<u32, u32>,
    ) -> CanonicalBool {
        if n <= TRUE {
            return CanonicalBool(n);
        }
        if let Some(&r) = memo.get(&n) {
            return CanonicalBool(r);
        }
        let node = self.nodes[n as usize];
        let atom = self.atoms[&node.var].clone();
        let image = f(self, &atom);
        let lo = self.map_rec(node.lo, f, memo);
        let hi = self.map_rec(node.hi, f, memo);
        let r = self.ite(image, hi, lo);
        memo.insert(n, r.0);
        r
    }

    /// Substitutes every atom by a formula.
    pub fn map_atoms(
        &mut self,
        a: CanonicalBool,
        mut f: impl FnMut(&Formula) -> Formula,
    ) -> CanonicalBool {
        self.map_atoms_with(a, |c, atom| {
            let g = f(atom);
            c.canonicalize(&g)
        })
    }

    /// A representative formula: disjunction over the paths to `true`.
    /// Negative literals, which never arise from positive formulas, are
    /// written with the dual negation.
    pub fn to_formula(&self, a: CanonicalBool) -> Formula {
        let mut memo: HashMap<u32, Formula> = HashMap::new();
        self.to_formula_rec(a.0, &mut memo)
    }

    fn to_formula_rec(&self, n: u32, memo: &mut HashMap<u32, Formula>) -> Formula {
        match n {
            FALSE => return Formula::ff(),
            TRUE => return Formula::tt(),
            _ => {}
        }
        if let Some(f) = memo.get(&n) {
            return f.clone();
        }
        let node = self.nodes[n as usize];
        let atom = self.atoms[&node.var].clone();
        let hi = self.to_formula_rec(node.hi, memo);
        let lo = self.to_formula_rec(node.lo, memo);
        let monotone = self.leq(node.lo, node.hi);
        let f = if monotone {
            Formula::or_s(Formula::and_s(atom, hi), lo)
        } else {
            Formula::or_s(
                Formula::and_s(atom.clone(), hi),
                Formula::and_s(atom.negate(), lo),
            )
        };
        memo.insert(n, f.clone());
        f
    }

    fn leq(&self, a: u32, b: u32) -> bool {
        fn go(c: &Canonicalizer, a: u32, b: u32, memo: &mut HashMap<(u32, u32), bool>) -> bool {
            if a == FALSE || b == TRUE || a == b {
                return true;
            }
            if a == TRUE || b == FALSE {
                return false;
            }
            if let Some(&r) = memo.get(&(a, b)) {
                return r;
            }
            let var = c.nodes[a as usize].var.min(c.nodes[b as usize].var);
            let (a0, a1) = c.cofactors(a, var);
            let (b0, b1) = c.cofactors(b, var);
            let r = go(c, a0, b0, memo) && go(c, a1, b1, memo);
            memo.insert((a, b), r);
            r
        }
        go(self, a, b, &mut HashMap::new())
    }

    /// Printable form of a function.
    pub fn display(&self, a: CanonicalBool) -> String {
        self.to_formula(a).to_string()
    }
}

/// `a ∼ b`, using a fresh manager.
pub fn prop_equiv(a: &Formula, b: &Formula) -> bool {
    Canonicalizer::new().prop_equiv(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn canon(c: &mut Canonicalizer, s: &str) -> CanonicalBool {
        let f = parse(s).unwrap();
        c.canonicalize(&f)
    }

    #[test]
    fn temporal_atoms_are_opaque() {
        let mut c = Canonicalizer::new();
        assert_eq!(canon(&mut c, "F p & G q"), canon(&mut c, "G q & F p"));
        assert_ne!(canon(&mut c, "Y p"), canon(&mut c, "wY p"));
        assert_ne!(canon(&mut c, "F p"), canon(&mut c, "tt U (p | ff)"));
    }

    #[test]
    fn absorption_and_constants() {
        let mut c = Canonicalizer::new();
        assert_eq!(canon(&mut c, "p | (p & X q)"), canon(&mut c, "p"));
        let t = canon(&mut c, "p | tt");
        assert!(c.is_true(t));
        let f = canon(&mut c, "X p & ff");
        assert!(c.is_false(f));
        // p and !p are independent atoms
        let pn = canon(&mut c, "p & !p");
        assert!(!c.is_false(pn));
    }

    #[test]
    fn map_atoms_recanonicalizes() {
        let mut c = Canonicalizer::new();
        let a = canon(&mut c, "X p | X q");
        let xp = parse("X p").unwrap();
        let r = c.map_atoms(a, |f| if *f == xp { Formula::tt() } else { f.clone() });
        assert!(c.is_true(r));
    }

    #[test]
    fn to_formula_roundtrips() {
        let mut c = Canonicalizer::new();
        let a = canon(&mut c, "(p U q & r) | (X s & r) | G t");
        let f = c.to_formula(a);
        assert_eq!(c.canonicalize(&f), a);
    }

    #[test]
    fn eval_follows_assignment() {
        let mut c = Canonicalizer::new();
        let a = canon(&mut c, "p & (X q | r)");
        let truth = |names: &[&str]| {
            let names: Vec<Formula> = names.iter().map(|s| parse(s).unwrap()).collect();
            c.eval(a, |f| names.contains(f))
        };
        assert!(truth(&["p", "X q"]));
        assert!(!truth(&["X q", "r"]));
    }
}
