//! Hash-consed pLTL formulas in negation normal form.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

/// Syntax tree node. Children are interned [`Formula`] handles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Prop(Arc<str>),
    NegProp(Arc<str>),
    And(Formula, Formula),
    Or(Formula, Formula),
    Next(Formula),
    Until(Formula, Formula),
    WeakUntil(Formula, Formula),
    Release(Formula, Formula),
    StrongRelease(Formula, Formula),
    Yesterday(Formula),
    WeakYesterday(Formula),
    Since(Formula, Formula),
    WeakSince(Formula, Formula),
    Back(Formula, Formula),
    WeakBack(Formula, Formula),
}

/// Operator tag of a node, ignoring its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    True,
    False,
    Prop,
    NegProp,
    And,
    Or,
    Next,
    Until,
    WeakUntil,
    Release,
    StrongRelease,
    Yesterday,
    WeakYesterday,
    Since,
    WeakSince,
    Back,
    WeakBack,
}

impl Op {
    pub fn is_past(self) -> bool {
        matches!(
            self,
            Op::Yesterday | Op::WeakYesterday | Op::Since | Op::WeakSince | Op::Back | Op::WeakBack
        )
    }

    pub fn is_future(self) -> bool {
        matches!(
            self,
            Op::Next | Op::Until | Op::WeakUntil | Op::Release | Op::StrongRelease
        )
    }

    pub fn is_boolean(self) -> bool {
        matches!(self, Op::And | Op::Or)
    }
}

struct Inner {
    id: u32,
    node: Node,
    future_size: u64,
    past_size: u64,
}

/// Interned formula. Equality and hashing are by identity, which coincides
/// with structural equality because every node is hash-consed.
#[derive(Clone)]
pub struct Formula(Arc<Inner>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Ordered by interning order.
impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

struct Interner {
    table: HashMap<Node, Formula>,
    next_id: u32,
}

static INTERNER: LazyLock<Mutex<Interner>> = LazyLock::new(|| {
    Mutex::new(Interner {
        table: HashMap::new(),
        next_id: 0,
    })
});

impl Formula {
    /// Interns `node`, returning the unique handle for it.
    pub fn intern(node: Node) -> Formula {
        let mut interner = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = interner.table.get(&node) {
            return f.clone();
        }
        let (future_size, past_size) = sizes_of(&node);
        let id = interner.next_id;
        interner.next_id = interner.next_id.checked_add(1).expect("formula interner overflow");
        let f = Formula(Arc::new(Inner {
            id,
            node: node.clone(),
            future_size,
            past_size,
        }));
        interner.table.insert(node, f.clone());
        f
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn op(&self) -> Op {
        match self.node() {
            Node::True => Op::True,
            Node::False => Op::False,
            Node::Prop(_) => Op::Prop,
            Node::NegProp(_) => Op::NegProp,
            Node::And(..) => Op::And,
            Node::Or(..) => Op::Or,
            Node::Next(_) => Op::Next,
            Node::Until(..) => Op::Until,
            Node::WeakUntil(..) => Op::WeakUntil,
            Node::Release(..) => Op::Release,
            Node::StrongRelease(..) => Op::StrongRelease,
            Node::Yesterday(_) => Op::Yesterday,
            Node::WeakYesterday(_) => Op::WeakYesterday,
            Node::Since(..) => Op::Since,
            Node::WeakSince(..) => Op::WeakSince,
            Node::Back(..) => Op::Back,
            Node::WeakBack(..) => Op::WeakBack,
        }
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<Formula> {
        match self.node() {
            Node::True | Node::False | Node::Prop(_) | Node::NegProp(_) => vec![],
            Node::Next(a) | Node::Yesterday(a) | Node::WeakYesterday(a) => vec![a.clone()],
            Node::And(a, b)
            | Node::Or(a, b)
            | Node::Until(a, b)
            | Node::WeakUntil(a, b)
            | Node::Release(a, b)
            | Node::StrongRelease(a, b)
            | Node::Since(a, b)
            | Node::WeakSince(a, b)
            | Node::Back(a, b)
            | Node::WeakBack(a, b) => vec![a.clone(), b.clone()],
        }
    }

    /// Builds a node with operator `op` over `kids`. Panics on arity mismatch
    /// or on leaf operators.
    pub fn with_op(op: Op, kids: &[Formula]) -> Formula {
        let un = || kids[0].clone();
        let bin = || (kids[0].clone(), kids[1].clone());
        let expected = match op {
            Op::True | Op::False | Op::Prop | Op::NegProp => 0,
            Op::Next | Op::Yesterday | Op::WeakYesterday => 1,
            _ => 2,
        };
        assert_eq!(kids.len(), expected, "arity mismatch for {op:?}");
        let node = match op {
            Op::True => Node::True,
            Op::False => Node::False,
            Op::Prop | Op::NegProp => panic!("propositions carry a name"),
            Op::Next => Node::Next(un()),
            Op::Yesterday => Node::Yesterday(un()),
            Op::WeakYesterday => Node::WeakYesterday(un()),
            Op::And => {
                let (a, b) = bin();
                Node::And(a, b)
            }
            Op::Or => {
                let (a, b) = bin();
                Node::Or(a, b)
            }
            Op::Until => {
                let (a, b) = bin();
                Node::Until(a, b)
            }
            Op::WeakUntil => {
                let (a, b) = bin();
                Node::WeakUntil(a, b)
            }
            Op::Release => {
                let (a, b) = bin();
                Node::Release(a, b)
            }
            Op::StrongRelease => {
                let (a, b) = bin();
                Node::StrongRelease(a, b)
            }
            Op::Since => {
                let (a, b) = bin();
                Node::Since(a, b)
            }
            Op::WeakSince => {
                let (a, b) = bin();
                Node::WeakSince(a, b)
            }
            Op::Back => {
                let (a, b) = bin();
                Node::Back(a, b)
            }
            Op::WeakBack => {
                let (a, b) = bin();
                Node::WeakBack(a, b)
            }
        };
        Formula::intern(node)
    }

    /// Same operator as `self`, new children.
    pub fn rebuild(&self, kids: &[Formula]) -> Formula {
        match self.node() {
            Node::True | Node::False | Node::Prop(_) | Node::NegProp(_) => self.clone(),
            _ => Formula::with_op(self.op(), kids),
        }
    }

    pub fn tt() -> Formula {
        Formula::intern(Node::True)
    }
    pub fn ff() -> Formula {
        Formula::intern(Node::False)
    }
    pub fn prop(name: &str) -> Formula {
        Formula::intern(Node::Prop(name.into()))
    }
    pub fn neg_prop(name: &str) -> Formula {
        Formula::intern(Node::NegProp(name.into()))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::And(a, b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::Or(a, b))
    }
    pub fn next(a: Formula) -> Formula {
        Formula::intern(Node::Next(a))
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::Until(a, b))
    }
    pub fn weak_until(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::WeakUntil(a, b))
    }
    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::Release(a, b))
    }
    pub fn strong_release(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::StrongRelease(a, b))
    }
    pub fn yesterday(a: Formula) -> Formula {
        Formula::intern(Node::Yesterday(a))
    }
    pub fn weak_yesterday(a: Formula) -> Formula {
        Formula::intern(Node::WeakYesterday(a))
    }
    pub fn since(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::Since(a, b))
    }
    pub fn weak_since(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::WeakSince(a, b))
    }
    pub fn back(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::Back(a, b))
    }
    pub fn weak_back(a: Formula, b: Formula) -> Formula {
        Formula::intern(Node::WeakBack(a, b))
    }
    /// `F a`, i.e. `tt U a`.
    pub fn eventually(a: Formula) -> Formula {
        Formula::until(Formula::tt(), a)
    }
    /// `G a`, i.e. `a W ff`.
    pub fn globally(a: Formula) -> Formula {
        Formula::weak_until(a, Formula::ff())
    }
    /// `O a`, i.e. `tt S a`.
    pub fn once(a: Formula) -> Formula {
        Formula::since(Formula::tt(), a)
    }
    /// `H a`, i.e. `a wS ff`.
    pub fn historically(a: Formula) -> Formula {
        Formula::weak_since(a, Formula::ff())
    }

    /// Conjunction that folds the constants.
    pub fn and_s(a: Formula, b: Formula) -> Formula {
        match (a.node(), b.node()) {
            (Node::False, _) | (_, Node::False) => Formula::ff(),
            (Node::True, _) => b,
            (_, Node::True) => a,
            _ if a == b => a,
            _ => Formula::and(a, b),
        }
    }

    /// Disjunction that folds the constants.
    pub fn or_s(a: Formula, b: Formula) -> Formula {
        match (a.node(), b.node()) {
            (Node::True, _) | (_, Node::True) => Formula::tt(),
            (Node::False, _) => b,
            (_, Node::False) => a,
            _ if a == b => a,
            _ => Formula::or(a, b),
        }
    }

    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().fold(Formula::tt(), Formula::and_s)
    }

    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().fold(Formula::ff(), Formula::or_s)
    }

    pub fn is_true(&self) -> bool {
        matches!(self.node(), Node::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.node(), Node::False)
    }

    pub fn is_past(&self) -> bool {
        self.op().is_past()
    }

    pub fn is_boolean(&self) -> bool {
        self.op().is_boolean()
    }

    /// `p` or `!p`.
    pub fn is_propositional(&self) -> bool {
        matches!(self.node(), Node::Prop(_) | Node::NegProp(_))
    }

    /// Neither a leaf nor Boolean-rooted.
    pub fn is_temporal(&self) -> bool {
        let op = self.op();
        op.is_past() || op.is_future()
    }

    /// Atoms of the propositional abstraction: propositional or temporal.
    pub fn is_atom(&self) -> bool {
        self.is_propositional() || self.is_temporal()
    }

    /// `(n, m)`: future plus propositional node count, and past node count,
    /// over the syntax tree.
    pub fn size(&self) -> (u64, u64) {
        (self.0.future_size, self.0.past_size)
    }

    /// `n + m`.
    pub fn len(&self) -> u64 {
        self.0.future_size + self.0.past_size
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All distinct subformulae including `self`, children before parents.
    pub fn subformulae(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        fn go(f: &Formula, seen: &mut BTreeSet<u32>, out: &mut Vec<Formula>) {
            if !seen.insert(f.id()) {
                return;
            }
            for c in f.children() {
                go(&c, seen, out);
            }
            out.push(f.clone());
        }
        go(self, &mut seen, &mut out);
        out
    }

    fn collect(&self, keep: impl Fn(&Formula) -> bool) -> BTreeSet<Formula> {
        self.subformulae().into_iter().filter(|f| keep(f)).collect()
    }

    /// Propositional and temporal subformulae.
    pub fn sff(&self) -> BTreeSet<Formula> {
        self.collect(Formula::is_atom)
    }

    /// Past-rooted subformulae.
    pub fn psf(&self) -> BTreeSet<Formula> {
        self.collect(Formula::is_past)
    }

    /// `U`- and `M`-rooted subformulae.
    pub fn mu_set(&self) -> BTreeSet<Formula> {
        self.collect(|f| matches!(f.op(), Op::Until | Op::StrongRelease))
    }

    /// `W`- and `R`-rooted subformulae.
    pub fn nu_set(&self) -> BTreeSet<Formula> {
        self.collect(|f| matches!(f.op(), Op::WeakUntil | Op::Release))
    }

    /// Proposition names occurring in the formula, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        self.subformulae()
            .into_iter()
            .filter_map(|f| match f.node() {
                Node::Prop(p) | Node::NegProp(p) => Some(p.to_string()),
                _ => None,
            })
            .collect()
    }

    /// Future operators restricted to `X`, `U`, `M`.
    pub fn is_mu_fragment(&self) -> bool {
        self.subformulae()
            .iter()
            .all(|f| !matches!(f.op(), Op::WeakUntil | Op::Release))
    }

    /// Future operators restricted to `X`, `W`, `R`.
    pub fn is_nu_fragment(&self) -> bool {
        self.subformulae()
            .iter()
            .all(|f| !matches!(f.op(), Op::Until | Op::StrongRelease))
    }

    /// NNF of the negation, by pushing duals to the leaves.
    pub fn negate(&self) -> Formula {
        let mut memo = HashMap::new();
        negate_memo(self, &mut memo)
    }
}

fn negate_memo(f: &Formula, memo: &mut HashMap<u32, Formula>) -> Formula {
    if let Some(r) = memo.get(&f.id()) {
        return r.clone();
    }
    let mut n = |g: &Formula| negate_memo(g, memo);
    let r = match f.node() {
        Node::True => Formula::ff(),
        Node::False => Formula::tt(),
        Node::Prop(p) => Formula::intern(Node::NegProp(p.clone())),
        Node::NegProp(p) => Formula::intern(Node::Prop(p.clone())),
        Node::And(a, b) => Formula::or(n(a), n(b)),
        Node::Or(a, b) => Formula::and(n(a), n(b)),
        Node::Next(a) => Formula::next(n(a)),
        Node::Until(a, b) => Formula::release(n(a), n(b)),
        Node::Release(a, b) => Formula::until(n(a), n(b)),
        Node::WeakUntil(a, b) => Formula::strong_release(n(a), n(b)),
        Node::StrongRelease(a, b) => Formula::weak_until(n(a), n(b)),
        Node::Yesterday(a) => Formula::weak_yesterday(n(a)),
        Node::WeakYesterday(a) => Formula::yesterday(n(a)),
        Node::Since(a, b) => Formula::weak_back(n(a), n(b)),
        Node::WeakBack(a, b) => Formula::since(n(a), n(b)),
        Node::WeakSince(a, b) => Formula::back(n(a), n(b)),
        Node::Back(a, b) => Formula::weak_since(n(a), n(b)),
    };
    memo.insert(f.id(), r.clone());
    r
}

fn sizes_of(node: &Node) -> (u64, u64) {
    let (own_future, own_past) = match node {
        Node::True | Node::False | Node::And(..) | Node::Or(..) => (0, 0),
        Node::Prop(_) | Node::NegProp(_) => (1, 0),
        Node::Next(_)
        | Node::Until(..)
        | Node::WeakUntil(..)
        | Node::Release(..)
        | Node::StrongRelease(..) => (1, 0),
        _ => (0, 1),
    };
    let kids: Vec<&Formula> = match node {
        Node::True | Node::False | Node::Prop(_) | Node::NegProp(_) => vec![],
        Node::Next(a) | Node::Yesterday(a) | Node::WeakYesterday(a) => vec![a],
        Node::And(a, b)
        | Node::Or(a, b)
        | Node::Until(a, b)
        | Node::WeakUntil(a, b)
        | Node::Release(a, b)
        | Node::StrongRelease(a, b)
        | Node::Since(a, b)
        | Node::WeakSince(a, b)
        | Node::Back(a, b)
        | Node::WeakBack(a, b) => vec![a, b],
    };
    kids.iter().fold((own_future, own_past), |(n, m), k| {
        (n.saturating_add(k.0.future_size), m.saturating_add(k.0.past_size))
    })
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    write!(f, "{g}")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            write!(f, "(")?;
            write_operand(f, a)?;
            write!(f, " {op} ")?;
            write_operand(f, b)?;
            write!(f, ")")
        };
        match self.node() {
            Node::True => write!(f, "tt"),
            Node::False => write!(f, "ff"),
            Node::Prop(p) => write!(f, "{p}"),
            Node::NegProp(p) => write!(f, "!{p}"),
            Node::And(a, b) => bin(f, a, "&", b),
            Node::Or(a, b) => bin(f, a, "|", b),
            Node::Next(a) => write!(f, "X {a}"),
            Node::Yesterday(a) => write!(f, "Y {a}"),
            Node::WeakYesterday(a) => write!(f, "wY {a}"),
            Node::Until(a, b) if a.is_true() => write!(f, "F {b}"),
            Node::WeakUntil(a, b) if b.is_false() => write!(f, "G {a}"),
            Node::Since(a, b) if a.is_true() => write!(f, "O {b}"),
            Node::WeakSince(a, b) if b.is_false() => write!(f, "H {a}"),
            Node::Until(a, b) => bin(f, a, "U", b),
            Node::WeakUntil(a, b) => bin(f, a, "W", b),
            Node::Release(a, b) => bin(f, a, "R", b),
            Node::StrongRelease(a, b) => bin(f, a, "M", b),
            Node::Since(a, b) => bin(f, a, "S", b),
            Node::WeakSince(a, b) => bin(f, a, "wS", b),
            Node::Back(a, b) => bin(f, a, "B", b),
            Node::WeakBack(a, b) => bin(f, a, "wB", b),
        }
    }
}

/// Ordered set of formulas, used for `C`, `M`, `N` and their rewrites.
pub type FormulaSet = BTreeSet<Formula>;

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }
    fn q() -> Formula {
        Formula::prop("q")
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let a = Formula::until(p(), q());
        let b = Formula::until(p(), q());
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
        assert_ne!(a, Formula::until(q(), p()));
    }

    #[test]
    fn size_counts_future_and_past_separately() {
        let f = Formula::next(Formula::since(p(), Formula::next(q())));
        assert_eq!(f.size(), (4, 1));
    }

    #[test]
    fn sff_excludes_boolean_roots_and_constants() {
        let f = Formula::and(p(), Formula::until(Formula::tt(), q()));
        let sff = f.sff();
        assert_eq!(sff.len(), 3);
        assert!(sff.contains(&p()));
        assert!(sff.contains(&q()));
        assert!(!sff.contains(&f));
    }

    #[test]
    fn mu_nu_sets() {
        let g = Formula::globally(Formula::eventually(p()));
        assert_eq!(g.mu_set().len(), 1);
        assert_eq!(g.nu_set().len(), 1);
        assert!(g.nu_set().contains(&g));
    }

    #[test]
    fn negation_dualises() {
        let f = Formula::since(p(), q());
        assert_eq!(f.negate(), Formula::weak_back(Formula::neg_prop("p"), Formula::neg_prop("q")));
        let g = Formula::weak_since(p(), q());
        assert_eq!(g.negate(), Formula::back(Formula::neg_prop("p"), Formula::neg_prop("q")));
        assert_eq!(g.negate().negate(), g);
    }

    #[test]
    fn sugar_prints() {
        assert_eq!(Formula::globally(Formula::eventually(p())).to_string(), "G F p");
        assert_eq!(Formula::historically(p()).to_string(), "H p");
        assert_eq!(Formula::once(p()).to_string(), "O p");
    }
}
