//! Reference semantics by unrolling: the lasso is expanded to a finite
//! prefix with a back edge, past operators are computed forwards along the
//! prefix and future operators as fixpoints over the resulting graph. The
//! number of unrolled periods doubles until two expansions agree.

#![allow(dead_code)]

use pltl2dra::{Formula, FormulaSet, LassoWord, Node};
use std::collections::HashMap;

pub struct Naive {
    len: usize,
    period: usize,
    values: HashMap<u32, Vec<bool>>,
}

impl Naive {
    pub fn new(f: &Formula, w: &LassoWord) -> Self {
        Self::for_all(std::slice::from_ref(f), w)
    }

    pub fn for_all(fs: &[Formula], w: &LassoWord) -> Self {
        let mut reps = 2;
        loop {
            let a = unroll(fs, w, reps);
            let b = unroll(fs, w, 2 * reps);
            if agree(&a, &b) {
                return a;
            }
            reps *= 2;
            assert!(reps < 1 << 12, "unrolling did not converge");
        }
    }

    fn index(&self, t: usize) -> usize {
        if t < self.len {
            t
        } else {
            let start = self.len - self.period;
            start + (t - start) % self.period
        }
    }

    pub fn value(&self, f: &Formula, t: usize) -> bool {
        self.values[&f.id()][self.index(t)]
    }

    /// Positions reachable from `t` in the unrolled graph.
    fn from(&self, f: &Formula, t: usize) -> &[bool] {
        &self.values[&f.id()][self.index(t).min(self.len - self.period)..]
    }

    pub fn sometime_from(&self, f: &Formula, t: usize) -> bool {
        self.from(f, t).iter().any(|&b| b)
    }

    pub fn always_from(&self, f: &Formula, t: usize) -> bool {
        self.from(f, t).iter().all(|&b| b)
    }

    pub fn infinitely_often(&self, f: &Formula) -> bool {
        self.values[&f.id()][self.len - self.period..].iter().any(|&b| b)
    }

    pub fn eventually_always(&self, f: &Formula) -> bool {
        self.values[&f.id()][self.len - self.period..].iter().all(|&b| b)
    }
}

fn agree(a: &Naive, b: &Naive) -> bool {
    a.values.iter().all(|(id, va)| {
        let vb = &b.values[id];
        va[..] == vb[..a.len]
            && va[a.len - a.period..] == vb[b.len - b.period..]
    })
}

fn unroll(fs: &[Formula], w: &LassoWord, reps: usize) -> Naive {
    let period = w.period_len();
    let len = w.prefix_len() + reps * period;
    let succ = |i: usize| if i + 1 < len { i + 1 } else { len - period };
    let mut values: HashMap<u32, Vec<bool>> = HashMap::new();
    for root in fs {
        for sub in root.subformulae() {
            if values.contains_key(&sub.id()) {
                continue;
            }
            let get = |g: &Formula| values[&g.id()].clone();
            let v: Vec<bool> = match sub.node() {
                Node::True => vec![true; len],
                Node::False => vec![false; len],
                Node::Prop(p) => (0..len).map(|i| w.letter_at(i).contains(p)).collect(),
                Node::NegProp(p) => (0..len).map(|i| !w.letter_at(i).contains(p)).collect(),
                Node::And(a, b) => {
                    let (a, b) = (get(a), get(b));
                    (0..len).map(|i| a[i] && b[i]).collect()
                }
                Node::Or(a, b) => {
                    let (a, b) = (get(a), get(b));
                    (0..len).map(|i| a[i] || b[i]).collect()
                }
                Node::Next(a) => {
                    let a = get(a);
                    (0..len).map(|i| a[succ(i)]).collect()
                }
                Node::Until(a, b) => fixpoint(len, false, succ, &get(a), &get(b), |a, b, n| b || (a && n)),
                Node::WeakUntil(a, b) => fixpoint(len, true, succ, &get(a), &get(b), |a, b, n| b || (a && n)),
                Node::Release(a, b) => fixpoint(len, true, succ, &get(a), &get(b), |a, b, n| b && (a || n)),
                Node::StrongRelease(a, b) => {
                    fixpoint(len, false, succ, &get(a), &get(b), |a, b, n| b && (a || n))
                }
                Node::Yesterday(a) => {
                    let a = get(a);
                    (0..len).map(|i| i > 0 && a[i - 1]).collect()
                }
                Node::WeakYesterday(a) => {
                    let a = get(a);
                    (0..len).map(|i| i == 0 || a[i - 1]).collect()
                }
                Node::Since(a, b) => history(len, false, &get(a), &get(b), |a, b, p| b || (a && p)),
                Node::WeakSince(a, b) => history(len, true, &get(a), &get(b), |a, b, p| b || (a && p)),
                Node::Back(a, b) => history(len, false, &get(a), &get(b), |a, b, p| b && (a || p)),
                Node::WeakBack(a, b) => history(len, true, &get(a), &get(b), |a, b, p| b && (a || p)),
            };
            values.insert(sub.id(), v);
        }
    }
    Naive { len, period, values }
}

/// Least (`init = false`) or greatest (`init = true`) solution of
/// `x[i] = step(a[i], b[i], x[succ i])`.
fn fixpoint(
    len: usize,
    init: bool,
    succ: impl Fn(usize) -> usize,
    a: &[bool],
    b: &[bool],
    step: impl Fn(bool, bool, bool) -> bool,
) -> Vec<bool> {
    let mut x = vec![init; len];
    loop {
        let mut changed = false;
        for i in (0..len).rev() {
            let v = step(a[i], b[i], x[succ(i)]);
            if v != x[i] {
                x[i] = v;
                changed = true;
            }
        }
        if !changed {
            return x;
        }
    }
}

/// `x[i] = step(a[i], b[i], x[i - 1])`, with `x[-1] = before`.
fn history(len: usize, before: bool, a: &[bool], b: &[bool], step: impl Fn(bool, bool, bool) -> bool) -> Vec<bool> {
    let mut x = Vec::with_capacity(len);
    let mut prev = before;
    for i in 0..len {
        prev = step(a[i], b[i], prev);
        x.push(prev);
    }
    x
}

pub fn naive_holds(f: &Formula, w: &LassoWord, t: usize) -> bool {
    Naive::new(f, w).value(f, t)
}

/// `F`, `GF` over `μ(φ)` and `G`, `FG` over `ν(φ)`, from position `t`.
pub struct NaiveLimits {
    pub f: FormulaSet,
    pub gf: FormulaSet,
    pub g: FormulaSet,
    pub fg: FormulaSet,
}

pub fn naive_limits(phi: &Formula, w: &LassoWord, t: usize) -> NaiveLimits {
    let mu: Vec<Formula> = phi.mu_set().into_iter().collect();
    let nu: Vec<Formula> = phi.nu_set().into_iter().collect();
    let all: Vec<Formula> = mu.iter().chain(&nu).cloned().collect();
    let n = Naive::for_all(&all, w);
    NaiveLimits {
        f: mu.iter().filter(|x| n.sometime_from(x, t)).cloned().collect(),
        gf: mu.iter().filter(|x| n.infinitely_often(x)).cloned().collect(),
        g: nu.iter().filter(|x| n.always_from(x, t)).cloned().collect(),
        fg: nu.iter().filter(|x| n.eventually_always(x)).cloned().collect(),
    }
}

pub fn subsets(s: &FormulaSet) -> Vec<FormulaSet> {
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
