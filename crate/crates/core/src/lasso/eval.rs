use super::LassoWord;
use crate::formula::{Formula, Node};
use std::collections::HashMap;
use std::fmt;

/// Eventually periodic Boolean sequence: `bits[t]` for `t < threshold +
/// period`, then repeating the last `period` entries. Constructed values are
/// canonical (minimal period, then minimal threshold), so `==` is equality of
/// sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicBitSeq {
    threshold: usize,
    period: usize,
    bits: Vec<bool>,
}

impl PeriodicBitSeq {
    pub fn new(threshold: usize, period: usize, bits: Vec<bool>) -> Self {
        assert!(period > 0 && bits.len() == threshold + period);
        let cycle = &bits[threshold..];
        let p = (1..=period)
            .find(|p| period % p == 0 && (0..period).all(|i| cycle[i] == cycle[i % p]))
            .unwrap_or(period);
        let mut t = threshold;
        while t > 0 && bits[t - 1] == bits[t - 1 + p] {
            t -= 1;
        }
        PeriodicBitSeq {
            threshold: t,
            period: p,
            bits: bits[..t + p].to_vec(),
        }
    }

    pub fn constant(value: bool) -> Self {
        PeriodicBitSeq::new(0, 1, vec![value])
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn value(&self, t: usize) -> bool {
        if t < self.bits.len() {
            self.bits[t]
        } else {
            self.bits[self.threshold + (t - self.threshold) % self.period]
        }
    }

    /// Whether the value is true at some position `>= t`.
    pub fn eventually_from(&self, t: usize) -> bool {
        let start = t.max(self.threshold);
        (t..start + self.period).any(|i| self.value(i))
    }

    /// Whether the value is true at every position `>= t`.
    pub fn always_from(&self, t: usize) -> bool {
        let start = t.max(self.threshold);
        (t..start + self.period).all(|i| self.value(i))
    }
}

impl fmt::Debug for PeriodicBitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |r: &[bool]| r.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(
            f,
            "{}({})^w",
            s(&self.bits[..self.threshold]),
            s(&self.bits[self.threshold..])
        )
    }
}

/// Working representation: period fixed to `|v|`, threshold free.
struct Seq {
    threshold: usize,
    bits: Vec<bool>,
    period: usize,
}

impl Seq {
    fn at(&self, t: usize) -> bool {
        if t < self.bits.len() {
            self.bits[t]
        } else {
            self.bits[self.threshold + (t - self.threshold) % self.period]
        }
    }

    fn tabulate(threshold: usize, period: usize, f: impl Fn(usize) -> bool) -> Seq {
        Seq {
            threshold,
            period,
            bits: (0..threshold + period).map(f).collect(),
        }
    }
}

/// Per-word evaluation context caching the sequence of every subformula.
pub struct Evaluator<'w> {
    word: &'w LassoWord,
    cache: HashMap<u32, Seq>,
}

#[derive(Clone, Copy)]
enum Fix {
    Least,
    Greatest,
}

impl<'w> Evaluator<'w> {
    pub fn new(word: &'w LassoWord) -> Self {
        Evaluator {
            word,
            cache: HashMap::new(),
        }
    }

    pub fn word(&self) -> &LassoWord {
        self.word
    }

    /// Truth sequence of `f` over all positions.
    pub fn eval(&mut self, f: &Formula) -> PeriodicBitSeq {
        self.compute(f);
        let s = &self.cache[&f.id()];
        PeriodicBitSeq::new(s.threshold, s.period, s.bits.clone())
    }

    /// `(w, t) ⊨ f`.
    pub fn holds(&mut self, f: &Formula, t: usize) -> bool {
        self.compute(f);
        self.cache[&f.id()].at(t)
    }

    fn compute(&mut self, f: &Formula) {
        if self.cache.contains_key(&f.id()) {
            return;
        }
        for k in f.children() {
            self.compute(&k);
        }
        let u = self.word.prefix_len();
        let p = self.word.period_len();
        let c = &self.cache;
        let get = |g: &Formula| &c[&g.id()];
        let seq = match f.node() {
            Node::True => Seq::tabulate(0, p, |_| true),
            Node::False => Seq::tabulate(0, p, |_| false),
            Node::Prop(a) => Seq::tabulate(u, p, |t| self.word.letter_at(t).contains(a)),
            Node::NegProp(a) => Seq::tabulate(u, p, |t| !self.word.letter_at(t).contains(a)),
            Node::And(a, b) => {
                let (x, y) = (get(a), get(b));
                Seq::tabulate(x.threshold.max(y.threshold), p, |t| x.at(t) && y.at(t))
            }
            Node::Or(a, b) => {
                let (x, y) = (get(a), get(b));
                Seq::tabulate(x.threshold.max(y.threshold), p, |t| x.at(t) || y.at(t))
            }
            Node::Next(a) => {
                let x = get(a);
                Seq::tabulate(x.threshold.saturating_sub(1), p, |t| x.at(t + 1))
            }
            Node::Yesterday(a) => {
                let x = get(a);
                Seq::tabulate(x.threshold + 1, p, |t| t > 0 && x.at(t - 1))
            }
            Node::WeakYesterday(a) => {
                let x = get(a);
                Seq::tabulate(x.threshold + 1, p, |t| t == 0 || x.at(t - 1))
            }
            Node::Until(a, b) => future(get(a), get(b), p, Fix::Least, |a, b, n| b || (a && n)),
            Node::WeakUntil(a, b) => {
                future(get(a), get(b), p, Fix::Greatest, |a, b, n| b || (a && n))
            }
            Node::Release(a, b) => {
                future(get(a), get(b), p, Fix::Greatest, |a, b, n| b && (a || n))
            }
            Node::StrongRelease(a, b) => {
                future(get(a), get(b), p, Fix::Least, |a, b, n| b && (a || n))
            }
            Node::Since(a, b) => past(get(a), get(b), p, |_, b| b, |a, b, prev| b || (a && prev)),
            Node::WeakSince(a, b) => {
                past(get(a), get(b), p, |a, b| a || b, |a, b, prev| b || (a && prev))
            }
            Node::Back(a, b) => past(
                get(a),
                get(b),
                p,
                |a, b| a && b,
                |a, b, prev| (a && b) || (b && prev),
            ),
            Node::WeakBack(a, b) => {
                past(get(a), get(b), p, |_, b| b, |a, b, prev| (a && b) || (b && prev))
            }
        };
        self.cache.insert(f.id(), seq);
    }
}

fn future(
    a: &Seq,
    b: &Seq,
    p: usize,
    fix: Fix,
    step: impl Fn(bool, bool, bool) -> bool,
) -> Seq {
    let t0 = a.threshold.max(b.threshold);
    let mut bits = vec![matches!(fix, Fix::Greatest); t0 + p];
    loop {
        let mut changed = false;
        for i in (0..p).rev() {
            let t = t0 + i;
            let next = if i + 1 < p { bits[t + 1] } else { bits[t0] };
            let v = step(a.at(t), b.at(t), next);
            if v != bits[t] {
                bits[t] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for t in (0..t0).rev() {
        bits[t] = step(a.at(t), b.at(t), bits[t + 1]);
    }
    Seq {
        threshold: t0,
        period: p,
        bits,
    }
}

fn past(
    a: &Seq,
    b: &Seq,
    p: usize,
    first: impl Fn(bool, bool) -> bool,
    step: impl Fn(bool, bool, bool) -> bool,
) -> Seq {
    // A one-bit monotone recurrence settles within two periods of its inputs.
    let threshold = a.threshold.max(b.threshold) + 2 * p;
    let mut bits = Vec::with_capacity(threshold + p);
    for t in 0..threshold + p {
        let v = if t == 0 {
            first(a.at(0), b.at(0))
        } else {
            step(a.at(t), b.at(t), bits[t - 1])
        };
        bits.push(v);
    }
    Seq {
        threshold,
        period: p,
        bits,
    }
}

/// Truth sequence of `f` over `w`.
pub fn eval(f: &Formula, w: &LassoWord) -> PeriodicBitSeq {
    Evaluator::new(w).eval(f)
}

/// `(w, t) ⊨ f`.
pub fn holds(f: &Formula, w: &LassoWord, t: usize) -> bool {
    Evaluator::new(w).holds(f, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn seq(f: &str, w: &str) -> PeriodicBitSeq {
        eval(&parse(f).unwrap(), &LassoWord::parse(w).unwrap())
    }

    #[test]
    fn since_example() {
        let w = LassoWord::parse("{q},{p} ; {p}").unwrap();
        assert!(holds(&parse("p S q").unwrap(), &w, 1));
        assert!(holds(&parse("p S q").unwrap(), &w, 9));
        assert!(!holds(&parse("p S q").unwrap(), &LassoWord::parse("{},{p} ; {p}").unwrap(), 1));
    }

    #[test]
    fn yesterday_at_origin() {
        let w = LassoWord::parse("; {}").unwrap();
        assert!(!holds(&parse("Y tt").unwrap(), &w, 0));
        assert!(holds(&parse("Y tt").unwrap(), &w, 1));
        assert!(holds(&parse("wY ff").unwrap(), &w, 0));
        assert!(!holds(&parse("wY ff").unwrap(), &w, 1));
    }

    #[test]
    fn canonical_form() {
        let s = seq("p", "{p},{} ; {p},{},{p},{}");
        assert_eq!(s.period(), 2);
        assert_eq!(s.threshold(), 0);
        assert_eq!(s, seq("p", "; {p},{}"));
        assert_eq!(seq("F p", "{},{} ; {p}"), PeriodicBitSeq::constant(true));
    }

    #[test]
    fn fixpoint_polarity() {
        assert!(!holds(&parse("p U q").unwrap(), &LassoWord::parse("; {p}").unwrap(), 0));
        assert!(holds(&parse("p W q").unwrap(), &LassoWord::parse("; {p}").unwrap(), 0));
        assert!(holds(&parse("ff R q").unwrap(), &LassoWord::parse("; {q}").unwrap(), 0));
        assert!(!holds(&parse("ff M q").unwrap(), &LassoWord::parse("; {q}").unwrap(), 0));
    }

    #[test]
    fn historically_weak_since() {
        let w = LassoWord::parse("{p},{p},{} ; {p}").unwrap();
        let h = parse("H p").unwrap();
        assert!(holds(&h, &w, 1));
        assert!(!holds(&h, &w, 2));
        assert!(!holds(&h, &w, 10));
    }
}
