//! Seeded random formulas and lasso words.

use crate::formula::Formula;
use crate::lasso::{LassoWord, Letter};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct FormulaParams {
    pub props: Vec<String>,
    pub max_len: u64,
    pub max_psf: usize,
    /// Bound on `|μ(φ)| + |ν(φ)|`.
    pub max_fixpoints: usize,
    pub past: bool,
}

impl FormulaParams {
    pub fn new<S: AsRef<str>>(props: &[S], max_len: u64, max_psf: usize) -> Self {
        FormulaParams {
            props: props.iter().map(|s| s.as_ref().to_string()).collect(),
            max_len,
            max_psf,
            max_fixpoints: usize::MAX,
            past: true,
        }
    }

    pub fn fixpoints(mut self, bound: usize) -> Self {
        self.max_fixpoints = bound;
        self
    }

    pub fn future_only(mut self) -> Self {
        self.past = false;
        self
    }

    fn accepts(&self, f: &Formula) -> bool {
        f.len() <= self.max_len
            && f.psf().len() <= self.max_psf
            && f.mu_set().len() + f.nu_set().len() <= self.max_fixpoints
    }
}

const UNARY_FUTURE: &[&str] = &["X", "F", "G"];
const UNARY_PAST: &[&str] = &["Y", "wY", "O", "H"];
const BINARY_FUTURE: &[&str] = &["&", "|", "&", "|", "U", "W", "R", "M"];
const BINARY_PAST: &[&str] = &["S", "wS", "B", "wB"];

fn leaf(rng: &mut impl Rng, p: &FormulaParams) -> Formula {
    if p.props.is_empty() || rng.gen_ratio(1, 10) {
        return if rng.gen_bool(0.5) { Formula::tt() } else { Formula::ff() };
    }
    let name = p.props.choose(rng).expect("nonempty");
    if rng.gen_bool(0.7) {
        Formula::prop(name)
    } else {
        Formula::neg_prop(name)
    }
}

fn tree(rng: &mut impl Rng, p: &FormulaParams, size: u64) -> Formula {
    if size <= 1 {
        return leaf(rng, p);
    }
    let past = p.past && rng.gen_ratio(1, 3);
    if size == 2 || rng.gen_ratio(1, 3) {
        let ops = if past { UNARY_PAST } else { UNARY_FUTURE };
        let a = tree(rng, p, size - 1);
        return match *ops.choose(rng).expect("nonempty") {
            "X" => Formula::next(a),
            "F" => Formula::eventually(a),
            "G" => Formula::globally(a),
            "Y" => Formula::yesterday(a),
            "wY" => Formula::weak_yesterday(a),
            "O" => Formula::once(a),
            _ => Formula::historically(a),
        };
    }
    let ops = if past { BINARY_PAST } else { BINARY_FUTURE };
    let left = rng.gen_range(1..size - 1);
    let a = tree(rng, p, left);
    let b = tree(rng, p, size - 1 - left);
    match *ops.choose(rng).expect("nonempty") {
        "&" => Formula::and(a, b),
        "|" => Formula::or(a, b),
        "U" => Formula::until(a, b),
        "W" => Formula::weak_until(a, b),
        "R" => Formula::release(a, b),
        "M" => Formula::strong_release(a, b),
        "S" => Formula::since(a, b),
        "wS" => Formula::weak_since(a, b),
        "B" => Formula::back(a, b),
        _ => Formula::weak_back(a, b),
    }
}

/// A random formula within the bounds of `p`, resampled until it fits.
/// Sizes in the upper half of the range are drawn four times out of five.
pub fn random_formula(rng: &mut impl Rng, p: &FormulaParams) -> Formula {
    let max = p.max_len.max(1);
    loop {
        let size = if rng.gen_ratio(4, 5) {
            rng.gen_range((max + 1) / 2..=max)
        } else {
            rng.gen_range(1..=max)
        };
        let f = tree(rng, p, size);
        if p.accepts(&f) {
            return f;
        }
    }
}

#[derive(Clone, Debug)]
pub struct WordParams {
    pub props: Vec<String>,
    pub max_prefix: usize,
    pub max_period: usize,
}

impl WordParams {
    pub fn new<S: AsRef<str>>(props: &[S], max_prefix: usize, max_period: usize) -> Self {
        WordParams {
            props: props.iter().map(|s| s.as_ref().to_string()).collect(),
            max_prefix,
            max_period: max_period.max(1),
        }
    }
}

pub fn random_letter(rng: &mut impl Rng, props: &[String]) -> Letter {
    Letter::new(props.iter().filter(|_| rng.gen_bool(0.5)))
}

pub fn random_word(rng: &mut impl Rng, p: &WordParams) -> LassoWord {
    let u = rng.gen_range(0..=p.max_prefix);
    let v = rng.gen_range(1..=p.max_period);
    let prefix = (0..u).map(|_| random_letter(rng, &p.props)).collect();
    let period = (0..v).map(|_| random_letter(rng, &p.props)).collect();
    LassoWord::new(prefix, period).expect("period is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_respect_bounds() {
        let mut r = rng(1);
        let p = FormulaParams::new(&["p", "q"], 6, 2).fixpoints(2);
        for _ in 0..200 {
            let f = random_formula(&mut r, &p);
            assert!(f.len() <= 6 && f.psf().len() <= 2);
            assert!(f.mu_set().len() + f.nu_set().len() <= 2);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let p = FormulaParams::new(&["p"], 5, 1);
        let a: Vec<Formula> = (0..20).scan(rng(9), |r, _| Some(random_formula(r, &p))).collect();
        let b: Vec<Formula> = (0..20).scan(rng(9), |r, _| Some(random_formula(r, &p))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn words_respect_bounds() {
        let mut r = rng(3);
        let p = WordParams::new(&["p", "q"], 4, 4);
        for _ in 0..100 {
            let w = random_word(&mut r, &p);
            assert!(w.prefix_len() <= 4 && (1..=4).contains(&w.period_len()));
        }
    }
}
