//! Explicit deterministic ω-automata with state-based acceptance, their
//! products, and the cascade of a runner with a bed automaton.

mod dot;
mod hoa;
mod product;

pub use dot::to_dot;
pub use hoa::{from_hoa, to_hoa, HoaError};
pub use product::{cascade, rabin_conjunction, rabin_union, AcceptanceKind, BedAutomaton, Runner};

use crate::lasso::{Alphabet, LassoWord};
use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;
use thiserror::Error;

pub type StateId = usize;
pub type StateSet = BTreeSet<StateId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RabinPair {
    /// Visited finitely often.
    pub fin: StateSet,
    /// Visited infinitely often.
    pub inf: StateSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acceptance {
    /// Some state of the set is visited infinitely often.
    Buchi(StateSet),
    /// The set is visited finitely often.
    CoBuchi(StateSet),
    /// Some pair is satisfied. No pairs means reject everything.
    Rabin(Vec<RabinPair>),
}

impl Acceptance {
    /// Whether a run whose infinitely visited states are `inf` is accepting.
    pub fn accepts(&self, inf: &StateSet) -> bool {
        match self {
            Acceptance::Buchi(a) => !inf.is_disjoint(a),
            Acceptance::CoBuchi(a) => inf.is_disjoint(a),
            Acceptance::Rabin(pairs) => pairs
                .iter()
                .any(|p| inf.is_disjoint(&p.fin) && !inf.is_disjoint(&p.inf)),
        }
    }

    pub fn pair_count(&self) -> usize {
        match self {
            Acceptance::Rabin(pairs) => pairs.len(),
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state limit of {limit} exceeded while building {stage}")]
    StateLimit { limit: usize, stage: String },
    #[error("alphabet mismatch between product components")]
    AlphabetMismatch,
    #[error("a product needs at least one component")]
    EmptyProduct,
    #[error("component has the wrong acceptance type for this product")]
    AcceptanceMismatch,
}

/// Deterministic, complete automaton over `2^AP`. `transitions[q][i]` is the
/// successor of `q` under letter index `i` of the alphabet.
#[derive(Clone, Debug)]
pub struct OmegaAutomaton {
    pub alphabet: Alphabet,
    pub labels: Vec<String>,
    pub initial: StateId,
    pub transitions: Vec<Vec<StateId>>,
    pub acceptance: Acceptance,
}

impl OmegaAutomaton {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn step(&self, q: StateId, letter: usize) -> StateId {
        self.transitions[q][letter]
    }

    /// States visited infinitely often by the run on `w`.
    pub fn infinity_set(&self, w: &LassoWord) -> StateSet {
        let mut q = self.initial;
        for l in w.prefix() {
            q = self.step(q, self.alphabet.index_of(l));
        }
        let period: Vec<usize> = w.period().iter().map(|l| self.alphabet.index_of(l)).collect();
        // Run whole periods until the state at a period boundary repeats.
        let mut seen: HashMap<StateId, usize> = HashMap::new();
        let mut boundaries = Vec::new();
        while !seen.contains_key(&q) {
            seen.insert(q, boundaries.len());
            boundaries.push(q);
            for &i in &period {
                q = self.step(q, i);
            }
        }
        let mut inf = StateSet::new();
        for &start in &boundaries[seen[&q]..] {
            let mut s = start;
            for &i in &period {
                inf.insert(s);
                s = self.step(s, i);
            }
        }
        inf
    }

    pub fn accepts(&self, w: &LassoWord) -> bool {
        self.acceptance.accepts(&self.infinity_set(w))
    }

    /// Same language as a Rabin automaton.
    pub fn to_rabin(&self) -> OmegaAutomaton {
        let all: StateSet = (0..self.state_count()).collect();
        let acceptance = match &self.acceptance {
            Acceptance::Buchi(a) => Acceptance::Rabin(vec![RabinPair {
                fin: StateSet::new(),
                inf: a.clone(),
            }]),
            Acceptance::CoBuchi(a) => Acceptance::Rabin(vec![RabinPair {
                fin: a.clone(),
                inf: all,
            }]),
            Acceptance::Rabin(p) => Acceptance::Rabin(p.clone()),
        };
        OmegaAutomaton {
            acceptance,
            ..self.clone()
        }
    }

    /// Every state has exactly one successor per letter and targets exist.
    pub fn is_deterministic_complete(&self) -> bool {
        let n = self.state_count();
        self.initial < n
            && self.labels.len() == n
            && self.transitions.iter().all(|row| {
                row.len() == self.alphabet.letter_count() && row.iter().all(|&t| t < n)
            })
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> StateSet {
        let mut seen = StateSet::new();
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            if seen.insert(q) {
                stack.extend(self.transitions[q].iter().copied());
            }
        }
        seen
    }
}

/// Breadth-first exploration of a deterministic system over `letters`
/// letters. Returns the discovered keys in order and the transition table.
pub(crate) fn explore<K: Clone + Eq + Hash, E>(
    initial: K,
    letters: usize,
    limit: usize,
    stage: &str,
    mut step: impl FnMut(&K, usize) -> Result<K, E>,
) -> Result<(Vec<K>, Vec<Vec<StateId>>), E>
where
    E: From<AutomatonError>,
{
    let mut index: HashMap<K, StateId> = HashMap::new();
    let mut keys = vec![initial.clone()];
    index.insert(initial, 0);
    let mut transitions: Vec<Vec<StateId>> = Vec::new();
    let mut next = 0;
    while next < keys.len() {
        let key = keys[next].clone();
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let succ = step(&key, l)?;
            let id = match index.get(&succ) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    if id >= limit {
                        return Err(AutomatonError::StateLimit {
                            limit,
                            stage: stage.to_string(),
                        }
                        .into());
                    }
                    index.insert(succ.clone(), id);
                    keys.push(succ);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
        next += 1;
    }
    Ok((keys, transitions))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Büchi automaton for `G F p` over `{p}`.
    fn gf_p() -> OmegaAutomaton {
        OmegaAutomaton {
            alphabet: Alphabet::new(["p"]),
            labels: vec!["wait".into(), "seen".into()],
            initial: 0,
            transitions: vec![vec![0, 1], vec![0, 1]],
            acceptance: Acceptance::Buchi([1].into_iter().collect()),
        }
    }

    #[test]
    fn lasso_acceptance() {
        let a = gf_p();
        assert!(a.accepts(&LassoWord::parse("; {},{p}").unwrap()));
        assert!(!a.accepts(&LassoWord::parse("{p},{p} ; {}").unwrap()));
        assert!(a.is_deterministic_complete());
    }

    #[test]
    fn rabin_conversion_preserves_language() {
        let a = gf_p();
        let co = OmegaAutomaton {
            acceptance: Acceptance::CoBuchi([0].into_iter().collect()),
            ..gf_p()
        };
        for w in ["; {},{p}", "{p} ; {}", "; {p}", "{} ; {p},{},{}"] {
            let w = LassoWord::parse(w).unwrap();
            assert_eq!(a.accepts(&w), a.to_rabin().accepts(&w));
            assert_eq!(co.accepts(&w), co.to_rabin().accepts(&w));
        }
    }

    #[test]
    fn empty_rabin_rejects() {
        let a = OmegaAutomaton {
            acceptance: Acceptance::Rabin(vec![]),
            ..gf_p()
        };
        assert!(!a.accepts(&LassoWord::parse("; {p}").unwrap()));
    }
}
