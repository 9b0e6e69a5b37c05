use super::{explore, Acceptance, AutomatonError, OmegaAutomaton, RabinPair, StateId, StateSet};
use crate::lasso::Alphabet;
use std::hash::Hash;

/// Deterministic automaton without acceptance whose states carry data that
/// runners read.
#[derive(Clone, Debug)]
pub struct BedAutomaton<L> {
    pub alphabet: Alphabet,
    pub labels: Vec<L>,
    pub initial: StateId,
    pub transitions: Vec<Vec<StateId>>,
}

impl<L> BedAutomaton<L> {
    pub fn state_count(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcceptanceKind {
    Buchi,
    CoBuchi,
}

/// Automaton whose transitions also read the successor state of a bed.
pub trait Runner {
    type State: Clone + Eq + Hash;
    type BedLabel;

    fn initial(&mut self) -> Self::State;

    /// Successor of `state` on letter index `letter`, where `bed_next` is the
    /// label of the bed state reached by the same letter.
    fn step(&mut self, state: &Self::State, bed_next: &Self::BedLabel, letter: usize) -> Self::State;

    fn kind(&self) -> AcceptanceKind;

    /// Membership in the acceptance set.
    fn marked(&mut self, state: &Self::State) -> bool;

    fn describe(&mut self, state: &Self::State) -> String;
}

/// `B ⋉ R`: states are pairs (runner state, bed state). On a letter the bed
/// moves first and the runner reads the new bed label. Acceptance is the
/// runner's set lifted to pairs.
pub fn cascade<R: Runner>(
    bed: &BedAutomaton<R::BedLabel>,
    runner: &mut R,
    limit: usize,
) -> Result<OmegaAutomaton, AutomatonError> {
    let letters = bed.alphabet.letter_count();
    let start = (runner.initial(), bed.initial);
    let (keys, transitions) = explore(start, letters, limit, "cascade", |(q, s), l| {
        let s2 = bed.transitions[*s][l];
        Ok::<_, AutomatonError>((runner.step(q, &bed.labels[s2], l), s2))
    })?;
    let mut marked = StateSet::new();
    let mut labels = Vec::with_capacity(keys.len());
    for (i, (q, s)) in keys.iter().enumerate() {
        if runner.marked(q) {
            marked.insert(i);
        }
        labels.push(format!("{} / b{}", runner.describe(q), s));
    }
    let acceptance = match runner.kind() {
        AcceptanceKind::Buchi => Acceptance::Buchi(marked),
        AcceptanceKind::CoBuchi => Acceptance::CoBuchi(marked),
    };
    Ok(OmegaAutomaton {
        alphabet: bed.alphabet.clone(),
        labels,
        initial: 0,
        transitions,
        acceptance,
    })
}

fn common_alphabet(autos: &[&OmegaAutomaton]) -> Result<Alphabet, AutomatonError> {
    let first = autos.first().ok_or(AutomatonError::EmptyProduct)?;
    if autos.iter().any(|a| a.alphabet != first.alphabet) {
        return Err(AutomatonError::AlphabetMismatch);
    }
    Ok(first.alphabet.clone())
}

fn accepting_set(a: &OmegaAutomaton, want_buchi: bool) -> Result<&StateSet, AutomatonError> {
    match (&a.acceptance, want_buchi) {
        (Acceptance::Buchi(s), true) | (Acceptance::CoBuchi(s), false) => Ok(s),
        _ => Err(AutomatonError::AcceptanceMismatch),
    }
}

/// Intersection of co-Büchi and Büchi automata as a Rabin automaton with one
/// pair. A round-robin counter over the Büchi components advances whenever
/// the watched component sits in its accepting set.
pub fn rabin_conjunction(
    cobuchi: &[&OmegaAutomaton],
    buchi: &[&OmegaAutomaton],
    limit: usize,
) -> Result<OmegaAutomaton, AutomatonError> {
    let all: Vec<&OmegaAutomaton> = cobuchi.iter().chain(buchi.iter()).copied().collect();
    let alphabet = common_alphabet(&all)?;
    let co_sets: Vec<&StateSet> = cobuchi
        .iter()
        .map(|a| accepting_set(a, false))
        .collect::<Result<_, _>>()?;
    let bu_sets: Vec<&StateSet> = buchi
        .iter()
        .map(|a| accepting_set(a, true))
        .collect::<Result<_, _>>()?;
    let m = buchi.len();
    let start: (Vec<StateId>, usize) = (all.iter().map(|a| a.initial).collect(), 0);
    let k = cobuchi.len();
    let (keys, transitions) = explore(start, alphabet.letter_count(), limit, "conjunction", |(qs, c), l| {
        let next: Vec<StateId> = qs.iter().zip(&all).map(|(&q, a)| a.step(q, l)).collect();
        let c2 = if m > 0 && bu_sets[*c].contains(&qs[k + *c]) {
            (c + 1) % m
        } else {
            *c
        };
        Ok::<_, AutomatonError>((next, c2))
    })?;
    let mut fin = StateSet::new();
    let mut inf = StateSet::new();
    let mut labels = Vec::with_capacity(keys.len());
    for (i, (qs, c)) in keys.iter().enumerate() {
        if qs[..k].iter().zip(&co_sets).any(|(q, s)| s.contains(q)) {
            fin.insert(i);
        }
        if m == 0 || (*c == 0 && bu_sets[0].contains(&qs[k])) {
            inf.insert(i);
        }
        let parts: Vec<&str> = qs.iter().zip(&all).map(|(&q, a)| a.labels[q].as_str()).collect();
        labels.push(format!("[{}] #{}", parts.join(" ; "), c));
    }
    Ok(OmegaAutomaton {
        alphabet,
        labels,
        initial: 0,
        transitions,
        acceptance: Acceptance::Rabin(vec![RabinPair { fin, inf }]),
    })
}

/// Union of deterministic automata: the synchronous product with every
/// component's pairs lifted to the product states.
pub fn rabin_union(autos: &[&OmegaAutomaton], limit: usize) -> Result<OmegaAutomaton, AutomatonError> {
    let alphabet = common_alphabet(autos)?;
    let rabin: Vec<OmegaAutomaton> = autos.iter().map(|a| a.to_rabin()).collect();
    let start: Vec<StateId> = rabin.iter().map(|a| a.initial).collect();
    let (keys, transitions) = explore(start, alphabet.letter_count(), limit, "union", |qs, l| {
        Ok::<_, AutomatonError>(qs.iter().zip(&rabin).map(|(&q, a)| a.step(q, l)).collect())
    })?;
    let mut pairs = Vec::new();
    for (ci, a) in rabin.iter().enumerate() {
        let Acceptance::Rabin(component_pairs) = &a.acceptance else {
            unreachable!("converted to Rabin above")
        };
        for p in component_pairs {
            let lift = |set: &StateSet| -> StateSet {
                keys.iter()
                    .enumerate()
                    .filter(|(_, qs)| set.contains(&qs[ci]))
                    .map(|(i, _)| i)
                    .collect()
            };
            pairs.push(RabinPair {
                fin: lift(&p.fin),
                inf: lift(&p.inf),
            });
        }
    }
    let labels = keys
        .iter()
        .map(|qs| {
            let parts: Vec<&str> = qs.iter().zip(&rabin).map(|(&q, a)| a.labels[q].as_str()).collect();
            format!("<{}>", parts.join(" || "))
        })
        .collect();
    Ok(OmegaAutomaton {
        alphabet,
        labels,
        initial: 0,
        transitions,
        acceptance: Acceptance::Rabin(pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::LassoWord;

    fn two_state(prop: &str, acceptance_on_seen: bool, buchi: bool) -> OmegaAutomaton {
        // state 1 iff the last letter contained `prop`
        let alphabet = Alphabet::new(["p", "q"]);
        let bit = alphabet.names().iter().position(|n| n == prop).unwrap();
        let row: Vec<StateId> = (0..4).map(|l| (l >> bit) & 1).collect();
        let set: StateSet = [if acceptance_on_seen { 1 } else { 0 }].into_iter().collect();
        OmegaAutomaton {
            alphabet,
            labels: vec!["0".into(), "1".into()],
            initial: 0,
            transitions: vec![row.clone(), row],
            acceptance: if buchi {
                Acceptance::Buchi(set)
            } else {
                Acceptance::CoBuchi(set)
            },
        }
    }

    fn words() -> Vec<LassoWord> {
        [
            "; {p},{q}",
            "; {p}",
            "{q} ; {p,q}",
            "; {},{p}",
            "{p},{q} ; {}",
            "; {q},{},{p}",
            "; {p},{p,q}",
        ]
        .iter()
        .map(|w| LassoWord::parse(w).unwrap())
        .collect()
    }

    #[test]
    fn conjunction_is_intersection() {
        let gf_p = two_state("p", true, true);
        let gf_q = two_state("q", true, true);
        // co-Büchi with α = "last letter lacked q": F G q
        let fg_q = two_state("q", false, false);
        let both = rabin_conjunction(&[&fg_q], &[&gf_p, &gf_q], 1000).unwrap();
        assert_eq!(both.acceptance.pair_count(), 1);
        for w in words() {
            let want = gf_p.accepts(&w) && gf_q.accepts(&w) && fg_q.accepts(&w);
            assert_eq!(both.accepts(&w), want, "{w}");
        }
        let only_co = rabin_conjunction(&[&fg_q], &[], 1000).unwrap();
        for w in words() {
            assert_eq!(only_co.accepts(&w), fg_q.accepts(&w));
        }
    }

    #[test]
    fn union_is_union() {
        let gf_p = two_state("p", true, true);
        let fg_q = two_state("q", false, false);
        let u = rabin_union(&[&gf_p, &fg_q], 1000).unwrap();
        assert_eq!(u.acceptance.pair_count(), 2);
        for w in words() {
            assert_eq!(u.accepts(&w), gf_p.accepts(&w) || fg_q.accepts(&w), "{w}");
        }
    }

    #[test]
    fn product_errors() {
        assert_eq!(rabin_conjunction(&[], &[], 10).unwrap_err(), AutomatonError::EmptyProduct);
        let a = two_state("p", true, true);
        let b = OmegaAutomaton {
            alphabet: Alphabet::new(["p"]),
            transitions: vec![vec![0, 1], vec![0, 1]],
            ..a.clone()
        };
        assert_eq!(rabin_union(&[&a, &b], 10).unwrap_err(), AutomatonError::AlphabetMismatch);
        let err = rabin_union(&[&a, &a], 1).unwrap_err();
        assert!(matches!(err, AutomatonError::StateLimit { limit: 1, .. }));
    }
}
