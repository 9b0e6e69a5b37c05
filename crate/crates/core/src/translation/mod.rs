//! Translation of a formula into a deterministic Rabin automaton: the
//! weakening-conditions bed, the runners checking each premise of the
//! stability characterisation, and their assembly into one pair per `(M, N)`.

mod runners;
mod wc;

pub use runners::{BuchiRunner, CoBuchiRunner, StabilityRunner};
pub use wc::{build_wc_automaton, WcState};

use crate::after::af_loc;
use crate::automata::{cascade, rabin_conjunction, rabin_union, AutomatonError, BedAutomaton, OmegaAutomaton};
use crate::formula::{Formula, FormulaSet};
use crate::lasso::{Alphabet, Letter};
use crate::past::{enumerate_past_sets, rewrite_set, saturation_table};
use crate::prop::{CanonicalBool, Canonicalizer};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub const DEFAULT_MAX_STATES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("formula has {0} past subformulae; at most 16 are supported")]
    TooManyPastSubformulae(usize),
}

/// Shared data for one translation: the formula, its alphabet, the ordered
/// past sets with their saturation table, and the canonicalizer that owns
/// every state class.
pub struct TranslationContext {
    pub phi: Formula,
    pub alphabet: Alphabet,
    pub letters: Vec<Letter>,
    /// `C_1 .. C_k`, index 0 being the set of weak-rooted members.
    pub past_sets: Vec<FormulaSet>,
    /// `J_i`.
    pub saturation: Vec<Vec<usize>>,
    /// `cross[i][j] = C_i⌊C_j⌋`.
    pub cross: Vec<Vec<FormulaSet>>,
    pub canon: Canonicalizer,
    pub max_states: usize,
    af_cache: HashMap<(u32, usize), CanonicalBool>,
    loc_cache: HashMap<(u32, usize, usize, usize), CanonicalBool>,
}

impl TranslationContext {
    pub fn new(phi: &Formula, max_states: usize) -> Result<Self, TranslateError> {
        Self::with_alphabet(phi, Alphabet::new(phi.vars()), max_states)
    }

    pub fn with_alphabet(phi: &Formula, alphabet: Alphabet, max_states: usize) -> Result<Self, TranslateError> {
        let psf = phi.psf().len();
        if psf > 16 {
            return Err(TranslateError::TooManyPastSubformulae(psf));
        }
        let past_sets = enumerate_past_sets(phi);
        let saturation = saturation_table(phi, &past_sets);
        let cross = past_sets
            .iter()
            .map(|ci| past_sets.iter().map(|cj| rewrite_set(ci, cj)).collect())
            .collect();
        Ok(TranslationContext {
            phi: phi.clone(),
            letters: alphabet.letters(),
            alphabet,
            past_sets,
            saturation,
            cross,
            canon: Canonicalizer::new(),
            max_states,
            af_cache: HashMap::new(),
            loc_cache: HashMap::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.past_sets.len()
    }

    /// `af(a, σ)` lifted to classes: atoms advance independently.
    pub fn af_class(&mut self, a: CanonicalBool, letter: usize) -> CanonicalBool {
        let TranslationContext {
            canon,
            af_cache,
            letters,
            ..
        } = self;
        canon.map_atoms_with(a, |c, atom| {
            *af_cache
                .entry((atom.id(), letter))
                .or_insert_with(|| c.canonicalize(&crate::after::af(atom, &letters[letter])))
        })
    }

    /// `af_loc(a, σ, C_i⌊C_j⌋)` on a class.
    pub fn af_loc_class(&mut self, a: CanonicalBool, letter: usize, i: usize, j: usize) -> CanonicalBool {
        let TranslationContext {
            canon,
            loc_cache,
            letters,
            cross,
            ..
        } = self;
        canon.map_atoms_with(a, |c, atom| {
            *loc_cache
                .entry((atom.id(), letter, i, j))
                .or_insert_with(|| c.canonicalize(&af_loc(atom, &letters[letter], &cross[i][j])))
        })
    }
}

/// Sizes reported alongside a translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationStats {
    pub states: usize,
    pub pairs: usize,
    pub branches: usize,
    pub wc_states: usize,
    pub k: usize,
    /// Future and past subformula counts of the input.
    pub n: u64,
    pub m: u64,
    pub mu: usize,
    pub nu: usize,
}

pub struct Translation {
    pub automaton: OmegaAutomaton,
    pub bed: BedAutomaton<WcState>,
    pub stats: TranslationStats,
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

/// Translates `phi` over `Var(phi)`.
pub fn translate(phi: &Formula, max_states: usize) -> Result<Translation, TranslateError> {
    let mut ctx = TranslationContext::new(phi, max_states)?;
    translate_with(&mut ctx)
}

/// Translates over the alphabet of `ctx`.
pub fn translate_with(ctx: &mut TranslationContext) -> Result<Translation, TranslateError> {
    let limit = ctx.max_states;
    let bed = build_wc_automaton(ctx)?;
    let mu = ctx.phi.mu_set();
    let nu = ctx.phi.nu_set();

    let mut stability: BTreeMap<FormulaSet, OmegaAutomaton> = BTreeMap::new();
    let mut guarantees: BTreeMap<(Formula, FormulaSet), OmegaAutomaton> = BTreeMap::new();
    let mut safeties: BTreeMap<(Formula, FormulaSet), OmegaAutomaton> = BTreeMap::new();
    let mut branches = Vec::new();
    for m in subsets(&mu) {
        if !stability.contains_key(&m) {
            let mut r = StabilityRunner::new(ctx, &m);
            let a = cascade(&bed, &mut r, limit)?;
            stability.insert(m.clone(), a);
        }
        for n in subsets(&nu) {
            for psi in &n {
                let key = (psi.clone(), m.clone());
                if !safeties.contains_key(&key) {
                    let mut r = CoBuchiRunner::new(ctx, psi, &m);
                    let a = cascade(&bed, &mut r, limit)?;
                    safeties.insert(key, a);
                }
            }
            for psi in &m {
                let key = (psi.clone(), n.clone());
                if !guarantees.contains_key(&key) {
                    let mut r = BuchiRunner::new(ctx, psi, &n);
                    let a = cascade(&bed, &mut r, limit)?;
                    guarantees.insert(key, a);
                }
            }
            let mut co: Vec<&OmegaAutomaton> = vec![&stability[&m]];
            co.extend(n.iter().map(|psi| &safeties[&(psi.clone(), m.clone())]));
            let bu: Vec<&OmegaAutomaton> = m.iter().map(|psi| &guarantees[&(psi.clone(), n.clone())]).collect();
            branches.push(rabin_conjunction(&co, &bu, limit)?);
        }
    }
    let refs: Vec<&OmegaAutomaton> = branches.iter().collect();
    let automaton = rabin_union(&refs, limit)?;
    let (n, m) = ctx.phi.size();
    let stats = TranslationStats {
        states: automaton.state_count(),
        pairs: automaton.acceptance.pair_count(),
        branches: branches.len(),
        wc_states: bed.state_count(),
        k: ctx.k(),
        n,
        m,
        mu: mu.len(),
        nu: nu.len(),
    };
    Ok(Translation { automaton, bed, stats })
}
