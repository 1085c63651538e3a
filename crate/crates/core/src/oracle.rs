//! Brute-force ground truth: bounded language enumeration, GAC by
//! enumeration, and minimum-distance computation. Every derived expected
//! value and every GAC property check in the test suites is certified
//! against this module, which shares no code with the encoders or
//! propagators it is checking.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::language::alphabet::SymId;
use crate::language::automaton::{Automaton, AutomatonKind, StateId};
use crate::language::domains::SequenceDomains;
use crate::language::earley::earley_recognize;
use crate::language::grammar::RestrictedGrammar;

/// Enumeration guard: boxes bigger than this are refused.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// A language membership test: an automaton (run by kind) or a grammar
/// (run through the Earley recognizer).
#[derive(Clone, Copy)]
pub enum LanguageSpec<'a> {
    Automaton(&'a Automaton),
    Grammar(&'a RestrictedGrammar),
}

impl<'a> LanguageSpec<'a> {
    pub fn alphabet(&self) -> &'a crate::language::alphabet::Alphabet {
        match self {
            LanguageSpec::Automaton(a) => a.alphabet(),
            LanguageSpec::Grammar(g) => g.terminals(),
        }
    }

    pub fn accepts(&self, s: &[SymId]) -> Result<bool> {
        match self {
            LanguageSpec::Automaton(a) => match a.kind() {
                AutomatonKind::Deterministic => a.dfa_accepts(s),
                AutomatonKind::Nondeterministic => a.nfa_accepts(s),
            },
            LanguageSpec::Grammar(g) => earley_recognize(g, s),
        }
    }
}

/// The accepted strings of one length inside a domain box, deduplicated and
/// lexicographically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    pub n: usize,
    pub strings: BTreeSet<Vec<SymId>>,
}

/// Tests every string of the domain box for membership. Refuses boxes
/// bigger than [`ENUMERATION_GUARD`].
pub fn enumerate_language(spec: LanguageSpec, d: &SequenceDomains) -> Result<LanguageSample> {
    if spec.alphabet() != d.alphabet() {
        return Err(Error::input("spec and domains must share the same alphabet"));
    }
    let size = d.box_size();
    if size > ENUMERATION_GUARD {
        return Err(Error::input(format!(
            "domain box holds {size} strings, above the enumeration guard of {ENUMERATION_GUARD}"
        )));
    }
    let mut strings = BTreeSet::new();
    for s in d.iter_box() {
        if spec.accepts(&s)? {
            strings.insert(s);
        }
    }
    Ok(LanguageSample { n: d.n(), strings })
}

/// Generalized arc consistency by enumeration: a value survives at a
/// position iff some sample string carries it there. An empty sample fails
/// every position.
pub fn gac_oracle(sample: &LanguageSample, d: &SequenceDomains) -> SequenceDomains {
    let alphabet = d.alphabet().clone();
    let mut sets: Vec<BTreeSet<SymId>> = vec![BTreeSet::new(); d.n()];
    for s in &sample.strings {
        for (t, &v) in s.iter().enumerate() {
            if d.contains(t, v) {
                sets[t].insert(v);
            }
        }
    }
    SequenceDomains::from_sets(alphabet, sets).expect("sample symbols come from the alphabet")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Hamming,
    /// Levenshtein distance; accepted strings of length up to
    /// `|s| + max_budget` are enumerated.
    Edit { max_budget: usize },
}

pub fn levenshtein(a: &[SymId], b: &[SymId]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut row = vec![i + 1];
        for (j, &cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            row.push((prev[j] + cost).min(prev[j + 1] + 1).min(row[j] + 1));
        }
        prev = row;
    }
    prev[b.len()]
}

/// Minimum metric distance from `s` to the language; `None` when the
/// language holds no string inside the enumeration bounds (distance is
/// infinite for every budget under consideration).
pub fn min_distance(spec: LanguageSpec, s: &[SymId], metric: Metric) -> Result<Option<usize>> {
    let alphabet = spec.alphabet().clone();
    match metric {
        Metric::Hamming => {
            let sample =
                enumerate_language(spec, &SequenceDomains::full(alphabet, s.len()))?;
            Ok(sample
                .strings
                .iter()
                .map(|y| s.iter().zip(y).filter(|(a, b)| a != b).count())
                .min())
        }
        Metric::Edit { max_budget } => {
            let mut best: Option<usize> = None;
            for len in 0..=s.len() + max_budget {
                let sample =
                    enumerate_language(spec, &SequenceDomains::full(alphabet.clone(), len))?;
                for y in &sample.strings {
                    let dist = levenshtein(s, y);
                    best = Some(best.map_or(dist, |b| b.min(dist)));
                }
            }
            Ok(best)
        }
    }
}

/// Membership for the cyclic reading of the Regular constraint: some state
/// `k` admits a run over `s` that starts and ends in `k`. Initial and final
/// states of the automaton play no role.
pub fn cyclic_accepts(a: &Automaton, s: &[SymId]) -> Result<bool> {
    for &v in s {
        if v.0 >= a.alphabet().len() {
            return Err(Error::input(format!("symbol id {v} not in alphabet")));
        }
    }
    for k in a.states() {
        let mut current: BTreeSet<StateId> = BTreeSet::from([k]);
        for &v in s {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(a.successors(q, v).iter().copied());
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        if current.contains(&k) {
            return Ok(true);
        }
    }
    Ok(false)
}
