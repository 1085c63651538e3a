use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::language::alphabet::{Alphabet, SymId};

/// Per-position candidate-value sets for a sequence of `n` finite-domain
/// variables. A position with an empty candidate set marks the whole
/// instance as failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDomains {
    alphabet: Alphabet,
    candidates: Vec<BTreeSet<SymId>>,
}

impl SequenceDomains {
    /// All alphabet symbols allowed at every position.
    pub fn full(alphabet: Alphabet, n: usize) -> Self {
        let all: BTreeSet<SymId> = alphabet.ids().collect();
        SequenceDomains {
            alphabet,
            candidates: vec![all; n],
        }
    }

    /// Every position empty: the failed instance of length `n`.
    pub fn failed(alphabet: Alphabet, n: usize) -> Self {
        SequenceDomains {
            alphabet,
            candidates: vec![BTreeSet::new(); n],
        }
    }

    /// Singleton domains spelling out `seq`.
    pub fn fixed(alphabet: Alphabet, seq: &[SymId]) -> Result<Self> {
        let mut d = SequenceDomains {
            alphabet,
            candidates: Vec::with_capacity(seq.len()),
        };
        for &s in seq {
            if s.0 >= d.alphabet.len() {
                return Err(Error::input(format!("symbol id {s} out of range")));
            }
            d.candidates.push(BTreeSet::from([s]));
        }
        Ok(d)
    }

    pub fn from_sets(alphabet: Alphabet, candidates: Vec<BTreeSet<SymId>>) -> Result<Self> {
        for set in &candidates {
            for &s in set {
                if s.0 >= alphabet.len() {
                    return Err(Error::input(format!("symbol id {s} out of range")));
                }
            }
        }
        Ok(SequenceDomains {
            alphabet,
            candidates,
        })
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn at(&self, pos: usize) -> &BTreeSet<SymId> {
        &self.candidates[pos]
    }

    pub fn contains(&self, pos: usize, sym: SymId) -> bool {
        self.candidates[pos].contains(&sym)
    }

    pub fn remove(&mut self, pos: usize, sym: SymId) -> bool {
        self.candidates[pos].remove(&sym)
    }

    pub fn restrict(&mut self, pos: usize, allowed: impl IntoIterator<Item = SymId>) {
        let allowed: BTreeSet<SymId> = allowed.into_iter().collect();
        self.candidates[pos] = self.candidates[pos]
            .intersection(&allowed)
            .copied()
            .collect();
    }

    /// True when some position has no candidates left.
    pub fn is_failed(&self) -> bool {
        self.candidates.iter().any(BTreeSet::is_empty)
    }

    /// Number of strings in the domain box.
    pub fn box_size(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// Iterates over every string in the domain box in lexicographic order
    /// of symbol indices. Yields nothing when the instance is failed.
    pub fn iter_box(&self) -> BoxIter<'_> {
        BoxIter::new(self)
    }

    /// One surviving-candidates line per position, e.g. `0: r w`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (t, set) in self.candidates.iter().enumerate() {
            let syms: Vec<&str> = set.iter().map(|&s| self.alphabet.name(s)).collect();
            out.push_str(&format!("{t}: {}\n", syms.join(" ")));
        }
        out
    }
}

/// Lexicographic iterator over the strings of a domain box.
pub struct BoxIter<'a> {
    sets: Vec<Vec<SymId>>,
    current: Vec<usize>,
    done: bool,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> BoxIter<'a> {
    fn new(d: &'a SequenceDomains) -> Self {
        let sets: Vec<Vec<SymId>> = d
            .candidates
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        let done = sets.iter().any(Vec::is_empty);
        BoxIter {
            current: vec![0; sets.len()],
            sets,
            done,
            _marker: std::marker::PhantomData,
        }
    }
}

impl Iterator for BoxIter<'_> {
    type Item = Vec<SymId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item: Vec<SymId> = self
            .current
            .iter()
            .zip(&self.sets)
            .map(|(&i, set)| set[i])
            .collect();
        // advance odometer, last position fastest
        let mut pos = self.sets.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.current[pos] += 1;
            if self.current[pos] < self.sets[pos].len() {
                break;
            }
            self.current[pos] = 0;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn box_iteration_is_lexicographic() {
        let d = SequenceDomains::full(ab(), 2);
        let strings: Vec<Vec<SymId>> = d.iter_box().collect();
        assert_eq!(
            strings,
            vec![
                vec![SymId(0), SymId(0)],
                vec![SymId(0), SymId(1)],
                vec![SymId(1), SymId(0)],
                vec![SymId(1), SymId(1)],
            ]
        );
    }

    #[test]
    fn empty_position_fails_instance() {
        let mut d = SequenceDomains::full(ab(), 2);
        assert!(!d.is_failed());
        d.restrict(1, []);
        assert!(d.is_failed());
        assert_eq!(d.iter_box().count(), 0);
        assert_eq!(d.box_size(), 0);
    }

    #[test]
    fn zero_length_box_has_empty_string() {
        let d = SequenceDomains::full(ab(), 0);
        let strings: Vec<Vec<SymId>> = d.iter_box().collect();
        assert_eq!(strings, vec![Vec::<SymId>::new()]);
        assert!(!d.is_failed());
    }
}
