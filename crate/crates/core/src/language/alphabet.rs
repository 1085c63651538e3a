use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol in an [`Alphabet`]; stable across the alphabet's lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymId(pub usize);

impl fmt::Display for SymId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered set of distinct symbol names. The position of a symbol in the
/// declaration order is its [`SymId`] and fixes variable ordering everywhere
/// symbols are enumerated.
#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, SymId>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::input("alphabet must be non-empty"));
        }
        let mut index = HashMap::new();
        for (i, name) in symbols.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::input("empty symbol name"));
            }
            if index.insert(name.clone(), SymId(i)).is_some() {
                return Err(Error::input(format!("duplicate symbol {name:?}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<SymId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<SymId> {
        self.get(name)
            .ok_or_else(|| Error::input(format!("symbol {name:?} not in alphabet")))
    }

    pub fn name(&self, id: SymId) -> &str {
        &self.symbols[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = SymId> + '_ {
        (0..self.symbols.len()).map(SymId)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    /// Parses a whitespace-separated sequence of symbol names.
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<SymId>> {
        text.split_whitespace().map(|t| self.require(t)).collect()
    }

    pub fn render_sequence(&self, seq: &[SymId]) -> String {
        seq.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn stable_indices() {
        let a = Alphabet::new(["r", "w"]).unwrap();
        assert_eq!(a.get("r"), Some(SymId(0)));
        assert_eq!(a.get("w"), Some(SymId(1)));
        assert_eq!(a.name(SymId(1)), "w");
        assert!(a.get("x").is_none());
    }

    #[test]
    fn sequence_roundtrip() {
        let a = Alphabet::new(["r", "w"]).unwrap();
        let seq = a.parse_sequence("r w r").unwrap();
        assert_eq!(seq, vec![SymId(0), SymId(1), SymId(0)]);
        assert_eq!(a.render_sequence(&seq), "r w r");
        assert!(a.parse_sequence("r q").is_err());
    }
}
