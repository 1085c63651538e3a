use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::language::alphabet::{Alphabet, SymId};

/// Index of a state in an [`Automaton`]'s declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutomatonKind {
    Deterministic,
    Nondeterministic,
}

/// A finite automaton over a finite alphabet. Deterministic automata have a
/// single initial state and at most one transition per (state, symbol);
/// nondeterministic ones may have several of both. A missing transition
/// rejects.
#[derive(Debug, Clone)]
pub struct Automaton {
    kind: AutomatonKind,
    states: Vec<String>,
    alphabet: Alphabet,
    transitions: Vec<(StateId, SymId, StateId)>,
    step: BTreeMap<(StateId, SymId), Vec<StateId>>,
    initial: Vec<StateId>,
    finals: BTreeSet<StateId>,
}

impl Automaton {
    pub fn new(
        kind: AutomatonKind,
        states: Vec<String>,
        alphabet: Alphabet,
        mut transitions: Vec<(StateId, SymId, StateId)>,
        initial: Vec<StateId>,
        finals: BTreeSet<StateId>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::input("automaton needs at least one state"));
        }
        {
            let mut seen = BTreeSet::new();
            for s in &states {
                if !seen.insert(s.as_str()) {
                    return Err(Error::input(format!("duplicate state {s:?}")));
                }
            }
        }
        let check_state = |q: StateId| -> Result<()> {
            if q.0 >= states.len() {
                return Err(Error::input(format!("state id {q} out of range")));
            }
            Ok(())
        };
        for &(from, sym, to) in &transitions {
            check_state(from)?;
            check_state(to)?;
            if sym.0 >= alphabet.len() {
                return Err(Error::input(format!("symbol id {sym} out of range")));
            }
        }
        for &q in initial.iter().chain(finals.iter()) {
            check_state(q)?;
        }
        if initial.is_empty() {
            return Err(Error::input("automaton needs at least one initial state"));
        }
        transitions.sort();
        transitions.dedup();
        if kind == AutomatonKind::Deterministic {
            if initial.len() != 1 {
                return Err(Error::input(
                    "deterministic automaton must have exactly one initial state",
                ));
            }
            for pair in transitions.windows(2) {
                if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                    return Err(Error::input(format!(
                        "deterministic automaton has two transitions from state {:?} on {:?}",
                        states[pair[0].0 .0],
                        alphabet.name(pair[0].1)
                    )));
                }
            }
        }
        let mut step: BTreeMap<(StateId, SymId), Vec<StateId>> = BTreeMap::new();
        for &(from, sym, to) in &transitions {
            step.entry((from, sym)).or_default().push(to);
        }
        let mut initial = initial;
        initial.sort();
        initial.dedup();
        Ok(Automaton {
            kind,
            states,
            alphabet,
            transitions,
            step,
            initial,
            finals,
        })
    }

    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &[(StateId, SymId, StateId)] {
        &self.transitions
    }

    pub fn successors(&self, q: StateId, v: SymId) -> &[StateId] {
        self.step.get(&(q, v)).map_or(&[], Vec::as_slice)
    }

    fn check_sequence(&self, s: &[SymId]) -> Result<()> {
        for &v in s {
            if v.0 >= self.alphabet.len() {
                return Err(Error::input(format!("symbol id {v} not in alphabet")));
            }
        }
        Ok(())
    }

    /// Runs the deterministic transition function from the initial state;
    /// accepts iff the run ends in a final state. A missing transition
    /// rejects.
    pub fn dfa_accepts(&self, s: &[SymId]) -> Result<bool> {
        if self.kind != AutomatonKind::Deterministic {
            return Err(Error::input(
                "dfa_accepts requires a deterministic automaton",
            ));
        }
        self.check_sequence(s)?;
        let mut q = self.initial[0];
        for &v in s {
            match self.successors(q, v).first() {
                Some(&next) => q = next,
                None => return Ok(false),
            }
        }
        Ok(self.finals.contains(&q))
    }

    /// Subset simulation: accepts iff some run from some initial state ends
    /// in a final state.
    pub fn nfa_accepts(&self, s: &[SymId]) -> Result<bool> {
        self.check_sequence(s)?;
        let mut current: BTreeSet<StateId> = self.initial.iter().copied().collect();
        for &v in s {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.successors(q, v).iter().copied());
            }
            if next.is_empty() {
                return Ok(false);
            }
            current = next;
        }
        Ok(current.iter().any(|q| self.finals.contains(q)))
    }
}

/// The work/rest automaton for the language `r* w* r*`: rest, then an
/// optional block of work, then rest again. All three states accept.
#[cfg(test)]
pub(crate) fn rest_work_rest() -> Automaton {
    let alphabet = Alphabet::new(["r", "w"]).unwrap();
    let r = SymId(0);
    let w = SymId(1);
    let (q0, q1, q2) = (StateId(0), StateId(1), StateId(2));
    Automaton::new(
        AutomatonKind::Deterministic,
        vec!["qr".into(), "qw".into(), "qr2".into()],
        alphabet,
        vec![(q0, r, q0), (q0, w, q1), (q1, w, q1), (q1, r, q2), (q2, r, q2)],
        vec![q0],
        BTreeSet::from([q0, q1, q2]),
    )
    .unwrap()
}
