//! Automata, grammars with span predicates, sequence domains, and the
//! recognizers (DFA/NFA runs, CYK, Earley) the encoders build on.

pub mod alphabet;
pub mod automaton;
pub mod cyk;
pub mod domains;
pub mod earley;
pub mod grammar;
pub mod predicate;
pub mod textfmt;

pub use alphabet::{Alphabet, SymId};
pub use automaton::{Automaton, AutomatonKind, StateId};
pub use cyk::cyk_recognize;
pub use domains::SequenceDomains;
pub use earley::earley_recognize;
pub use grammar::{
    to_cnf, CnfGrammar, CnfProduction, CnfRhs, GSym, NtId, Production, RestrictedGrammar, RhsItem,
};
pub use predicate::SpanPredicate;
pub use textfmt::{parse_automaton, parse_domains, parse_grammar, render_automaton};
