//! langsat compiles membership-in-a-formal-language constraints over
//! sequences of finite-domain variables into SAT (DIMACS CNF) and MIP (LP)
//! encodings, and propagates them to generalized arc consistency.
//!
//! The pieces:
//!
//! - [`language`]: automata, grammars with span predicates, sequence
//!   domains, and the recognizers (DFA/NFA runs, CYK, Earley).
//! - [`regular`]: the Regular constraint — layered-graph unfolding, ternary
//!   decomposition, CNF encoding, a reachability propagator, state-visit
//!   counting, and the soft (Hamming/edit) and cyclic variants.
//! - [`grammar`]: the Grammar constraint — the CYK-based AND/OR DAG, its
//!   CNF encoding, and the CYK and Earley propagators.
//! - [`mip`]: network-flow and AND/OR linearizations as LP files.
//! - [`schedule`]: the employee shift-scheduling model built from one
//!   Grammar constraint per employee plus per-slot demand cardinalities.
//! - [`oracle`]: brute-force enumeration oracles the test suites certify
//!   everything against.
//! - [`sat`]: a watched-literal unit propagator and a desk-scale DPLL
//!   search used by tests and the bundled `minisolve` binary.

pub mod checks;
pub mod cnf;
pub mod error;
pub mod gen;
pub mod grammar;
pub mod language;
pub mod mip;
pub mod oracle;
pub mod regular;
pub mod sat;
pub mod schedule;
pub mod solver;

pub use error::{Error, Result};
