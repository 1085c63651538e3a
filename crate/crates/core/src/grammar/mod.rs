//! The Grammar constraint: the CYK-based AND/OR decomposition, its CNF
//! encoding, and the monolithic CYK and Earley propagators.

pub mod dag;
pub mod encode;
pub mod propagate;

pub use dag::{build_andor_dag, AndChildren, AndId, AndNode, AndOrDag, DagStatus, OrId, OrNode};
pub use encode::{encode_grammar_sat, encode_grammar_sat_into};
pub use propagate::{propagate_grammar_cyk, propagate_grammar_earley};
