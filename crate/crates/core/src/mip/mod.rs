//! Mixed-integer linear encodings: a network-flow model of the Regular
//! constraint over the layered graph, and a linearization of the AND/OR
//! DAG for the Grammar constraint in which every selected OR-node picks
//! exactly one derivation (one parse certifies membership, so restricting
//! to a single parse never changes the string set).

pub mod check;
pub mod encode;
pub mod lp;

pub use check::{enumerate_feasible, feasible_with, satisfies};
pub use encode::{encode_grammar_mip, encode_regular_flow};
pub use lp::{parse_lp, write_lp};

use std::collections::HashMap;

use crate::cnf::Atom;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone)]
pub struct LpVar {
    pub name: String,
    pub kind: VarKind,
    pub lb: f64,
    pub ub: f64,
    /// Semantic meaning, if the variable has one.
    pub atom: Option<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpConstraint {
    pub name: String,
    /// (coefficient, variable index) pairs.
    pub terms: Vec<(f64, usize)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A linear model over named variables. Everything the encoders emit is
/// 0/1, but continuous variables round-trip through the LP reader too.
#[derive(Debug, Clone, Default)]
pub struct LpModel {
    vars: Vec<LpVar>,
    index: HashMap<String, usize>,
    pub objective: Option<(Sense, Vec<(f64, usize)>)>,
    constraints: Vec<LpConstraint>,
    failed: bool,
}

/// Keeps only LP-safe characters; anything else becomes an underscore.
pub fn lp_safe(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if cleaned.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        format!("v{cleaned}")
    } else if cleaned.is_empty() {
        "v".to_string()
    } else {
        cleaned
    }
}

impl LpModel {
    pub fn new() -> Self {
        LpModel::default()
    }

    /// Declares a variable, making the sanitized name unique if needed.
    pub fn add_var(
        &mut self,
        name: &str,
        kind: VarKind,
        lb: f64,
        ub: f64,
        atom: Option<Atom>,
    ) -> usize {
        let mut name = lp_safe(name);
        while self.index.contains_key(&name) {
            name.push('_');
        }
        let idx = self.vars.len();
        self.index.insert(name.clone(), idx);
        self.vars.push(LpVar {
            name,
            kind,
            lb,
            ub,
            atom,
        });
        idx
    }

    pub fn binary(&mut self, name: &str, atom: Option<Atom>) -> usize {
        self.add_var(name, VarKind::Binary, 0.0, 1.0, atom)
    }

    pub fn add_constraint(
        &mut self,
        name: &str,
        terms: Vec<(f64, usize)>,
        relation: Relation,
        rhs: f64,
    ) {
        let mut name = lp_safe(name);
        while self.constraints.iter().any(|c| c.name == name) {
            name.push('_');
        }
        self.constraints.push(LpConstraint {
            name,
            terms,
            relation,
            rhs,
        });
    }

    /// Records unsatisfiability as the contradictory constraint 0 = 1.
    pub fn mark_failed(&mut self) {
        if !self.failed {
            self.failed = true;
            self.add_constraint("infeasible", Vec::new(), Relation::Eq, 1.0);
        }
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    pub fn vars(&self) -> &[LpVar] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LpConstraint] {
        &self.constraints
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Internal-invariant check used by the writer.
    pub(crate) fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            for &(_, idx) in &c.terms {
                if idx >= self.vars.len() {
                    return Err(Error::Internal(format!(
                        "constraint {} references undeclared variable {idx}",
                        c.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The fixed naming scheme shared by the encoders and by tests that fix
/// variables by meaning.
pub fn value_var_name(pos: usize, sym: &str) -> String {
    lp_safe(&format!("x_{pos}_{sym}"))
}

pub fn state_var_name(layer: usize, state: &str) -> String {
    lp_safe(&format!("s_{layer}_{state}"))
}

pub fn arc_var_name(layer: usize, from: &str, sym: &str, to: &str) -> String {
    lp_safe(&format!("f_{layer}_{from}_{sym}_{to}"))
}

pub fn node_var_name(node_id: usize) -> String {
    format!("n_{node_id}")
}
