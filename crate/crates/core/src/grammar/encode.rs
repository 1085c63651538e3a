//! CNF encoding of the AND/OR DAG.
//!
//! One variable per node; leaves are the shared x(t, v) value literals. The
//! clause set wires support in both directions so unit propagation repeats
//! the two CYK pruning passes: a node dies bottom-up when its derivations
//! die, and top-down when its last parent dies. An AND-node is implied by
//! nothing; it is asserted through its OR-parent's child disjunction and
//! forces its children, which keeps the models in bijection-per-parse with
//! the strings of the language inside the box.

use crate::cnf::{add_exactly_one, Atom, CnfFormula, EncodeConfig, Lit, Var};
use crate::grammar::dag::{AndChildren, AndOrDag, DagStatus};

fn or_atom(dag: &AndOrDag, id: crate::grammar::dag::OrId) -> Atom {
    let or = dag.or_node(id);
    Atom::OrNode {
        nt: dag.nonterminal_name(or.nt).to_string(),
        start: or.start,
        len: or.len,
    }
}

fn and_atom(dag: &AndOrDag, id: crate::grammar::dag::AndId) -> Atom {
    let and = dag.and_node(id);
    Atom::AndNode {
        prod: and.prod,
        start: and.start,
        split: and.split,
        len: and.len,
    }
}

/// Encodes the Grammar constraint into a fresh formula.
pub fn encode_grammar_sat(dag: &AndOrDag, cfg: &EncodeConfig) -> CnfFormula {
    let mut f = CnfFormula::new();
    encode_grammar_sat_into(&mut f, dag, cfg);
    f
}

/// Appends the Grammar clauses to `f`, sharing x(t, v) literals with any
/// other constraint already encoded over the same sequence.
pub fn encode_grammar_sat_into(f: &mut CnfFormula, dag: &AndOrDag, cfg: &EncodeConfig) {
    match dag.status() {
        DagStatus::Empty | DagStatus::EmptyString { accepted: false } => {
            f.mark_failed();
            return;
        }
        DagStatus::EmptyString { accepted: true } => return,
        DagStatus::NonEmpty => {}
    }
    let d = dag.domains();
    let alphabet = d.alphabet();

    // value literals and exactly-one per position
    let mut xvars: Vec<Vec<(crate::language::alphabet::SymId, Var)>> = Vec::new();
    for t in 0..d.n() {
        let row: Vec<_> = d
            .at(t)
            .iter()
            .map(|&v| (v, f.var(Atom::value(t, alphabet.name(v)))))
            .collect();
        if f.exactly_one_pending(None, t) {
            let lits: Vec<Lit> = row.iter().map(|&(_, v)| v.lit()).collect();
            add_exactly_one(f, &lits, cfg.exactly_one, None);
        }
        xvars.push(row);
    }
    let xvar = |xvars: &[Vec<(crate::language::alphabet::SymId, Var)>],
                t: usize,
                v: crate::language::alphabet::SymId|
     -> Var {
        xvars[t]
            .iter()
            .find(|&&(s, _)| s == v)
            .map(|&(_, var)| var)
            .expect("leaves reference domain candidates")
    };

    let or_var = |f: &mut CnfFormula, id: crate::grammar::dag::OrId| f.var(or_atom(dag, id));
    let and_var = |f: &mut CnfFormula, id: crate::grammar::dag::AndId| f.var(and_atom(dag, id));

    // allocate node variables in node-id order for stable numbering
    let mut ordered: Vec<(usize, Atom)> = dag
        .or_nodes()
        .iter()
        .enumerate()
        .map(|(i, or)| (or.node_id, or_atom(dag, crate::grammar::dag::OrId(i))))
        .chain(
            dag.and_nodes()
                .iter()
                .enumerate()
                .map(|(i, and)| (and.node_id, and_atom(dag, crate::grammar::dag::AndId(i)))),
        )
        .collect();
    ordered.sort_by_key(|&(id, _)| id);
    for (_, atom) in ordered {
        f.var(atom);
    }

    let root = dag.root().expect("non-empty DAG has a root");
    let root_var = or_var(f, root);
    f.add_clause([root_var.lit()]);

    for (i, or) in dag.or_nodes().iter().enumerate() {
        let id = crate::grammar::dag::OrId(i);
        let ov = or_var(f, id);
        // an OR fact needs one of its derivations
        let mut clause = vec![ov.nlit()];
        for &child in &or.children {
            clause.push(and_var(f, child).lit());
        }
        f.add_clause(clause);
        // and, unless it is the root, a parent that uses it
        if id != root {
            let mut clause = vec![ov.nlit()];
            for &parent in &or.parents {
                clause.push(and_var(f, parent).lit());
            }
            f.add_clause(clause);
        }
    }

    for (i, and) in dag.and_nodes().iter().enumerate() {
        let id = crate::grammar::dag::AndId(i);
        let av = and_var(f, id);
        // an applied production implies its parent fact and its children
        let pv = or_var(f, and.parent);
        f.add_clause([av.nlit(), pv.lit()]);
        match and.children {
            AndChildren::Leaf(t, v) => {
                let xv = xvar(&xvars, t, v);
                f.add_clause([av.nlit(), xv.lit()]);
            }
            AndChildren::Pair(l, r) => {
                let lv = or_var(f, l);
                let rv = or_var(f, r);
                f.add_clause([av.nlit(), lv.lit()]);
                f.add_clause([av.nlit(), rv.lit()]);
            }
        }
    }

    // every chosen value must be read by some applied terminal production
    for t in 0..d.n() {
        for &(v, xv) in &xvars[t] {
            let mut clause = vec![xv.nlit()];
            for (i, and) in dag.and_nodes().iter().enumerate() {
                if and.children == AndChildren::Leaf(t, v) {
                    clause.push(and_var(f, crate::grammar::dag::AndId(i)).lit());
                }
            }
            f.add_clause(clause);
        }
    }
}
