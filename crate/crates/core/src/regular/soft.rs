//! Soft Regular: satisfiable iff some string inside the domains lies within
//! distance `budget` of the language, under Hamming or edit distance.
//!
//! Hamming unfolds the automaton over the full alphabet (the near-miss
//! string the automaton reads), keeps the sequence variables over their own
//! domains, and raises one penalty literal per mismatched position.
//!
//! Edit distance builds a layered alignment graph over nodes
//! (position, pending insertions, state): consuming a position together
//! with an automaton move is free on a match and one edit on a mismatch,
//! consuming a position alone is a deletion, and moving the automaton alone
//! is an insertion. At most `budget` consecutive insertions fit between two
//! positions, which keeps the graph finite without excluding any alignment
//! within the budget.

use std::collections::BTreeSet;

use crate::cnf::{add_exactly_one, Atom, CnfFormula, EditAction, EncodeConfig, Lit, Var};
use crate::error::{Error, Result};
use crate::language::alphabet::SymId;
use crate::language::automaton::{Automaton, StateId};
use crate::language::domains::SequenceDomains;
use crate::regular::encode::{emit_regular, RegularEmit};
use crate::regular::unfold;
use crate::schedule::cardinality::encode_cardinality_leq;

fn check_inputs(a: &Automaton, d: &SequenceDomains) -> Result<()> {
    if a.alphabet() != d.alphabet() {
        return Err(Error::input(
            "automaton and domains must share the same alphabet",
        ));
    }
    Ok(())
}

/// Emits the x(t, v) literals over `d` with their exactly-one groups and
/// returns them as (symbol, var) rows.
fn emit_value_rows(
    f: &mut CnfFormula,
    d: &SequenceDomains,
    cfg: &EncodeConfig,
) -> Vec<Vec<(SymId, Var)>> {
    let mut rows = Vec::with_capacity(d.n());
    for t in 0..d.n() {
        let row: Vec<(SymId, Var)> = d
            .at(t)
            .iter()
            .map(|&v| (v, f.var(Atom::value(t, d.alphabet().name(v)))))
            .collect();
        if f.exactly_one_pending(None, t) {
            let lits: Vec<Lit> = row.iter().map(|&(_, v)| v.lit()).collect();
            add_exactly_one(f, &lits, cfg.exactly_one, None);
        }
        rows.push(row);
    }
    rows
}

/// Satisfiable iff some string within `d` is at Hamming distance at most
/// `budget` from some equal-length string of the language.
pub fn encode_soft_hamming(
    a: &Automaton,
    d: &SequenceDomains,
    budget: usize,
    cfg: &EncodeConfig,
) -> Result<CnfFormula> {
    check_inputs(a, d)?;
    let n = d.n();
    let mut f = CnfFormula::new();
    if d.is_failed() {
        f.mark_failed();
        return Ok(f);
    }
    let full = SequenceDomains::full(a.alphabet().clone(), n);
    let g = unfold(a, &full)?;
    if !g.is_feasible() {
        // the language holds no string of this length at all
        f.mark_failed();
        return Ok(f);
    }
    let xvars = emit_value_rows(&mut f, d, cfg);
    emit_regular(
        &mut f,
        &g,
        cfg,
        &RegularEmit {
            branch: None,
            guard: None,
            emit_values: false,
            value_exactly_one: false,
            link_values: false,
        },
    );
    let pens: Vec<Lit> = (0..n)
        .map(|t| f.var(Atom::Penalty { pos: t }).lit())
        .collect();
    // reading u while the position holds v != u costs one edit
    for arc in g.arcs() {
        let av = f
            .lookup(&Atom::Arc {
                layer: arc.layer,
                from: g.state_name(arc.from).to_string(),
                sym: g.alphabet().name(arc.sym).to_string(),
                to: g.state_name(arc.to).to_string(),
            })
            .expect("arc literal was just emitted");
        for &(v, xv) in &xvars[arc.layer] {
            if v != arc.sym {
                f.add_clause([av.nlit(), xv.nlit(), pens[arc.layer]]);
            }
        }
    }
    encode_cardinality_leq(&mut f, &pens, budget);
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct ENode {
    t: usize,
    k: usize,
    q: StateId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EKind {
    Consume(SymId),
    Delete,
    Insert(SymId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EArc {
    from: ENode,
    kind: EKind,
    to: ENode,
}

fn edit_arcs_from(a: &Automaton, node: ENode, n: usize, budget: usize) -> Vec<EArc> {
    let mut out = Vec::new();
    if node.t < n {
        for &(from, u, to) in a.transitions() {
            if from == node.q {
                out.push(EArc {
                    from: node,
                    kind: EKind::Consume(u),
                    to: ENode {
                        t: node.t + 1,
                        k: 0,
                        q: to,
                    },
                });
            }
        }
        out.push(EArc {
            from: node,
            kind: EKind::Delete,
            to: ENode {
                t: node.t + 1,
                k: 0,
                q: node.q,
            },
        });
    }
    if node.k < budget {
        for &(from, u, to) in a.transitions() {
            if from == node.q {
                out.push(EArc {
                    from: node,
                    kind: EKind::Insert(u),
                    to: ENode {
                        t: node.t,
                        k: node.k + 1,
                        q: to,
                    },
                });
            }
        }
    }
    out.sort();
    out
}

/// Satisfiable iff some string within `d` has Levenshtein distance at most
/// `budget` to the language.
pub fn encode_soft_edit(
    a: &Automaton,
    d: &SequenceDomains,
    budget: usize,
    cfg: &EncodeConfig,
) -> Result<CnfFormula> {
    check_inputs(a, d)?;
    let n = d.n();
    let mut f = CnfFormula::new();
    if d.is_failed() {
        f.mark_failed();
        return Ok(f);
    }

    // alignment graph, pruned to nodes on some start-to-accept path
    let starts: BTreeSet<ENode> = a
        .initial()
        .iter()
        .map(|&q| ENode { t: 0, k: 0, q })
        .collect();
    let mut fwd: BTreeSet<ENode> = starts.clone();
    let mut queue: Vec<ENode> = starts.iter().copied().collect();
    while let Some(node) = queue.pop() {
        for arc in edit_arcs_from(a, node, n, budget) {
            if fwd.insert(arc.to) {
                queue.push(arc.to);
            }
        }
    }
    let accepts: BTreeSet<ENode> = fwd
        .iter()
        .copied()
        .filter(|node| node.t == n && a.finals().contains(&node.q))
        .collect();
    if accepts.is_empty() {
        f.mark_failed();
        return Ok(f);
    }
    // backward reachability over the forward-reachable arc set
    let all_arcs: Vec<EArc> = fwd
        .iter()
        .flat_map(|&node| edit_arcs_from(a, node, n, budget))
        .filter(|arc| fwd.contains(&arc.to))
        .collect();
    let mut bwd: BTreeSet<ENode> = accepts.clone();
    loop {
        let mut changed = false;
        for arc in &all_arcs {
            if bwd.contains(&arc.to) && bwd.insert(arc.from) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let alive = |node: &ENode| fwd.contains(node) && bwd.contains(node);
    if !starts.iter().any(alive) {
        f.mark_failed();
        return Ok(f);
    }
    let nodes: Vec<ENode> = fwd.iter().copied().filter(alive).collect();
    let arcs: Vec<EArc> = all_arcs
        .iter()
        .copied()
        .filter(|arc| alive(&arc.from) && alive(&arc.to))
        .collect();

    let xvars = emit_value_rows(&mut f, d, cfg);

    let node_atom = |node: &ENode| Atom::EditState {
        pos: node.t,
        depth: node.k,
        state: a.state_name(node.q).to_string(),
    };
    let mut zvars: Vec<Var> = Vec::with_capacity(nodes.len());
    for node in &nodes {
        zvars.push(f.var(node_atom(node)));
    }
    let zvar = |f: &CnfFormula, node: &ENode| f.lookup(&node_atom(node)).expect("node emitted");

    let arc_atom = |arc: &EArc| {
        let action = match arc.kind {
            EKind::Consume(u) => EditAction::Consume {
                auto: a.alphabet().name(u).to_string(),
            },
            EKind::Delete => EditAction::Delete,
            EKind::Insert(u) => EditAction::Insert {
                auto: a.alphabet().name(u).to_string(),
            },
        };
        Atom::EditArc {
            pos: arc.from.t,
            depth: arc.from.k,
            state: a.state_name(arc.from.q).to_string(),
            action,
            to: a.state_name(arc.to.q).to_string(),
        }
    };
    let mut avars: Vec<Var> = Vec::with_capacity(arcs.len());
    for arc in &arcs {
        avars.push(f.var(arc_atom(arc)));
    }

    // arcs imply their endpoints
    for (arc, &av) in arcs.iter().zip(&avars) {
        let from = zvar(&f, &arc.from);
        let to = zvar(&f, &arc.to);
        f.add_clause([av.nlit(), from.lit()]);
        f.add_clause([av.nlit(), to.lit()]);
    }
    // an alignment path enters every boundary exactly once at insertion
    // depth zero and visits at most one node per deeper level
    for t in 0..=n {
        for k in 0..=budget {
            let level: Vec<Lit> = nodes
                .iter()
                .zip(&zvars)
                .filter(|(node, _)| node.t == t && node.k == k)
                .map(|(_, &zv)| zv.lit())
                .collect();
            if level.is_empty() {
                continue;
            }
            if k == 0 {
                add_exactly_one(&mut f, &level, cfg.exactly_one, None);
            } else {
                for i in 0..level.len() {
                    for j in i + 1..level.len() {
                        f.add_clause([!level[i], !level[j]]);
                    }
                }
            }
        }
    }
    // non-start nodes need a live incoming arc, non-accept nodes a live
    // outgoing arc
    for (node, &zv) in nodes.iter().zip(&zvars) {
        if !starts.contains(node) {
            let mut clause = vec![zv.nlit()];
            for (arc, &av) in arcs.iter().zip(&avars) {
                if arc.to == *node {
                    clause.push(av.lit());
                }
            }
            f.add_clause(clause);
        }
        if !accepts.contains(node) {
            let mut clause = vec![zv.nlit()];
            for (arc, &av) in arcs.iter().zip(&avars) {
                if arc.from == *node {
                    clause.push(av.lit());
                }
            }
            f.add_clause(clause);
        }
    }
    // the alignment must reach an accepting node
    let accept_lits: Vec<Lit> = accepts
        .iter()
        .filter(|node| alive(node))
        .map(|node| zvar(&f, node).lit())
        .collect();
    f.add_clause(accept_lits);

    // penalties: a consumed position whose value differs from the symbol
    // the automaton read costs one edit
    let pens: Vec<Lit> = (0..n)
        .map(|t| f.var(Atom::Penalty { pos: t }).lit())
        .collect();
    let mut cost_lits: Vec<Lit> = pens.clone();
    for (arc, &av) in arcs.iter().zip(&avars) {
        match arc.kind {
            EKind::Consume(u) => {
                for &(v, xv) in &xvars[arc.from.t] {
                    if v != u {
                        f.add_clause([av.nlit(), xv.nlit(), pens[arc.from.t]]);
                    }
                }
            }
            EKind::Delete | EKind::Insert(_) => cost_lits.push(av.lit()),
        }
    }
    encode_cardinality_leq(&mut f, &cost_lits, budget);
    Ok(f)
}
