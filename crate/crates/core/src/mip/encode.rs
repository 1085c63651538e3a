use crate::cnf::Atom;
use crate::grammar::dag::{AndChildren, AndOrDag, DagStatus};
use crate::mip::{
    arc_var_name, node_var_name, value_var_name, LpModel, Relation,
};
use crate::regular::LayeredGraph;

/// Network-flow model of the Regular constraint: one binary per arc, one
/// unit of flow from layer 0 to the final states at layer n, conservation
/// at every intermediate (layer, state), and channeling equalities tying
/// x(t, v) to the arcs labeled v at layer t. Integer solutions correspond
/// exactly to accepted strings inside the domain box.
pub fn encode_regular_flow(g: &LayeredGraph) -> LpModel {
    let mut m = LpModel::new();
    if !g.is_feasible() {
        m.mark_failed();
        return m;
    }
    let n = g.n();
    let d = g.domains();

    let mut xvars: Vec<Vec<(crate::language::alphabet::SymId, usize)>> = Vec::with_capacity(n);
    for t in 0..n {
        let row = d
            .at(t)
            .iter()
            .map(|&v| {
                let name = value_var_name(t, d.alphabet().name(v));
                let atom = Atom::value(t, d.alphabet().name(v));
                (v, m.binary(&name, Some(atom)))
            })
            .collect();
        xvars.push(row);
    }
    let arc_vars: Vec<usize> = g
        .arcs()
        .iter()
        .map(|arc| {
            let from = g.state_name(arc.from);
            let to = g.state_name(arc.to);
            let sym = g.alphabet().name(arc.sym);
            let atom = Atom::Arc {
                layer: arc.layer,
                from: from.to_string(),
                sym: sym.to_string(),
                to: to.to_string(),
            };
            m.binary(&arc_var_name(arc.layer, from, sym, to), Some(atom))
        })
        .collect();

    if n > 0 {
        // one unit of flow leaves layer 0
        let terms: Vec<(f64, usize)> = g
            .arcs()
            .iter()
            .zip(&arc_vars)
            .filter(|(arc, _)| arc.layer == 0)
            .map(|(_, &v)| (1.0, v))
            .collect();
        m.add_constraint("src", terms, Relation::Eq, 1.0);
        // conservation at intermediate layers
        for t in 1..n {
            for &q in &g.layers()[t] {
                let mut terms: Vec<(f64, usize)> = Vec::new();
                for (arc, &v) in g.arcs().iter().zip(&arc_vars) {
                    if arc.layer == t - 1 && arc.to == q {
                        terms.push((1.0, v));
                    }
                    if arc.layer == t && arc.from == q {
                        terms.push((-1.0, v));
                    }
                }
                m.add_constraint(
                    &format!("flow_{t}_{}", g.state_name(q)),
                    terms,
                    Relation::Eq,
                    0.0,
                );
            }
        }
        // one unit of flow arrives at the final layer
        let terms: Vec<(f64, usize)> = g
            .arcs()
            .iter()
            .zip(&arc_vars)
            .filter(|(arc, _)| arc.layer == n - 1)
            .map(|(_, &v)| (1.0, v))
            .collect();
        m.add_constraint("sink", terms, Relation::Eq, 1.0);
        // channeling: x(t, v) equals the flow on arcs labeled v at layer t
        for t in 0..n {
            for &(sym, xv) in &xvars[t] {
                let mut terms: Vec<(f64, usize)> = vec![(1.0, xv)];
                for (arc, &av) in g.arcs().iter().zip(&arc_vars) {
                    if arc.layer == t && arc.sym == sym {
                        terms.push((-1.0, av));
                    }
                }
                m.add_constraint(
                    &format!("chan_{t}_{}", d.alphabet().name(sym)),
                    terms,
                    Relation::Eq,
                    0.0,
                );
            }
        }
    }
    m
}

/// Linearized AND/OR model of the Grammar constraint with the single-parse
/// rule: a selected OR-node selects exactly one child AND-node, a selected
/// non-root OR-node must serve a selected parent, and a selected AND-node
/// forces its children. Feasible integer solutions are in bijection with
/// parse trees of strings in the language inside the box.
pub fn encode_grammar_mip(dag: &AndOrDag) -> LpModel {
    let mut m = LpModel::new();
    match dag.status() {
        DagStatus::Empty | DagStatus::EmptyString { accepted: false } => {
            m.mark_failed();
            return m;
        }
        DagStatus::EmptyString { accepted: true } => return m,
        DagStatus::NonEmpty => {}
    }
    let d = dag.domains();
    let n = d.n();

    let mut xvars: Vec<Vec<(crate::language::alphabet::SymId, usize)>> = Vec::with_capacity(n);
    for t in 0..n {
        let row = d
            .at(t)
            .iter()
            .map(|&v| {
                let name = value_var_name(t, d.alphabet().name(v));
                (v, m.binary(&name, Some(Atom::value(t, d.alphabet().name(v)))))
            })
            .collect();
        xvars.push(row);
    }
    let xvar = |xvars: &[Vec<(crate::language::alphabet::SymId, usize)>],
                t: usize,
                v: crate::language::alphabet::SymId| {
        xvars[t]
            .iter()
            .find(|&&(s, _)| s == v)
            .map(|&(_, idx)| idx)
            .expect("leaves reference domain candidates")
    };

    // node binaries in node-id order
    let mut ordered: Vec<(usize, Atom)> = dag
        .or_nodes()
        .iter()
        .map(|or| {
            (
                or.node_id,
                Atom::OrNode {
                    nt: dag.nonterminal_name(or.nt).to_string(),
                    start: or.start,
                    len: or.len,
                },
            )
        })
        .chain(dag.and_nodes().iter().map(|and| {
            (
                and.node_id,
                Atom::AndNode {
                    prod: and.prod,
                    start: and.start,
                    split: and.split,
                    len: and.len,
                },
            )
        }))
        .collect();
    ordered.sort_by_key(|&(id, _)| id);
    let mut node_vars: Vec<usize> = vec![usize::MAX; ordered.len()];
    for (node_id, atom) in ordered {
        node_vars[node_id] = m.binary(&node_var_name(node_id), Some(atom));
    }

    let root = dag.root().expect("non-empty DAG has a root");
    let root_id = dag.or_node(root).node_id;
    m.add_constraint("root", vec![(1.0, node_vars[root_id])], Relation::Eq, 1.0);

    for or in dag.or_nodes() {
        // a selected fact picks exactly one derivation
        let mut terms: Vec<(f64, usize)> = vec![(-1.0, node_vars[or.node_id])];
        for &child in &or.children {
            terms.push((1.0, node_vars[dag.and_node(child).node_id]));
        }
        m.add_constraint(&format!("pick_{}", or.node_id), terms, Relation::Eq, 0.0);
        // and, unless it is the root, must serve some selected parent
        if or.node_id != root_id {
            let mut terms: Vec<(f64, usize)> = vec![(-1.0, node_vars[or.node_id])];
            for &parent in &or.parents {
                terms.push((1.0, node_vars[dag.and_node(parent).node_id]));
            }
            m.add_constraint(&format!("use_{}", or.node_id), terms, Relation::Ge, 0.0);
        }
    }
    for and in dag.and_nodes() {
        let av = node_vars[and.node_id];
        match and.children {
            AndChildren::Leaf(t, v) => {
                let xv = xvar(&xvars, t, v);
                m.add_constraint(
                    &format!("read_{}", and.node_id),
                    vec![(1.0, av), (-1.0, xv)],
                    Relation::Le,
                    0.0,
                );
            }
            AndChildren::Pair(l, r) => {
                for (tag, or_id) in [("l", l), ("r", r)] {
                    let ov = node_vars[dag.or_node(or_id).node_id];
                    m.add_constraint(
                        &format!("sub{tag}_{}", and.node_id),
                        vec![(1.0, av), (-1.0, ov)],
                        Relation::Le,
                        0.0,
                    );
                }
            }
        }
    }
    // exactly one value per position
    for t in 0..n {
        let terms: Vec<(f64, usize)> = xvars[t].iter().map(|&(_, idx)| (1.0, idx)).collect();
        m.add_constraint(&format!("one_{t}"), terms, Relation::Eq, 1.0);
    }
    m
}
