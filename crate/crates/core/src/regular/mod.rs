//! The Regular constraint: unfold an automaton over an n-position sequence
//! into a layered transition graph, decompose it into ternary transition
//! tables, encode it to CNF, and propagate it to generalized arc
//! consistency by plain reachability.

pub mod cyclic;
pub mod encode;
pub mod soft;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::language::alphabet::{Alphabet, SymId};
use crate::language::automaton::{Automaton, StateId};
use crate::language::domains::SequenceDomains;

/// One arc of the layered graph: reading `sym` at position `layer` moves
/// the automaton from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LayeredArc {
    pub layer: usize,
    pub from: StateId,
    pub sym: SymId,
    pub to: StateId,
}

/// An automaton unrolled over positions `0..n`. Layer `t` holds the states
/// reachable after `t` symbols that can still reach a final state at layer
/// `n`; arcs are pruned the same way, so every arc lies on at least one
/// accepting path.
#[derive(Debug, Clone)]
pub struct LayeredGraph {
    n: usize,
    state_names: Vec<String>,
    alphabet: Alphabet,
    layers: Vec<BTreeSet<StateId>>,
    arcs: Vec<LayeredArc>,
    domains: SequenceDomains,
    feasible: bool,
}

impl LayeredGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|s| s == name).map(StateId)
    }

    pub fn layers(&self) -> &[BTreeSet<StateId>] {
        &self.layers
    }

    pub fn arcs(&self) -> &[LayeredArc] {
        &self.arcs
    }

    pub fn arcs_at(&self, layer: usize) -> impl Iterator<Item = &LayeredArc> {
        self.arcs.iter().filter(move |a| a.layer == layer)
    }

    /// The domains the graph was unfolded against.
    pub fn domains(&self) -> &SequenceDomains {
        &self.domains
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }
}

/// Unfolds `a` over the sequence described by `d` into a layered graph,
/// keeping only arcs on some path from an initial state to a final state at
/// layer `n`. A graph without such a path is returned flagged infeasible.
pub fn unfold(a: &Automaton, d: &SequenceDomains) -> Result<LayeredGraph> {
    if a.alphabet() != d.alphabet() {
        return Err(Error::input(
            "automaton and domains must share the same alphabet",
        ));
    }
    let n = d.n();
    let state_names: Vec<String> = a.states().map(|q| a.state_name(q).to_string()).collect();

    // forward reachability
    let mut fwd: Vec<BTreeSet<StateId>> = Vec::with_capacity(n + 1);
    fwd.push(a.initial().iter().copied().collect());
    for t in 0..n {
        let mut next = BTreeSet::new();
        for &q in &fwd[t] {
            for &v in d.at(t) {
                next.extend(a.successors(q, v).iter().copied());
            }
        }
        fwd.push(next);
    }

    // backward reachability from the final states of the last layer
    let mut bwd: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); n + 1];
    bwd[n] = fwd[n]
        .iter()
        .copied()
        .filter(|q| a.finals().contains(q))
        .collect();
    for t in (0..n).rev() {
        let mut prev = BTreeSet::new();
        for &q in &fwd[t] {
            'outer: for &v in d.at(t) {
                for &to in a.successors(q, v) {
                    if bwd[t + 1].contains(&to) {
                        prev.insert(q);
                        break 'outer;
                    }
                }
            }
        }
        bwd[t] = prev;
    }

    let feasible = !bwd[n].is_empty();
    if !feasible {
        return Ok(LayeredGraph {
            n,
            state_names,
            alphabet: a.alphabet().clone(),
            layers: vec![BTreeSet::new(); n + 1],
            arcs: Vec::new(),
            domains: d.clone(),
            feasible,
        });
    }

    let layers = bwd;
    let mut arcs = Vec::new();
    for t in 0..n {
        for &q in &layers[t] {
            for &v in d.at(t) {
                for &to in a.successors(q, v) {
                    if layers[t + 1].contains(&to) {
                        arcs.push(LayeredArc {
                            layer: t,
                            from: q,
                            sym: v,
                            to,
                        });
                    }
                }
            }
        }
    }
    arcs.sort();
    Ok(LayeredGraph {
        n,
        state_names,
        alphabet: a.alphabet().clone(),
        layers,
        arcs,
        domains: d.clone(),
        feasible,
    })
}

/// One allowed-tuple table per position: the ternary constraint between the
/// state before the position, the position's value, and the state after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryTable {
    pub layer: usize,
    pub tuples: Vec<(StateId, SymId, StateId)>,
}

/// Reads the `n` ternary transition tables off the layered graph. The join
/// of the tables projects exactly onto the accepted strings inside the
/// domain box.
pub fn decompose_ternary(g: &LayeredGraph) -> Result<Vec<TernaryTable>> {
    if !g.is_feasible() {
        return Err(Error::Infeasible(
            "layered graph admits no accepting path".into(),
        ));
    }
    let mut tables = Vec::with_capacity(g.n());
    for t in 0..g.n() {
        let tuples: Vec<(StateId, SymId, StateId)> =
            g.arcs_at(t).map(|a| (a.from, a.sym, a.to)).collect();
        tables.push(TernaryTable { layer: t, tuples });
    }
    Ok(tables)
}

/// Prunes `d` to generalized arc consistency against the layered graph:
/// a value survives at a position iff some accepted string inside `d`
/// carries it there. Runs one forward and one backward sweep over the arcs.
pub fn propagate_regular(g: &LayeredGraph, d: &SequenceDomains) -> Result<SequenceDomains> {
    if g.alphabet() != d.alphabet() {
        return Err(Error::input("graph and domains must share the same alphabet"));
    }
    if g.n() != d.n() {
        return Err(Error::input(format!(
            "graph was unfolded for n={} but domains have n={}",
            g.n(),
            d.n()
        )));
    }
    let alphabet = d.alphabet().clone();
    let n = g.n();
    if !g.is_feasible() {
        return Ok(SequenceDomains::failed(alphabet, n));
    }

    let mut fwd: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); n + 1];
    fwd[0] = g.layers()[0].clone();
    for t in 0..n {
        let mut next = BTreeSet::new();
        for arc in g.arcs_at(t) {
            if fwd[t].contains(&arc.from) && d.contains(t, arc.sym) {
                next.insert(arc.to);
            }
        }
        fwd[t + 1] = next;
    }
    let mut bwd: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); n + 1];
    bwd[n] = fwd[n].intersection(&g.layers()[n]).copied().collect();
    if bwd[n].is_empty() {
        return Ok(SequenceDomains::failed(alphabet, n));
    }
    for t in (0..n).rev() {
        let mut prev = BTreeSet::new();
        for arc in g.arcs_at(t) {
            if d.contains(t, arc.sym) && bwd[t + 1].contains(&arc.to) && fwd[t].contains(&arc.from)
            {
                prev.insert(arc.from);
            }
        }
        bwd[t] = prev;
    }

    let mut sets: Vec<BTreeSet<SymId>> = Vec::with_capacity(n);
    for t in 0..n {
        let mut set = BTreeSet::new();
        for arc in g.arcs_at(t) {
            if d.contains(t, arc.sym) && fwd[t].contains(&arc.from) && bwd[t + 1].contains(&arc.to)
            {
                set.insert(arc.sym);
            }
        }
        sets.push(set);
    }
    SequenceDomains::from_sets(alphabet, sets)
}
