//! CNF encoding of the Regular constraint over a layered graph.
//!
//! Value literals x(t, v) and state literals s(t, q) are connected through
//! one arc literal per layered-graph arc: an arc implies its endpoints and
//! its label, every state needs a live incoming and outgoing arc, and every
//! value needs a live arc carrying it. Together with the exactly-one groups
//! this makes unit propagation mirror the forward/backward reachability
//! pruning of the propagator.

use crate::cnf::{add_exactly_one, Atom, CnfFormula, EncodeConfig, Lit, Var};
use crate::error::{Error, Result};
use crate::language::automaton::StateId;
use crate::regular::LayeredGraph;
use crate::schedule::cardinality::{encode_cardinality_geq, encode_cardinality_leq};

/// How the structural clauses are emitted; used by the cyclic and soft
/// variants that reuse the core construction.
pub(crate) struct RegularEmit {
    /// Namespace for state/arc atoms (one per cyclic branch).
    pub branch: Option<usize>,
    /// Literal appended to every structural clause, disabling the branch
    /// unless the guard's complement holds.
    pub guard: Option<Lit>,
    /// Create the x(t, v) literals over the graph's domain box.
    pub emit_values: bool,
    /// Emit the exactly-one-value-per-position groups.
    pub value_exactly_one: bool,
    /// Tie value literals to arc labels in both directions.
    pub link_values: bool,
}

impl Default for RegularEmit {
    fn default() -> Self {
        RegularEmit {
            branch: None,
            guard: None,
            emit_values: true,
            value_exactly_one: true,
            link_values: true,
        }
    }
}

fn structural(branch: Option<usize>, atom: Atom) -> Atom {
    match branch {
        Some(b) => Atom::scoped(b, atom),
        None => atom,
    }
}

pub(crate) fn emit_regular(
    f: &mut CnfFormula,
    g: &LayeredGraph,
    cfg: &EncodeConfig,
    opts: &RegularEmit,
) {
    if !g.is_feasible() {
        match opts.guard {
            // an infeasible branch just forces its selector off
            Some(guard) => f.add_clause([guard]),
            None => f.mark_failed(),
        }
        return;
    }
    let n = g.n();
    let d = g.domains();
    let guarded = |mut clause: Vec<Lit>| {
        if let Some(guard) = opts.guard {
            clause.push(guard);
        }
        clause
    };

    // value literals, positions ascending, symbols in alphabet order
    let mut xvars: Vec<Vec<(usize, Var)>> = Vec::with_capacity(n);
    if opts.emit_values {
        for t in 0..n {
            let row: Vec<(usize, Var)> = d
                .at(t)
                .iter()
                .map(|&v| (v.0, f.var(Atom::value(t, d.alphabet().name(v)))))
                .collect();
            xvars.push(row);
        }
        if opts.value_exactly_one {
            for t in 0..n {
                if f.exactly_one_pending(None, t) {
                    let lits: Vec<Lit> = xvars[t].iter().map(|&(_, v)| v.lit()).collect();
                    add_exactly_one(f, &lits, cfg.exactly_one, opts.guard);
                }
            }
        }
    } else {
        debug_assert!(!opts.link_values && !opts.value_exactly_one);
        xvars.resize(n, Vec::new());
    }
    let xvar = |t: usize, sym: usize| -> Var {
        xvars[t]
            .iter()
            .find(|&&(s, _)| s == sym)
            .map(|&(_, v)| v)
            .expect("arc labels come from the domain")
    };

    // state literals, layers ascending, states in declaration order
    let mut svars: Vec<Vec<(StateId, Var)>> = Vec::with_capacity(n + 1);
    for (t, layer) in g.layers().iter().enumerate() {
        let row: Vec<(StateId, Var)> = layer
            .iter()
            .map(|&q| {
                let atom = structural(
                    opts.branch,
                    Atom::State {
                        layer: t,
                        state: g.state_name(q).to_string(),
                    },
                );
                (q, f.var(atom))
            })
            .collect();
        let lits: Vec<Lit> = row.iter().map(|&(_, v)| v.lit()).collect();
        add_exactly_one(f, &lits, cfg.exactly_one, opts.guard);
        svars.push(row);
    }
    let svar = |t: usize, q: StateId| -> Var {
        svars[t]
            .iter()
            .find(|&&(s, _)| s == q)
            .map(|&(_, v)| v)
            .expect("arc endpoints are layer members")
    };

    // arc literals in (layer, from, symbol, to) order
    let avars: Vec<Var> = g
        .arcs()
        .iter()
        .map(|arc| {
            let atom = structural(
                opts.branch,
                Atom::Arc {
                    layer: arc.layer,
                    from: g.state_name(arc.from).to_string(),
                    sym: g.alphabet().name(arc.sym).to_string(),
                    to: g.state_name(arc.to).to_string(),
                },
            );
            f.var(atom)
        })
        .collect();

    // an arc implies its endpoints and (when linked) its label
    for (arc, &av) in g.arcs().iter().zip(&avars) {
        f.add_clause(guarded(vec![av.nlit(), svar(arc.layer, arc.from).lit()]));
        f.add_clause(guarded(vec![av.nlit(), svar(arc.layer + 1, arc.to).lit()]));
        if opts.link_values {
            f.add_clause(guarded(vec![av.nlit(), xvar(arc.layer, arc.sym.0).lit()]));
        }
    }

    // every visited state lies on a live arc in both directions
    for (t, row) in svars.iter().enumerate() {
        for &(q, sv) in row {
            if t < n {
                let mut clause = vec![sv.nlit()];
                for (arc, &av) in g.arcs().iter().zip(&avars) {
                    if arc.layer == t && arc.from == q {
                        clause.push(av.lit());
                    }
                }
                f.add_clause(guarded(clause));
            }
            if t > 0 {
                let mut clause = vec![sv.nlit()];
                for (arc, &av) in g.arcs().iter().zip(&avars) {
                    if arc.layer == t - 1 && arc.to == q {
                        clause.push(av.lit());
                    }
                }
                f.add_clause(guarded(clause));
            }
        }
    }

    // every chosen value is witnessed by a live arc carrying it
    if opts.link_values {
        for t in 0..n {
            for &(sym, xv) in &xvars[t] {
                let mut clause = vec![xv.nlit()];
                for (arc, &av) in g.arcs().iter().zip(&avars) {
                    if arc.layer == t && arc.sym.0 == sym {
                        clause.push(av.lit());
                    }
                }
                f.add_clause(guarded(clause));
            }
        }
    }
}

/// Encodes the Regular constraint into a fresh formula. Satisfying
/// assignments restricted to the x-literals are exactly the accepted
/// strings inside the graph's domain box; unit propagation on the clauses
/// reaches the same fixpoint as [`propagate_regular`](crate::regular::propagate_regular).
pub fn encode_regular_sat(g: &LayeredGraph, cfg: &EncodeConfig) -> CnfFormula {
    let mut f = CnfFormula::new();
    encode_regular_sat_into(&mut f, g, cfg);
    f
}

/// Same as [`encode_regular_sat`] but appends to an existing formula so the
/// x(t, v) literals can be shared with other constraints on the sequence.
pub fn encode_regular_sat_into(f: &mut CnfFormula, g: &LayeredGraph, cfg: &EncodeConfig) {
    emit_regular(f, g, cfg, &RegularEmit::default());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSense {
    AtMost,
    AtLeast,
}

/// Bounds how often the run visits `state`, counting layers 0..=n. The
/// clauses constrain the s(t, q) literals already present in `f`, so the
/// Regular constraint must have been encoded into `f` first.
pub fn encode_state_count(
    f: &mut CnfFormula,
    g: &LayeredGraph,
    state: &str,
    bound: usize,
    sense: CountSense,
) -> Result<()> {
    let q = g.state_id(state).ok_or_else(|| {
        Error::input(format!("state {state:?} is not a state of the automaton"))
    })?;
    let mut lits: Vec<Lit> = Vec::new();
    for (t, layer) in g.layers().iter().enumerate() {
        if layer.contains(&q) {
            let var = f
                .lookup(&Atom::State {
                    layer: t,
                    state: state.to_string(),
                })
                .ok_or_else(|| {
                    Error::input("encode the Regular constraint before counting state visits")
                })?;
            lits.push(var.lit());
        }
    }
    match sense {
        CountSense::AtMost => encode_cardinality_leq(f, &lits, bound),
        CountSense::AtLeast => encode_cardinality_geq(f, &lits, bound),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::language::alphabet::{Alphabet, SymId};
    use crate::language::automaton::{Automaton, AutomatonKind};
    use crate::language::domains::SequenceDomains;
    use crate::regular::testutil::rest_work_rest;
    use crate::regular::unfold;
    use crate::sat::{enumerate_projected, unit_propagate, Propagation};

    fn value_vars(f: &mut CnfFormula, d: &SequenceDomains) -> Vec<Var> {
        let mut vars = Vec::new();
        for t in 0..d.n() {
            for &v in d.at(t) {
                vars.push(f.var(Atom::value(t, d.alphabet().name(v))));
            }
        }
        vars
    }

    fn decode(f: &CnfFormula, model: &[(Var, bool)], n: usize) -> Vec<String> {
        let mut out = vec![None; n];
        for &(v, b) in model {
            if !b {
                continue;
            }
            if let Atom::Value { pos, sym } = f.atom(v) {
                assert!(out[*pos].is_none(), "two values at position {pos}");
                out[*pos] = Some(sym.clone());
            }
        }
        out.into_iter().map(|s| s.expect("position unassigned")).collect()
    }

    #[test]
    fn models_project_to_accepted_strings() {
        let a = rest_work_rest();
        let d = SequenceDomains::full(a.alphabet().clone(), 3);
        let g = unfold(&a, &d).unwrap();
        let mut f = encode_regular_sat(&g, &EncodeConfig::default());
        let proj = value_vars(&mut f, &d);
        let models = enumerate_projected(&f, &proj, 64);
        let mut strings = BTreeSet::new();
        for model in &models {
            let word = decode(&f, model, 3);
            let seq = a.alphabet().parse_sequence(&word.join(" ")).unwrap();
            assert!(a.dfa_accepts(&seq).unwrap(), "decoded {word:?} rejected");
            strings.insert(word);
        }
        assert_eq!(strings.len(), 7);
        assert_eq!(models.len(), 7);
    }

    #[test]
    fn unit_propagation_forces_supported_value() {
        // fixing w at position 0 and r at position 1 leaves only "wrr"
        let a = rest_work_rest();
        let d = SequenceDomains::full(a.alphabet().clone(), 3);
        let g = unfold(&a, &d).unwrap();
        let mut f = encode_regular_sat(&g, &EncodeConfig::default());
        let x0w = f.var(Atom::value(0, "w")).lit();
        let x1r = f.var(Atom::value(1, "r")).lit();
        match unit_propagate(&f, &[x0w, x1r]) {
            Propagation::Fixpoint(fp) => {
                let x2r = f.lookup(&Atom::value(2, "r")).unwrap();
                let x2w = f.lookup(&Atom::value(2, "w")).unwrap();
                assert_eq!(fp.get(x2r), Some(true));
                assert_eq!(fp.get(x2w), Some(false));
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn value_without_support_is_a_conflict() {
        // the automaton accepts only r's; forcing w at position 1 wipes out
        let alphabet = Alphabet::new(["r", "w"]).unwrap();
        let a = Automaton::new(
            AutomatonKind::Deterministic,
            vec!["q".into()],
            alphabet.clone(),
            vec![(crate::language::automaton::StateId(0), SymId(0), crate::language::automaton::StateId(0))],
            vec![crate::language::automaton::StateId(0)],
            BTreeSet::from([crate::language::automaton::StateId(0)]),
        )
        .unwrap();
        let mut d = SequenceDomains::full(alphabet, 3);
        d.restrict(1, [SymId(1)]);
        let g = unfold(&a, &d).unwrap();
        let f = encode_regular_sat(&g, &EncodeConfig::default());
        assert!(f.is_failed());
        assert!(unit_propagate(&f, &[]).is_conflict());
    }

    /// Worker automaton: up to three consecutive shifts (w), then a break
    /// (b) is forced. State z3 marks "three consecutive shifts".
    fn stretch_automaton() -> Automaton {
        let alphabet = Alphabet::new(["w", "b"]).unwrap();
        let w = SymId(0);
        let b = SymId(1);
        let states: Vec<String> = (0..4).map(|i| format!("z{i}")).collect();
        let q = |i: usize| crate::language::automaton::StateId(i);
        let mut transitions = Vec::new();
        for i in 0..4 {
            if i < 3 {
                transitions.push((q(i), w, q(i + 1)));
            }
            transitions.push((q(i), b, q(0)));
        }
        Automaton::new(
            AutomatonKind::Deterministic,
            states,
            alphabet,
            transitions,
            vec![q(0)],
            (0..4).map(q).collect(),
        )
        .unwrap()
    }

    #[test]
    fn state_count_bounds_visits() {
        let a = stretch_automaton();
        let n = 6;
        let d = SequenceDomains::full(a.alphabet().clone(), n);
        let g = unfold(&a, &d).unwrap();
        let mut f = encode_regular_sat(&g, &EncodeConfig::default());
        let before = f.num_clauses();
        // a bound past the layer count is vacuous
        encode_state_count(&mut f, &g, "z3", n + 1, CountSense::AtMost).unwrap();
        assert_eq!(f.num_clauses(), before);
        encode_state_count(&mut f, &g, "z3", 1, CountSense::AtMost).unwrap();

        let mut proj = value_vars(&mut f, &d);
        proj.sort();
        proj.dedup();
        let models = enumerate_projected(&f, &proj, 256);
        let mut strings = BTreeSet::new();
        for model in &models {
            strings.insert(decode(&f, model, n));
        }
        // direct enumeration: strings visiting z3 at most once
        let mut expect = BTreeSet::new();
        for s in d.iter_box() {
            if !a.dfa_accepts(&s).unwrap() {
                continue;
            }
            let mut q = crate::language::automaton::StateId(0);
            let mut visits = usize::from(q.0 == 3);
            for &v in &s {
                q = a.successors(q, v)[0];
                visits += usize::from(q.0 == 3);
            }
            if visits <= 1 {
                expect.insert(
                    s.iter()
                        .map(|&v| a.alphabet().name(v).to_string())
                        .collect::<Vec<_>>(),
                );
            }
        }
        assert_eq!(strings, expect);
    }

    #[test]
    fn state_count_zero_forces_states_false() {
        let a = stretch_automaton();
        let d = SequenceDomains::full(a.alphabet().clone(), 4);
        let g = unfold(&a, &d).unwrap();
        let mut f = encode_regular_sat(&g, &EncodeConfig::default());
        encode_state_count(&mut f, &g, "z3", 0, CountSense::AtMost).unwrap();
        match unit_propagate(&f, &[]) {
            Propagation::Fixpoint(fp) => {
                for (t, layer) in g.layers().iter().enumerate() {
                    if layer.contains(&g.state_id("z3").unwrap()) {
                        let v = f
                            .lookup(&Atom::State {
                                layer: t,
                                state: "z3".into(),
                            })
                            .unwrap();
                        assert_eq!(fp.get(v), Some(false));
                    }
                }
            }
            Propagation::Conflict => panic!("still satisfiable without visiting z3"),
        }
    }

    #[test]
    fn unknown_state_is_an_input_error() {
        let a = stretch_automaton();
        let d = SequenceDomains::full(a.alphabet().clone(), 2);
        let g = unfold(&a, &d).unwrap();
        let mut f = encode_regular_sat(&g, &EncodeConfig::default());
        assert!(encode_state_count(&mut f, &g, "zz", 1, CountSense::AtMost).is_err());
    }
}
