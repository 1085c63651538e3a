//! Cyclic Regular: the sequence is read as a ring. The automaton must sit
//! in the same state before position 0 and after position n-1, with that
//! state chosen existentially. One layered branch is built per candidate
//! state; a selector literal enables a branch's structural clauses, and at
//! least one feasible branch must be selected.

use std::collections::BTreeSet;

use crate::cnf::{add_exactly_one, Atom, CnfFormula, EncodeConfig, Lit};
use crate::error::{Error, Result};
use crate::language::automaton::{Automaton, AutomatonKind};
use crate::language::domains::SequenceDomains;
use crate::regular::encode::{emit_regular, RegularEmit};
use crate::regular::unfold;

/// Satisfiable iff some string within `d`, read cyclically (including the
/// wrap-around from the last position to the first), follows the
/// automaton's transition relation from some state back to itself.
pub fn encode_cyclic(
    a: &Automaton,
    d: &SequenceDomains,
    cfg: &EncodeConfig,
) -> Result<CnfFormula> {
    if a.alphabet() != d.alphabet() {
        return Err(Error::input(
            "automaton and domains must share the same alphabet",
        ));
    }
    let mut f = CnfFormula::new();
    if d.is_failed() {
        f.mark_failed();
        return Ok(f);
    }

    // shared value literals over the domains
    for t in 0..d.n() {
        let lits: Vec<Lit> = d
            .at(t)
            .iter()
            .map(|&v| f.var(Atom::value(t, d.alphabet().name(v))).lit())
            .collect();
        if f.exactly_one_pending(None, t) {
            add_exactly_one(&mut f, &lits, cfg.exactly_one, None);
        }
    }

    let mut feasible_selectors: Vec<Lit> = Vec::new();
    for k in a.states() {
        let sel = f
            .var(Atom::Selector {
                state: a.state_name(k).to_string(),
            })
            .lit();
        // same transition relation, but the run must loop from k back to k
        let branch = Automaton::new(
            AutomatonKind::Nondeterministic,
            a.states().map(|q| a.state_name(q).to_string()).collect(),
            a.alphabet().clone(),
            a.transitions().to_vec(),
            vec![k],
            BTreeSet::from([k]),
        )?;
        let g = unfold(&branch, d)?;
        if g.is_feasible() {
            feasible_selectors.push(sel);
        }
        emit_regular(
            &mut f,
            &g,
            cfg,
            &RegularEmit {
                branch: Some(k.0),
                guard: Some(!sel),
                emit_values: true,
                value_exactly_one: false,
                link_values: true,
            },
        );
    }
    if feasible_selectors.is_empty() {
        f.mark_failed();
    } else {
        f.add_clause(feasible_selectors);
    }
    Ok(f)
}
