//! A minimal watched-literal unit propagator plus a desk-scale DPLL search
//! on top of it. The propagator is what the GAC-equivalence checks run; the
//! search exists so tests and the bundled `minisolve` binary can enumerate
//! models without an external tool. It is not meant to compete with real
//! SAT solvers.

use std::collections::BTreeSet;

use crate::cnf::{Atom, CnfFormula, Lit, Var};
use crate::language::domains::SequenceDomains;

/// A (possibly partial) truth assignment indexed by variable.
#[derive(Debug, Clone)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn get(&self, v: Var) -> Option<bool> {
        self.values[(v.0 - 1) as usize]
    }

    pub fn lit_is_true(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|b| b == l.is_positive())
    }
}

/// Result of running unit propagation to fixpoint.
#[derive(Debug)]
pub enum Propagation {
    Fixpoint(Assignment),
    Conflict,
}

impl Propagation {
    pub fn is_conflict(&self) -> bool {
        matches!(self, Propagation::Conflict)
    }
}

struct Engine {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    values: Vec<Option<bool>>,
    /// preferred first polarity per variable
    phases: Vec<bool>,
    trail: Vec<Lit>,
    qhead: usize,
    root_conflict: bool,
    search_hint: usize,
}

fn slot(l: Lit) -> usize {
    ((l.var().0 - 1) * 2) as usize + usize::from(!l.is_positive())
}

impl Engine {
    fn new(
        num_vars: usize,
        phases: Vec<bool>,
        clause_iter: impl IntoIterator<Item = Vec<Lit>>,
    ) -> Engine {
        let mut e = Engine {
            clauses: Vec::new(),
            watches: vec![Vec::new(); num_vars * 2],
            values: vec![None; num_vars],
            phases,
            trail: Vec::new(),
            qhead: 0,
            root_conflict: false,
            search_hint: 0,
        };
        for clause in clause_iter {
            e.add_clause(clause);
        }
        e
    }

    fn add_clause(&mut self, clause: Vec<Lit>) {
        match clause.len() {
            0 => self.root_conflict = true,
            1 => {
                if !self.assign(clause[0]) {
                    self.root_conflict = true;
                }
            }
            _ => {
                let ci = self.clauses.len();
                self.watches[slot(clause[0])].push(ci);
                self.watches[slot(clause[1])].push(ci);
                self.clauses.push(clause);
            }
        }
    }

    fn value(&self, l: Lit) -> Option<bool> {
        self.values[(l.var().0 - 1) as usize].map(|b| b == l.is_positive())
    }

    fn assign(&mut self, l: Lit) -> bool {
        match self.value(l) {
            Some(true) => true,
            Some(false) => false,
            None => {
                self.values[(l.var().0 - 1) as usize] = Some(l.is_positive());
                self.trail.push(l);
                true
            }
        }
    }

    /// Propagates all queued assignments; true on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let ws = std::mem::take(&mut self.watches[slot(false_lit)]);
            let mut keep = Vec::with_capacity(ws.len());
            let mut conflict = false;
            for (wi, &ci) in ws.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&ws[wi..]);
                    break;
                }
                enum Action {
                    Keep,
                    MovedTo(Lit),
                    Unit(Lit),
                }
                let action = {
                    let values = &self.values;
                    let lit_value = |l: Lit| {
                        values[(l.var().0 - 1) as usize].map(|b| b == l.is_positive())
                    };
                    let clause = &mut self.clauses[ci];
                    if clause[0] == false_lit {
                        clause.swap(0, 1);
                    }
                    let first = clause[0];
                    if lit_value(first) == Some(true) {
                        Action::Keep
                    } else {
                        let mut moved = None;
                        for k in 2..clause.len() {
                            if lit_value(clause[k]) != Some(false) {
                                clause.swap(1, k);
                                moved = Some(clause[1]);
                                break;
                            }
                        }
                        match moved {
                            Some(w) => Action::MovedTo(w),
                            None => Action::Unit(first),
                        }
                    }
                };
                match action {
                    Action::Keep => keep.push(ci),
                    Action::MovedTo(w) => self.watches[slot(w)].push(ci),
                    Action::Unit(first) => {
                        keep.push(ci);
                        if !self.assign(first) {
                            conflict = true;
                        }
                    }
                }
            }
            self.watches[slot(false_lit)] = keep;
            if conflict {
                return true;
            }
        }
        false
    }

    fn backtrack(&mut self, to: usize) {
        while self.trail.len() > to {
            let l = self.trail.pop().unwrap();
            self.values[(l.var().0 - 1) as usize] = None;
        }
        self.qhead = to;
    }

    fn pick_unassigned(&mut self) -> Option<Var> {
        while self.search_hint < self.values.len() {
            if self.values[self.search_hint].is_none() {
                return Some(Var(self.search_hint as u32 + 1));
            }
            self.search_hint += 1;
        }
        None
    }

    fn assignment(&self) -> Assignment {
        Assignment {
            values: self.values.clone(),
        }
    }

    /// Chronological DPLL. Assumptions were already enqueued.
    fn search(&mut self) -> bool {
        if self.root_conflict || self.propagate() {
            return false;
        }
        // (trail mark, decided literal, already flipped, search hint)
        let mut decisions: Vec<(usize, Lit, bool, usize)> = Vec::new();
        loop {
            let var = match self.pick_unassigned() {
                Some(v) => v,
                None => return true,
            };
            let lit = if self.phases[(var.0 - 1) as usize] {
                var.lit()
            } else {
                var.nlit()
            };
            decisions.push((self.trail.len(), lit, false, self.search_hint));
            if !self.assign(lit) {
                unreachable!("decision variable was unassigned");
            }
            while self.propagate() {
                loop {
                    match decisions.pop() {
                        None => return false,
                        Some((mark, lit, flipped, hint)) => {
                            self.backtrack(mark);
                            self.search_hint = hint;
                            if !flipped {
                                decisions.push((mark, !lit, true, hint));
                                assert!(self.assign(!lit));
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Decide sequence values true-first so models surface quickly; keep
/// structural variables (states, arcs, nodes, counters) off until the
/// support clauses force them.
fn default_phases(f: &CnfFormula) -> Vec<bool> {
    (1..=f.num_vars() as u32)
        .map(|i| {
            let mut atom = f.atom(Var(i));
            while let Atom::Scoped { inner, .. } = atom {
                atom = inner;
            }
            matches!(atom, Atom::Value { .. } | Atom::Raw { .. })
        })
        .collect()
}

fn engine_for(f: &CnfFormula, assumptions: &[Lit]) -> Engine {
    let mut e = Engine::new(f.num_vars(), default_phases(f), f.clauses().iter().cloned());
    for &l in assumptions {
        if !e.assign(l) {
            e.root_conflict = true;
        }
    }
    e
}

/// Runs unit propagation to fixpoint under the given assumptions.
pub fn unit_propagate(f: &CnfFormula, assumptions: &[Lit]) -> Propagation {
    let mut e = engine_for(f, assumptions);
    if e.root_conflict || e.propagate() {
        Propagation::Conflict
    } else {
        Propagation::Fixpoint(e.assignment())
    }
}

/// Finds one model, if any.
pub fn solve(f: &CnfFormula, assumptions: &[Lit]) -> Option<Assignment> {
    let mut e = engine_for(f, assumptions);
    if e.search() {
        Some(e.assignment())
    } else {
        None
    }
}

/// Enumerates all models projected onto `proj`, blocking each projection as
/// it is found. Panics if more than `limit` projections exist (a guard for
/// tests, not an API for production counting).
pub fn enumerate_projected(f: &CnfFormula, proj: &[Var], limit: usize) -> Vec<Vec<(Var, bool)>> {
    let mut found: Vec<Vec<(Var, bool)>> = Vec::new();
    let mut blocked: Vec<Vec<Lit>> = Vec::new();
    loop {
        let mut e = Engine::new(
            f.num_vars(),
            default_phases(f),
            f.clauses().iter().cloned().chain(blocked.iter().cloned()),
        );
        if !e.search() {
            return found;
        }
        let a = e.assignment();
        let model: Vec<(Var, bool)> = proj
            .iter()
            .map(|&v| (v, a.get(v).unwrap_or(false)))
            .collect();
        blocked.push(
            model
                .iter()
                .map(|&(v, b)| if b { v.nlit() } else { v.lit() })
                .collect(),
        );
        found.push(model);
        assert!(found.len() <= limit, "projection enumeration exceeded {limit}");
    }
}

/// Reads the surviving per-position values out of a propagation result:
/// a candidate survives if its value variable exists and was not forced
/// false. Conflicts and values that were never encoded count as pruned.
pub fn project_value_domains(
    f: &CnfFormula,
    outcome: &Propagation,
    d: &SequenceDomains,
    scope: Option<usize>,
) -> SequenceDomains {
    let alphabet = d.alphabet().clone();
    let fixpoint = match outcome {
        Propagation::Conflict => return SequenceDomains::failed(alphabet, d.n()),
        Propagation::Fixpoint(a) => a,
    };
    let mut sets = Vec::with_capacity(d.n());
    for t in 0..d.n() {
        let mut set = BTreeSet::new();
        for &v in d.at(t) {
            let inner = Atom::value(t, alphabet.name(v));
            let atom = match scope {
                Some(s) => Atom::scoped(s, inner),
                None => inner,
            };
            if let Some(var) = f.lookup(&atom) {
                if fixpoint.get(var) != Some(false) {
                    set.insert(v);
                }
            }
        }
        sets.push(set);
    }
    SequenceDomains::from_sets(alphabet, sets).expect("candidates come from the same alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Atom;

    fn formula(clauses: &[&[i32]]) -> CnfFormula {
        let max = clauses
            .iter()
            .flat_map(|c| c.iter())
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0);
        let mut f = CnfFormula::new();
        for i in 1..=max {
            f.var(Atom::Raw { index: i });
        }
        for c in clauses {
            f.add_clause(c.iter().map(|&l| Lit(l)));
        }
        f
    }

    #[test]
    fn unit_chain_propagates() {
        let f = formula(&[&[1], &[-1, 2], &[-2, 3]]);
        match unit_propagate(&f, &[]) {
            Propagation::Fixpoint(a) => {
                assert_eq!(a.get(Var(1)), Some(true));
                assert_eq!(a.get(Var(2)), Some(true));
                assert_eq!(a.get(Var(3)), Some(true));
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn conflict_detected() {
        let f = formula(&[&[1], &[-1, 2], &[-2], &[3, 4]]);
        assert!(unit_propagate(&f, &[]).is_conflict());
    }

    #[test]
    fn assumptions_drive_propagation() {
        let f = formula(&[&[-1, 2], &[3, 4]]);
        match unit_propagate(&f, &[Lit(1), Lit(-3)]) {
            Propagation::Fixpoint(a) => {
                assert_eq!(a.get(Var(2)), Some(true));
                assert_eq!(a.get(Var(4)), Some(true));
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn solve_and_enumerate() {
        // exactly-one over three variables: three models
        let f = formula(&[&[1, 2, 3], &[-1, -2], &[-1, -3], &[-2, -3]]);
        assert!(solve(&f, &[]).is_some());
        assert!(solve(&f, &[Lit(1), Lit(2)]).is_none());
        let models = enumerate_projected(&f, &[Var(1), Var(2), Var(3)], 10);
        assert_eq!(models.len(), 3);
    }

    #[test]
    fn unsat_detected_by_search() {
        let f = formula(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert!(solve(&f, &[]).is_none());
    }
}
