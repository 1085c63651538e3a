//! An exact 0/1 feasibility checker for desk-scale models: backtracking
//! over the binary variables with interval pruning per constraint. This is
//! the in-tree stand-in for an external MIP solver in tests; `write_lp`
//! targets real solvers.

use crate::error::{Error, Result};
use crate::mip::{LpModel, Relation, VarKind};

struct Search<'m> {
    m: &'m LpModel,
    values: Vec<Option<bool>>,
    /// per-constraint: (current sum, min achievable remainder, max ...)
    state: Vec<(f64, f64, f64)>,
    /// constraints mentioning each variable, with coefficients
    touching: Vec<Vec<(usize, f64)>>,
}

impl<'m> Search<'m> {
    fn new(m: &'m LpModel) -> Search<'m> {
        let mut touching = vec![Vec::new(); m.vars().len()];
        let mut state = Vec::with_capacity(m.constraints().len());
        for (ci, c) in m.constraints().iter().enumerate() {
            let mut min = 0.0;
            let mut max = 0.0;
            for &(coeff, vi) in &c.terms {
                touching[vi].push((ci, coeff));
                if coeff < 0.0 {
                    min += coeff;
                } else {
                    max += coeff;
                }
            }
            state.push((0.0, min, max));
        }
        Search {
            m,
            values: vec![None; m.vars().len()],
            state,
            touching,
        }
    }

    fn constraint_ok(&self, ci: usize) -> bool {
        let c = &self.m.constraints()[ci];
        let (sum, min, max) = self.state[ci];
        let eps = 1e-9;
        match c.relation {
            Relation::Le => sum + min <= c.rhs + eps,
            Relation::Ge => sum + max >= c.rhs - eps,
            Relation::Eq => sum + min <= c.rhs + eps && sum + max >= c.rhs - eps,
        }
    }

    fn set(&mut self, vi: usize, value: bool) -> bool {
        self.values[vi] = Some(value);
        let mut ok = true;
        for &(ci, coeff) in &self.touching[vi] {
            let (sum, min, max) = &mut self.state[ci];
            if value {
                *sum += coeff;
            }
            if coeff < 0.0 {
                *min -= coeff;
            } else {
                *max -= coeff;
            }
            if !self.constraint_ok(ci) {
                ok = false;
            }
        }
        ok
    }

    fn unset(&mut self, vi: usize, value: bool) {
        self.values[vi] = None;
        for &(ci, coeff) in &self.touching[vi] {
            let (sum, min, max) = &mut self.state[ci];
            if value {
                *sum -= coeff;
            }
            if coeff < 0.0 {
                *min += coeff;
            } else {
                *max += coeff;
            }
        }
    }

    fn run(&mut self, vi: usize, collect: &mut Option<&mut Vec<Vec<bool>>>, limit: usize) -> bool {
        if vi == self.m.vars().len() {
            match collect {
                Some(out) => {
                    out.push(self.values.iter().map(|v| v.unwrap()).collect());
                    assert!(out.len() <= limit, "feasible enumeration exceeded {limit}");
                    return false; // keep enumerating
                }
                None => return true,
            }
        }
        if self.values[vi].is_some() {
            return self.run(vi + 1, collect, limit);
        }
        for value in [false, true] {
            let ok = self.set(vi, value);
            if ok && self.run(vi + 1, collect, limit) {
                self.unset(vi, value);
                return true;
            }
            self.unset(vi, value);
        }
        false
    }
}

fn require_binary(m: &LpModel) -> Result<()> {
    if m.vars().iter().any(|v| v.kind != VarKind::Binary) {
        return Err(Error::input(
            "the 0/1 checker only handles all-binary models",
        ));
    }
    Ok(())
}

/// True iff the model has a feasible 0/1 completion with the given
/// variables fixed.
pub fn feasible_with(m: &LpModel, fixed: &[(usize, bool)]) -> Result<bool> {
    require_binary(m)?;
    let mut search = Search::new(m);
    let mut ok = (0..m.constraints().len()).all(|ci| search.constraint_ok(ci));
    for &(vi, value) in fixed {
        ok &= search.set(vi, value);
    }
    Ok(ok && search.run(0, &mut None, 0))
}

/// Enumerates every feasible 0/1 assignment. Panics past `limit` (a guard
/// for tests).
pub fn enumerate_feasible(m: &LpModel, limit: usize) -> Result<Vec<Vec<bool>>> {
    require_binary(m)?;
    let mut out = Vec::new();
    let mut search = Search::new(m);
    if (0..m.constraints().len()).all(|ci| search.constraint_ok(ci)) {
        search.run(0, &mut Some(&mut out), limit);
    }
    Ok(out)
}

/// Substitutes real values into every constraint; used to check that
/// integer solutions stay feasible in the linear relaxation.
pub fn satisfies(m: &LpModel, values: &[f64]) -> bool {
    let eps = 1e-9;
    m.constraints().iter().all(|c| {
        let sum: f64 = c.terms.iter().map(|&(coeff, vi)| coeff * values[vi]).sum();
        match c.relation {
            Relation::Le => sum <= c.rhs + eps,
            Relation::Ge => sum >= c.rhs - eps,
            Relation::Eq => (sum - c.rhs).abs() <= eps,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::LpModel;

    #[test]
    fn prunes_and_enumerates() {
        // a + b + c = 2 over binaries: three solutions
        let mut m = LpModel::new();
        let a = m.binary("a", None);
        let b = m.binary("b", None);
        let c = m.binary("c", None);
        m.add_constraint(
            "two",
            vec![(1.0, a), (1.0, b), (1.0, c)],
            Relation::Eq,
            2.0,
        );
        let all = enumerate_feasible(&m, 10).unwrap();
        assert_eq!(all.len(), 3);
        assert!(feasible_with(&m, &[(a, false)]).unwrap());
        assert!(!feasible_with(&m, &[(a, false), (b, false)]).unwrap());
        for solution in &all {
            let reals: Vec<f64> = solution.iter().map(|&b| f64::from(u8::from(b))).collect();
            assert!(satisfies(&m, &reals));
        }
    }

    #[test]
    fn failed_model_is_infeasible() {
        let mut m = LpModel::new();
        m.binary("a", None);
        m.mark_failed();
        assert!(!feasible_with(&m, &[]).unwrap());
        assert!(enumerate_feasible(&m, 10).unwrap().is_empty());
    }
}
