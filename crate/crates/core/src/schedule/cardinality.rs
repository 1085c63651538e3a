//! Sequential-counter cardinality encoding, shared by the demand
//! constraints, the state-visit counter, and the soft-Regular budgets.
//!
//! Counter bit (i, j) says "at least j of the first i literals are true".
//! The bits are defined by full equivalences, so unit propagation derives
//! every bit once the inputs are fixed and the fragment is satisfiable for
//! exactly the assignments meeting the bound.

use crate::cnf::{Atom, CnfFormula, Lit};

/// Builds counter bits up to `width` and returns the column of bits
/// `(L, width)` per prefix; `out[i-1][j-1]` is "at least j of first i".
fn build_counter(f: &mut CnfFormula, lits: &[Lit], width: usize) -> Vec<Vec<Lit>> {
    debug_assert!(width >= 1);
    let group = f.fresh_counter_group();
    let mut rows: Vec<Vec<Lit>> = Vec::with_capacity(lits.len());
    for (idx, &input) in lits.iter().enumerate() {
        let i = idx + 1;
        let mut row: Vec<Lit> = Vec::new();
        for j in 1..=width.min(i) {
            let s = f
                .var(Atom::CounterBit {
                    group,
                    prefix: i,
                    count: j,
                })
                .lit();
            // prev_same = s(i-1, j), absent when j > i-1
            let prev_same = if j < i { Some(rows[idx - 1][j - 1]) } else { None };
            // prev_less = s(i-1, j-1), constant true when j == 1
            let prev_less = if j == 1 {
                None
            } else {
                Some(rows[idx - 1][j - 2])
            };
            // s <-> prev_same | (input & prev_less)
            match (prev_same, prev_less) {
                (Some(a), Some(c)) => {
                    f.add_clause([!a, s]);
                    f.add_clause([!input, !c, s]);
                    f.add_clause([!s, a, input]);
                    f.add_clause([!s, a, c]);
                }
                (Some(a), None) => {
                    // j == 1: s <-> a | input
                    f.add_clause([!a, s]);
                    f.add_clause([!input, s]);
                    f.add_clause([!s, a, input]);
                }
                (None, Some(c)) => {
                    // j == i: s <-> input & c
                    f.add_clause([!input, !c, s]);
                    f.add_clause([!s, input]);
                    f.add_clause([!s, c]);
                }
                (None, None) => {
                    // i == j == 1: s <-> input
                    f.add_clause([!input, s]);
                    f.add_clause([!s, input]);
                }
            }
            row.push(s);
        }
        rows.push(row);
    }
    rows
}

/// Requires at least `k` of `lits` to be true. `k = 0` emits nothing;
/// `k > lits.len()` makes the formula immediately unsatisfiable.
pub fn encode_cardinality_geq(f: &mut CnfFormula, lits: &[Lit], k: usize) {
    if k == 0 {
        return;
    }
    if k > lits.len() {
        f.mark_failed();
        return;
    }
    let rows = build_counter(f, lits, k);
    let out = rows[lits.len() - 1][k - 1];
    f.add_clause([out]);
}

/// Requires at most `k` of `lits` to be true, by negating the counter's
/// "at least k+1" output bit. `k >= lits.len()` is vacuous.
pub fn encode_cardinality_leq(f: &mut CnfFormula, lits: &[Lit], k: usize) {
    if k >= lits.len() {
        return;
    }
    if k == 0 {
        for &l in lits {
            f.add_clause([!l]);
        }
        return;
    }
    let rows = build_counter(f, lits, k + 1);
    let out = rows[lits.len() - 1][k];
    f.add_clause([!out]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Atom;
    use crate::sat::{solve, unit_propagate, Propagation};

    fn fresh_lits(f: &mut CnfFormula, n: usize) -> Vec<Lit> {
        (0..n)
            .map(|i| f.var(Atom::Raw { index: i as u32 + 1 }).lit())
            .collect()
    }

    fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    /// Satisfiability of the fragment under a full assignment of the base
    /// literals must match the popcount test exactly.
    fn check_exact(n: usize, k: usize, geq: bool) {
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, n);
        if geq {
            encode_cardinality_geq(&mut f, &lits, k);
        } else {
            encode_cardinality_leq(&mut f, &lits, k);
        }
        for assignment in assignments(n) {
            let assumptions: Vec<Lit> = lits
                .iter()
                .zip(&assignment)
                .map(|(&l, &b)| if b { l } else { !l })
                .collect();
            let popcount = assignment.iter().filter(|&&b| b).count();
            let want = if geq { popcount >= k } else { popcount <= k };
            let got = solve(&f, &assumptions).is_some();
            assert_eq!(got, want, "n={n} k={k} geq={geq} assignment={assignment:?}");
        }
    }

    #[test]
    fn three_literals_at_least_two() {
        check_exact(3, 2, true);
    }

    #[test]
    fn exact_projection_small() {
        for n in 0..=5 {
            for k in 0..=n + 1 {
                if k <= n || k == n + 1 {
                    check_exact(n, k.min(n + 1), true);
                }
                check_exact(n, k, false);
            }
        }
    }

    #[test]
    fn k_zero_is_vacuous() {
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, 4);
        encode_cardinality_geq(&mut f, &lits, 0);
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn k_above_len_is_unsat() {
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, 2);
        encode_cardinality_geq(&mut f, &lits, 3);
        assert!(f.is_failed());
    }

    #[test]
    fn full_demand_forced_by_unit_propagation() {
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, 5);
        encode_cardinality_geq(&mut f, &lits, 5);
        match unit_propagate(&f, &[]) {
            Propagation::Fixpoint(a) => {
                for &l in &lits {
                    assert_eq!(a.lit_is_true(l), Some(true));
                }
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn leq_zero_forces_all_false() {
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, 4);
        encode_cardinality_leq(&mut f, &lits, 0);
        match unit_propagate(&f, &[]) {
            Propagation::Fixpoint(a) => {
                for &l in &lits {
                    assert_eq!(a.lit_is_true(l), Some(false));
                }
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn budget_exhaustion_propagates() {
        // with at most 1 of 3, fixing one literal true forces the others false
        let mut f = CnfFormula::new();
        let lits = fresh_lits(&mut f, 3);
        encode_cardinality_leq(&mut f, &lits, 1);
        match unit_propagate(&f, &[lits[0]]) {
            Propagation::Fixpoint(a) => {
                assert_eq!(a.lit_is_true(lits[1]), Some(false));
                assert_eq!(a.lit_is_true(lits[2]), Some(false));
            }
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }
}
