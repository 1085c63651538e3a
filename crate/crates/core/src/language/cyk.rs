use crate::error::{Error, Result};
use crate::language::alphabet::SymId;
use crate::language::domains::SequenceDomains;
use crate::language::grammar::{CnfGrammar, CnfRhs, NtId};

/// Bottom-up derivability over a domain box: `get(nt, i, j)` says whether
/// `nt` derives some string of the box restricted to span `[i, i+j)`,
/// honoring every span predicate.
pub(crate) struct DeriveTable {
    n: usize,
    bits: Vec<bool>,
}

impl DeriveTable {
    fn idx(&self, nt: NtId, start: usize, len: usize) -> usize {
        (nt.0 * self.n + start) * (self.n + 1) + len
    }

    pub(crate) fn get(&self, nt: NtId, start: usize, len: usize) -> bool {
        debug_assert!(len >= 1 && start + len <= self.n);
        self.bits[self.idx(nt, start, len)]
    }

    fn set(&mut self, nt: NtId, start: usize, len: usize) {
        let i = self.idx(nt, start, len);
        self.bits[i] = true;
    }
}

/// Runs the CYK dynamic program over the domain box.
pub(crate) fn derive_table(g: &CnfGrammar, d: &SequenceDomains) -> DeriveTable {
    let n = d.n();
    let mut table = DeriveTable {
        n,
        bits: vec![false; g.num_nonterminals() * n.max(1) * (n + 1)],
    };
    if n == 0 {
        return table;
    }
    for p in g.productions() {
        if let CnfRhs::Terminal(v) = p.rhs {
            for t in 0..n {
                if d.contains(t, v) && p.pred.holds(t, 1) {
                    table.set(p.lhs, t, 1);
                }
            }
        }
    }
    for len in 2..=n {
        for start in 0..=n - len {
            for p in g.productions() {
                if table.get(p.lhs, start, len) {
                    continue;
                }
                let CnfRhs::Pair {
                    left,
                    left_pred,
                    right,
                    right_pred,
                } = &p.rhs
                else {
                    continue;
                };
                if !p.pred.holds(start, len) {
                    continue;
                }
                for k in 1..len {
                    if table.get(*left, start, k)
                        && table.get(*right, start + k, len - k)
                        && left_pred.holds(start, k)
                        && right_pred.holds(start + k, len - k)
                    {
                        table.set(p.lhs, start, len);
                        break;
                    }
                }
            }
        }
    }
    table
}

/// CYK recognition of a single string, honoring every span predicate. The
/// empty string is answered by the grammar's nullable-start flag.
pub fn cyk_recognize(g: &CnfGrammar, s: &[SymId]) -> Result<bool> {
    for &v in s {
        if v.0 >= g.terminals().len() {
            return Err(Error::input(format!("symbol id {v} not in alphabet")));
        }
    }
    g.validate_for_len(s.len())?;
    if s.is_empty() {
        return Ok(g.nullable_start());
    }
    let d = SequenceDomains::fixed(g.terminals().clone(), s)?;
    let table = derive_table(g, &d);
    Ok(table.get(g.start(), 0, s.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::alphabet::Alphabet;
    use crate::language::grammar::{to_cnf, Production, RestrictedGrammar, RhsItem};
    use crate::language::predicate::SpanPredicate;

    #[test]
    fn single_terminal_needs_a_start_rule() {
        // start row of the table: <a> is recognized iff some S -> a exists
        let terminals = Alphabet::new(["a", "b"]).unwrap();
        let g = RestrictedGrammar::new(
            vec!["S".into()],
            terminals,
            NtId(0),
            vec![Production {
                lhs: NtId(0),
                pred: SpanPredicate::Always,
                rhs: vec![RhsItem::t(SymId(0))],
            }],
        )
        .unwrap();
        let cnf = to_cnf(&g).unwrap();
        assert!(cyk_recognize(&cnf, &[SymId(0)]).unwrap());
        assert!(!cyk_recognize(&cnf, &[SymId(1)]).unwrap());
    }

    #[test]
    fn adding_a_production_is_monotone() {
        let terminals = Alphabet::new(["a", "b"]).unwrap();
        let base = vec![
            Production {
                lhs: NtId(0),
                pred: SpanPredicate::Always,
                rhs: vec![RhsItem::nt(NtId(1)), RhsItem::nt(NtId(1))],
            },
            Production {
                lhs: NtId(1),
                pred: SpanPredicate::Always,
                rhs: vec![RhsItem::t(SymId(0))],
            },
        ];
        let mut extended = base.clone();
        extended.push(Production {
            lhs: NtId(1),
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(SymId(1))],
        });
        let names = vec!["S".to_string(), "A".to_string()];
        let g1 = RestrictedGrammar::new(names.clone(), terminals.clone(), NtId(0), base).unwrap();
        let g2 = RestrictedGrammar::new(names, terminals.clone(), NtId(0), extended).unwrap();
        let c1 = to_cnf(&g1).unwrap();
        let c2 = to_cnf(&g2).unwrap();
        let d = SequenceDomains::full(terminals, 2);
        for s in d.iter_box() {
            let before = cyk_recognize(&c1, &s).unwrap();
            let after = cyk_recognize(&c2, &s).unwrap();
            assert!(!before || after, "recognized set shrank on {s:?}");
        }
    }
}
