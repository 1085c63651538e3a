use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::language::alphabet::SymId;
use crate::language::domains::SequenceDomains;
use crate::language::grammar::{GSym, RestrictedGrammar};

/// An Earley item: production `prod` with the dot after `dot` symbols,
/// started at position `origin`.
pub(crate) type Item = (usize, usize, usize);

/// Earley chart over a domain box. The scanner consumes any candidate symbol
/// of the position, so the chart covers every string of the box at once.
/// Span predicates gate completions: an item finishing production `p` over
/// `[i, i+j)` only advances a parent when both the production's own
/// predicate and the parent occurrence's predicate accept `(i, j)`.
pub(crate) struct Chart<'g> {
    grammar: &'g RestrictedGrammar,
    n: usize,
    pub(crate) sets: Vec<BTreeSet<Item>>,
}

pub(crate) fn build_chart<'g>(
    g: &'g RestrictedGrammar,
    d: &SequenceDomains,
) -> Result<Chart<'g>> {
    if d.alphabet() != g.terminals() {
        return Err(Error::input(
            "domains and grammar must share the same alphabet",
        ));
    }
    g.validate_for_len(d.n())?;
    let n = d.n();
    let mut sets: Vec<BTreeSet<Item>> = vec![BTreeSet::new(); n + 1];
    let mut queue: VecDeque<Item> = VecDeque::new();

    let predict = |nt, at: usize, sets: &mut Vec<BTreeSet<Item>>, queue: &mut VecDeque<Item>| {
        for (pi, p) in g.productions().iter().enumerate() {
            if p.lhs == nt && sets[at].insert((pi, 0, at)) {
                queue.push_back((pi, 0, at));
            }
        }
    };

    for j in 0..=n {
        if j == 0 {
            predict(g.start(), 0, &mut sets, &mut queue);
        } else {
            // items scanned into this set while processing the previous one
            queue.extend(sets[j].iter().copied());
        }
        while let Some((pi, dot, origin)) = queue.pop_front() {
            let p = &g.productions()[pi];
            if dot < p.rhs.len() {
                match p.rhs[dot].sym {
                    GSym::Nonterminal(nt) => predict(nt, j, &mut sets, &mut queue),
                    GSym::Terminal(v) => {
                        if j < n && d.contains(j, v) {
                            sets[j + 1].insert((pi, dot + 1, origin));
                        }
                    }
                }
            } else {
                // completion of p.lhs over [origin, j)
                if !p.pred.holds(origin, j - origin) {
                    continue;
                }
                let parents: Vec<Item> = sets[origin]
                    .iter()
                    .copied()
                    .filter(|&(qi, qdot, _)| {
                        let q = &g.productions()[qi];
                        qdot < q.rhs.len()
                            && q.rhs[qdot].sym == GSym::Nonterminal(p.lhs)
                            && q.rhs[qdot].pred.holds(origin, j - origin)
                    })
                    .collect();
                for (qi, qdot, qorigin) in parents {
                    if sets[j].insert((qi, qdot + 1, qorigin)) {
                        queue.push_back((qi, qdot + 1, qorigin));
                    }
                }
            }
        }
    }
    Ok(Chart { grammar: g, n, sets })
}

impl Chart<'_> {
    /// Completed start items spanning the whole sequence, predicate-checked.
    fn accepting_items(&self) -> Vec<Item> {
        self.sets[self.n]
            .iter()
            .copied()
            .filter(|&(pi, dot, origin)| {
                let p = &self.grammar.productions()[pi];
                origin == 0
                    && dot == p.rhs.len()
                    && p.lhs == self.grammar.start()
                    && p.pred.holds(0, self.n)
            })
            .collect()
    }

    pub(crate) fn accepts(&self) -> bool {
        !self.accepting_items().is_empty()
    }

    /// Backward support-marking pass: walks every derivation that reaches a
    /// full parse and records which (position, symbol) scans participate.
    /// Returns one supported-symbol set per position, or `None` when no
    /// string of the box is accepted.
    pub(crate) fn mark_supports(&self, d: &SequenceDomains) -> Option<Vec<BTreeSet<SymId>>> {
        let accepting = self.accepting_items();
        if accepting.is_empty() {
            return None;
        }
        let g = self.grammar;
        let mut support: Vec<BTreeSet<SymId>> = vec![BTreeSet::new(); self.n];
        let mut useful: BTreeSet<(usize, Item)> = BTreeSet::new();
        let mut queue: VecDeque<(usize, Item)> = VecDeque::new();
        for item in accepting {
            if useful.insert((self.n, item)) {
                queue.push_back((self.n, item));
            }
        }
        while let Some((j, (pi, dot, origin))) = queue.pop_front() {
            if dot == 0 {
                continue;
            }
            let p = &g.productions()[pi];
            match p.rhs[dot - 1].sym {
                GSym::Terminal(v) => {
                    debug_assert!(j >= 1 && d.contains(j - 1, v));
                    support[j - 1].insert(v);
                    let pred = (pi, dot - 1, origin);
                    if self.sets[j - 1].contains(&pred) && useful.insert((j - 1, pred)) {
                        queue.push_back((j - 1, pred));
                    }
                }
                GSym::Nonterminal(b) => {
                    let occ_pred = &p.rhs[dot - 1].pred;
                    for k in origin..j {
                        let parent = (pi, dot - 1, origin);
                        if !self.sets[k].contains(&parent) {
                            continue;
                        }
                        if !occ_pred.holds(k, j - k) {
                            continue;
                        }
                        // every completed b-production over [k, j) is a support
                        let children: Vec<Item> = self.sets[j]
                            .iter()
                            .copied()
                            .filter(|&(qi, qdot, qorigin)| {
                                let q = &g.productions()[qi];
                                qorigin == k
                                    && qdot == q.rhs.len()
                                    && q.lhs == b
                                    && q.pred.holds(k, j - k)
                            })
                            .collect();
                        if children.is_empty() {
                            continue;
                        }
                        if useful.insert((k, parent)) {
                            queue.push_back((k, parent));
                        }
                        for child in children {
                            if useful.insert((j, child)) {
                                queue.push_back((j, child));
                            }
                        }
                    }
                }
            }
        }
        Some(support)
    }
}

/// Earley recognition of a single string. Works on any restricted grammar,
/// Chomsky normal form is not required.
pub fn earley_recognize(g: &RestrictedGrammar, s: &[SymId]) -> Result<bool> {
    for &v in s {
        if v.0 >= g.terminals().len() {
            return Err(Error::input(format!("symbol id {v} not in alphabet")));
        }
    }
    let d = SequenceDomains::fixed(g.terminals().clone(), s)?;
    Ok(build_chart(g, &d)?.accepts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::alphabet::Alphabet;
    use crate::language::grammar::{NtId, Production, RhsItem};
    use crate::language::predicate::SpanPredicate;

    fn seq(a: &Alphabet, text: &str) -> Vec<SymId> {
        text.chars()
            .map(|c| a.require(&c.to_string()).unwrap())
            .collect()
    }

    /// Right-linear grammar for r* w* r*, mirroring the automaton's states.
    fn rest_work_rest_grammar() -> RestrictedGrammar {
        let terminals = Alphabet::new(["r", "w"]).unwrap();
        let (s, t, u) = (NtId(0), NtId(1), NtId(2));
        let r = SymId(0);
        let w = SymId(1);
        let prods = vec![
            // S: still in the leading rest block
            (s, vec![RhsItem::t(r), RhsItem::nt(s)]),
            (s, vec![RhsItem::t(r)]),
            (s, vec![RhsItem::t(w), RhsItem::nt(t)]),
            (s, vec![RhsItem::t(w)]),
            // T: inside the work block
            (t, vec![RhsItem::t(w), RhsItem::nt(t)]),
            (t, vec![RhsItem::t(w)]),
            (t, vec![RhsItem::t(r), RhsItem::nt(u)]),
            (t, vec![RhsItem::t(r)]),
            // U: trailing rest block
            (u, vec![RhsItem::t(r), RhsItem::nt(u)]),
            (u, vec![RhsItem::t(r)]),
        ];
        RestrictedGrammar::new(
            vec!["S".into(), "T".into(), "U".into()],
            terminals,
            s,
            prods
                .into_iter()
                .map(|(lhs, rhs)| Production {
                    lhs,
                    pred: SpanPredicate::Always,
                    rhs,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn right_linear_rest_work_rest() {
        let g = rest_work_rest_grammar();
        let a = g.terminals().clone();
        assert!(earley_recognize(&g, &seq(&a, "rwr")).unwrap());
        assert!(earley_recognize(&g, &seq(&a, "rrw")).unwrap());
        assert!(!earley_recognize(&g, &seq(&a, "wrw")).unwrap());
        assert!(!earley_recognize(&g, &seq(&a, "rwrw")).unwrap());
    }

    #[test]
    fn self_loop_grammar_is_empty() {
        // S -> S never terminates, so nothing is recognized.
        let terminals = Alphabet::new(["a"]).unwrap();
        let g = RestrictedGrammar::new(
            vec!["S".into()],
            terminals,
            NtId(0),
            vec![Production {
                lhs: NtId(0),
                pred: SpanPredicate::Always,
                rhs: vec![RhsItem::nt(NtId(0))],
            }],
        )
        .unwrap();
        assert!(!earley_recognize(&g, &[]).unwrap());
        assert!(!earley_recognize(&g, &[SymId(0)]).unwrap());
    }

    #[test]
    fn palindrome_like_grammar_without_cnf() {
        // S -> a S a | b
        let terminals = Alphabet::new(["a", "b"]).unwrap();
        let s = NtId(0);
        let g = RestrictedGrammar::new(
            vec!["S".into()],
            terminals.clone(),
            s,
            vec![
                Production {
                    lhs: s,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::t(SymId(0)), RhsItem::nt(s), RhsItem::t(SymId(0))],
                },
                Production {
                    lhs: s,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::t(SymId(1))],
                },
            ],
        )
        .unwrap();
        assert!(earley_recognize(&g, &seq(&terminals, "b")).unwrap());
        assert!(earley_recognize(&g, &seq(&terminals, "aba")).unwrap());
        assert!(earley_recognize(&g, &seq(&terminals, "aabaa")).unwrap());
        assert!(!earley_recognize(&g, &seq(&terminals, "ab")).unwrap());
        assert!(!earley_recognize(&g, &seq(&terminals, "abab")).unwrap());
    }

    #[test]
    fn empty_string_via_start_epsilon() {
        let terminals = Alphabet::new(["a"]).unwrap();
        let g = RestrictedGrammar::new(
            vec!["S".into()],
            terminals,
            NtId(0),
            vec![
                Production {
                    lhs: NtId(0),
                    pred: SpanPredicate::Always,
                    rhs: vec![],
                },
                Production {
                    lhs: NtId(0),
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::t(SymId(0))],
                },
            ],
        )
        .unwrap();
        assert!(earley_recognize(&g, &[]).unwrap());
        assert!(earley_recognize(&g, &[SymId(0)]).unwrap());
        assert!(!earley_recognize(&g, &[SymId(0), SymId(0)]).unwrap());
    }
}
