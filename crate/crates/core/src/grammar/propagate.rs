//! Monolithic Grammar propagators. Both return the generalized-arc-
//! consistent domains: a value survives at a position iff some string of
//! the domain box in the language carries it there.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::grammar::dag::build_andor_dag;
use crate::language::alphabet::SymId;
use crate::language::domains::SequenceDomains;
use crate::language::earley::build_chart;
use crate::language::grammar::{CnfGrammar, RestrictedGrammar};

/// CYK-based propagation: build the pruned AND/OR DAG and read the
/// surviving leaves. An empty DAG fails every position.
pub fn propagate_grammar_cyk(g: &CnfGrammar, d: &SequenceDomains) -> Result<SequenceDomains> {
    let dag = build_andor_dag(g, d)?;
    let alphabet = d.alphabet().clone();
    if dag.is_empty() {
        return Ok(SequenceDomains::failed(alphabet, d.n()));
    }
    let mut sets: Vec<BTreeSet<SymId>> = vec![BTreeSet::new(); d.n()];
    for &(t, v) in dag.leaves() {
        sets[t].insert(v);
    }
    SequenceDomains::from_sets(alphabet, sets)
}

/// Earley-based propagation over the domain box: a forward chart pass plus
/// a backward support-marking pass. Works on any restricted grammar and
/// prunes identically to [`propagate_grammar_cyk`] on the converted
/// grammar.
pub fn propagate_grammar_earley(
    g: &RestrictedGrammar,
    d: &SequenceDomains,
) -> Result<SequenceDomains> {
    let alphabet = d.alphabet().clone();
    if d.is_failed() {
        return Ok(SequenceDomains::failed(alphabet, d.n()));
    }
    let chart = build_chart(g, d)?;
    match chart.mark_supports(d) {
        Some(sets) => SequenceDomains::from_sets(alphabet, sets),
        None => Ok(SequenceDomains::failed(alphabet, d.n())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::alphabet::Alphabet;
    use crate::language::grammar::{to_cnf, NtId, Production, RhsItem};
    use crate::language::predicate::SpanPredicate;
    use crate::oracle::{enumerate_language, gac_oracle, LanguageSpec};

    /// L = {ab, ba}
    fn ab_ba() -> RestrictedGrammar {
        let terminals = Alphabet::new(["a", "b"]).unwrap();
        let (s, a, b) = (NtId(0), NtId(1), NtId(2));
        RestrictedGrammar::new(
            vec!["S".into(), "A".into(), "B".into()],
            terminals,
            s,
            vec![
                Production {
                    lhs: s,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::nt(a), RhsItem::nt(b)],
                },
                Production {
                    lhs: s,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::nt(b), RhsItem::nt(a)],
                },
                Production {
                    lhs: a,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::t(SymId(0))],
                },
                Production {
                    lhs: b,
                    pred: SpanPredicate::Always,
                    rhs: vec![RhsItem::t(SymId(1))],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn full_domains_keep_both_orders() {
        let g = ab_ba();
        let cnf = to_cnf(&g).unwrap();
        let d = SequenceDomains::full(g.terminals().clone(), 2);
        let cyk = propagate_grammar_cyk(&cnf, &d).unwrap();
        assert_eq!(cyk, d);
        let earley = propagate_grammar_earley(&g, &d).unwrap();
        assert_eq!(earley, d);
    }

    #[test]
    fn fixing_one_position_prunes_the_other() {
        let g = ab_ba();
        let cnf = to_cnf(&g).unwrap();
        let mut d = SequenceDomains::full(g.terminals().clone(), 2);
        d.restrict(0, [SymId(0)]);
        let want = {
            let mut w = d.clone();
            w.restrict(1, [SymId(1)]);
            w
        };
        assert_eq!(propagate_grammar_cyk(&cnf, &d).unwrap(), want);
        assert_eq!(propagate_grammar_earley(&g, &d).unwrap(), want);
    }

    #[test]
    fn empty_language_fails_domains() {
        let terminals = Alphabet::new(["a"]).unwrap();
        let g = RestrictedGrammar::new(
            vec!["S".into()],
            terminals.clone(),
            NtId(0),
            vec![Production {
                lhs: NtId(0),
                pred: SpanPredicate::Always,
                rhs: vec![RhsItem::nt(NtId(0)), RhsItem::nt(NtId(0))],
            }],
        )
        .unwrap();
        let cnf = to_cnf(&g).unwrap();
        let d = SequenceDomains::full(terminals, 3);
        assert!(propagate_grammar_cyk(&cnf, &d).unwrap().is_failed());
        assert!(propagate_grammar_earley(&g, &d).unwrap().is_failed());
    }

    #[test]
    fn non_cnf_grammar_propagates_directly() {
        // S -> a S a | b, no conversion
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
        let d = SequenceDomains::full(terminals, 3);
        let pruned = propagate_grammar_earley(&g, &d).unwrap();
        // only "aba" fits: ends pinned to a, middle to b
        assert_eq!(pruned.at(0), &std::collections::BTreeSet::from([SymId(0)]));
        assert_eq!(pruned.at(1), &std::collections::BTreeSet::from([SymId(1)]));
        assert_eq!(pruned.at(2), &std::collections::BTreeSet::from([SymId(0)]));
        // oracle agreement
        let sample = enumerate_language(LanguageSpec::Grammar(&g), &d).unwrap();
        assert_eq!(gac_oracle(&sample, &d), pruned);
    }

    #[test]
    fn fixed_accepted_string_is_a_fixpoint() {
        let g = ab_ba();
        let cnf = to_cnf(&g).unwrap();
        let s = g.terminals().parse_sequence("a b").unwrap();
        let d = SequenceDomains::fixed(g.terminals().clone(), &s).unwrap();
        assert_eq!(propagate_grammar_cyk(&cnf, &d).unwrap(), d);
        assert_eq!(propagate_grammar_earley(&g, &d).unwrap(), d);
    }
}
