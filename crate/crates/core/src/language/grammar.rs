use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::language::alphabet::{Alphabet, SymId};
use crate::language::predicate::SpanPredicate;

/// Index of a nonterminal in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NtId(pub usize);

impl fmt::Display for NtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One symbol occurrence on a production's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GSym {
    Terminal(SymId),
    Nonterminal(NtId),
}

/// A right-hand-side occurrence together with its span predicate.
/// Terminal occurrences always carry `Always` (their span is one position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsItem {
    pub sym: GSym,
    pub pred: SpanPredicate,
}

impl RhsItem {
    pub fn t(sym: SymId) -> Self {
        RhsItem {
            sym: GSym::Terminal(sym),
            pred: SpanPredicate::Always,
        }
    }

    pub fn nt(nt: NtId) -> Self {
        RhsItem {
            sym: GSym::Nonterminal(nt),
            pred: SpanPredicate::Always,
        }
    }

    pub fn nt_pred(nt: NtId, pred: SpanPredicate) -> Self {
        RhsItem {
            sym: GSym::Nonterminal(nt),
            pred,
        }
    }
}

/// A context-free production. `pred` restricts the span derived by an
/// application of this production; each nonterminal occurrence on the
/// right-hand side may carry its own restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: NtId,
    pub pred: SpanPredicate,
    pub rhs: Vec<RhsItem>,
}

/// A context-free grammar whose nonterminal occurrences may carry span
/// predicates. The empty right-hand side is allowed only on the start
/// symbol, and only when the start symbol is not referenced by any
/// production (so the empty string can be split off as a flag).
#[derive(Debug, Clone)]
pub struct RestrictedGrammar {
    nonterminals: Vec<String>,
    terminals: Alphabet,
    start: NtId,
    productions: Vec<Production>,
}

impl RestrictedGrammar {
    pub fn new(
        nonterminals: Vec<String>,
        terminals: Alphabet,
        start: NtId,
        productions: Vec<Production>,
    ) -> Result<Self> {
        if nonterminals.is_empty() {
            return Err(Error::input("grammar needs at least one nonterminal"));
        }
        let mut seen = BTreeSet::new();
        for name in &nonterminals {
            if !seen.insert(name.as_str()) {
                return Err(Error::input(format!("duplicate nonterminal {name:?}")));
            }
            if terminals.get(name).is_some() {
                return Err(Error::input(format!(
                    "{name:?} is declared both terminal and nonterminal"
                )));
            }
        }
        if start.0 >= nonterminals.len() {
            return Err(Error::input("start symbol is not a declared nonterminal"));
        }
        let mut start_on_rhs = false;
        let mut has_epsilon = false;
        for p in &productions {
            if p.lhs.0 >= nonterminals.len() {
                return Err(Error::input(format!("production lhs {} undeclared", p.lhs)));
            }
            if p.rhs.is_empty() {
                if p.lhs != start {
                    return Err(Error::input(format!(
                        "empty right-hand side is only allowed on the start symbol, not {:?}",
                        nonterminals[p.lhs.0]
                    )));
                }
                has_epsilon = true;
            }
            for item in &p.rhs {
                match item.sym {
                    GSym::Terminal(v) => {
                        if v.0 >= terminals.len() {
                            return Err(Error::input(format!("terminal id {v} undeclared")));
                        }
                        if !item.pred.is_always() {
                            return Err(Error::input(
                                "terminal occurrences cannot carry span predicates",
                            ));
                        }
                    }
                    GSym::Nonterminal(nt) => {
                        if nt.0 >= nonterminals.len() {
                            return Err(Error::input(format!("nonterminal id {nt} undeclared")));
                        }
                        if nt == start {
                            start_on_rhs = true;
                        }
                    }
                }
            }
        }
        if has_epsilon && start_on_rhs {
            return Err(Error::input(
                "a start symbol with an empty production may not appear on a right-hand side",
            ));
        }
        Ok(RestrictedGrammar {
            nonterminals,
            terminals,
            start,
            productions,
        })
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    pub fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn nonterminal_name(&self, nt: NtId) -> &str {
        &self.nonterminals[nt.0]
    }

    pub fn nonterminal(&self, name: &str) -> Option<NtId> {
        self.nonterminals.iter().position(|s| s == name).map(NtId)
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Checks every open-hours mask against sequence length `n`.
    pub fn validate_for_len(&self, n: usize) -> Result<()> {
        for p in &self.productions {
            p.pred.validate_for_len(n)?;
            for item in &p.rhs {
                item.pred.validate_for_len(n)?;
            }
        }
        Ok(())
    }

    /// True iff some production of the start symbol has an empty rhs.
    pub fn derives_empty(&self) -> bool {
        self.productions
            .iter()
            .any(|p| p.lhs == self.start && p.rhs.is_empty())
    }
}

/// Right-hand side of a production in Chomsky normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfRhs {
    Terminal(SymId),
    Pair {
        left: NtId,
        left_pred: SpanPredicate,
        right: NtId,
        right_pred: SpanPredicate,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfProduction {
    pub lhs: NtId,
    pub pred: SpanPredicate,
    pub rhs: CnfRhs,
}

/// A grammar in Chomsky normal form: every production rewrites to a single
/// terminal or to two nonterminals. `nullable_start` records whether the
/// empty string belongs to the language.
#[derive(Debug, Clone)]
pub struct CnfGrammar {
    nonterminals: Vec<String>,
    terminals: Alphabet,
    start: NtId,
    productions: Vec<CnfProduction>,
    nullable_start: bool,
    empty_language: bool,
}

impl CnfGrammar {
    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    pub fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn nonterminal_name(&self, nt: NtId) -> &str {
        &self.nonterminals[nt.0]
    }

    pub fn nonterminal(&self, name: &str) -> Option<NtId> {
        self.nonterminals.iter().position(|s| s == name).map(NtId)
    }

    pub fn productions(&self) -> &[CnfProduction] {
        &self.productions
    }

    pub fn nullable_start(&self) -> bool {
        self.nullable_start
    }

    /// True when no terminating derivation exists for the start symbol and
    /// the empty string is not in the language either.
    pub fn is_empty_language(&self) -> bool {
        self.empty_language && !self.nullable_start
    }

    pub fn validate_for_len(&self, n: usize) -> Result<()> {
        for p in &self.productions {
            p.pred.validate_for_len(n)?;
            if let CnfRhs::Pair {
                left_pred,
                right_pred,
                ..
            } = &p.rhs
            {
                left_pred.validate_for_len(n)?;
                right_pred.validate_for_len(n)?;
            }
        }
        Ok(())
    }

    /// The same grammar as a [`RestrictedGrammar`], for recognizers that work
    /// on general grammars.
    pub fn to_restricted(&self) -> RestrictedGrammar {
        let mut productions: Vec<Production> = self
            .productions
            .iter()
            .map(|p| Production {
                lhs: p.lhs,
                pred: p.pred.clone(),
                rhs: match &p.rhs {
                    CnfRhs::Terminal(v) => vec![RhsItem::t(*v)],
                    CnfRhs::Pair {
                        left,
                        left_pred,
                        right,
                        right_pred,
                    } => vec![
                        RhsItem::nt_pred(*left, left_pred.clone()),
                        RhsItem::nt_pred(*right, right_pred.clone()),
                    ],
                },
            })
            .collect();
        if self.nullable_start {
            productions.push(Production {
                lhs: self.start,
                pred: SpanPredicate::Always,
                rhs: vec![],
            });
        }
        RestrictedGrammar::new(
            self.nonterminals.clone(),
            self.terminals.clone(),
            self.start,
            productions,
        )
        .expect("a CNF grammar is a valid restricted grammar")
    }
}

/// Working state for the CNF conversion.
struct CnfBuilder {
    names: Vec<String>,
    taken: BTreeSet<String>,
    wrappers: HashMap<SymId, NtId>,
}

impl CnfBuilder {
    fn new(names: Vec<String>) -> Self {
        let taken = names.iter().cloned().collect();
        CnfBuilder {
            names,
            taken,
            wrappers: HashMap::new(),
        }
    }

    fn fresh(&mut self, base: String) -> NtId {
        let mut name = base;
        while !self.taken.insert(name.clone()) {
            name.push('\'');
        }
        self.names.push(name);
        NtId(self.names.len() - 1)
    }

    /// Nonterminal rewriting to exactly the terminal `v`.
    fn wrapper(&mut self, v: SymId, terminals: &Alphabet, out: &mut Vec<Production>) -> NtId {
        if let Some(&nt) = self.wrappers.get(&v) {
            return nt;
        }
        let nt = self.fresh(format!("T@{}", terminals.name(v)));
        self.wrappers.insert(v, nt);
        out.push(Production {
            lhs: nt,
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(v)],
        });
        nt
    }
}

/// Converts a grammar to Chomsky normal form.
///
/// Terminals inside long right-hand sides are wrapped (`T@a -> a`), longer
/// sides are binarized with fresh glue nonterminals, and unit rules are
/// eliminated by inlining. Span predicates stay attached to the original
/// occurrences: glue nonterminals carry `Always`, the production's own
/// predicate stays on the topmost binarized rule where the full span is
/// known, and unit-rule inlining conjoins every predicate that constrains
/// the shared span.
pub fn to_cnf(g: &RestrictedGrammar) -> Result<CnfGrammar> {
    let nullable_start = g.derives_empty();
    let mut b = CnfBuilder::new(g.nonterminals.clone());
    let mut staged: Vec<Production> = Vec::new();

    // TERM + BIN
    for (pi, p) in g.productions.iter().enumerate() {
        if p.rhs.is_empty() {
            continue; // captured by nullable_start
        }
        if p.rhs.len() == 1 {
            staged.push(p.clone());
            continue;
        }
        let items: Vec<RhsItem> = p
            .rhs
            .iter()
            .map(|item| match item.sym {
                GSym::Terminal(v) => RhsItem::nt(b.wrapper(v, &g.terminals, &mut staged)),
                GSym::Nonterminal(_) => item.clone(),
            })
            .collect();
        let mut lhs = p.lhs;
        let mut lhs_pred = p.pred.clone();
        let mut rest = items.as_slice();
        while rest.len() > 2 {
            let glue = b.fresh(format!("{}@{pi}@{}", g.nonterminals[p.lhs.0], rest.len()));
            staged.push(Production {
                lhs,
                pred: lhs_pred,
                rhs: vec![rest[0].clone(), RhsItem::nt(glue)],
            });
            lhs = glue;
            lhs_pred = SpanPredicate::Always;
            rest = &rest[1..];
        }
        staged.push(Production {
            lhs,
            pred: lhs_pred,
            rhs: rest.to_vec(),
        });
    }

    // UNIT: inline the non-unit productions reachable over simple unit
    // chains, conjoining every predicate that constrains the shared span.
    let nt_count = b.names.len();
    let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); nt_count];
    for (i, p) in staged.iter().enumerate() {
        by_lhs[p.lhs.0].push(i);
    }
    let is_unit = |p: &Production| p.rhs.len() == 1 && matches!(p.rhs[0].sym, GSym::Nonterminal(_));

    let mut productions: Vec<CnfProduction> = Vec::new();
    for nt in 0..nt_count {
        let mut emitted: Vec<CnfProduction> = Vec::new();
        // stack of (nonterminal, accumulated predicate, path) for DFS over unit chains
        let mut stack = vec![(NtId(nt), SpanPredicate::Always, vec![NtId(nt)])];
        while let Some((cur, acc, path)) = stack.pop() {
            for &pi in &by_lhs[cur.0] {
                let p = &staged[pi];
                if is_unit(p) {
                    let GSym::Nonterminal(next) = p.rhs[0].sym else {
                        unreachable!()
                    };
                    if path.contains(&next) {
                        continue;
                    }
                    let acc = acc
                        .clone()
                        .and(p.pred.clone())
                        .and(p.rhs[0].pred.clone());
                    let mut path = path.clone();
                    path.push(next);
                    stack.push((next, acc, path));
                } else {
                    let pred = acc.clone().and(p.pred.clone());
                    let rhs = match p.rhs.len() {
                        1 => {
                            let GSym::Terminal(v) = p.rhs[0].sym else {
                                unreachable!()
                            };
                            CnfRhs::Terminal(v)
                        }
                        2 => {
                            let (GSym::Nonterminal(l), GSym::Nonterminal(r)) =
                                (&p.rhs[0].sym, &p.rhs[1].sym)
                            else {
                                return Err(Error::Internal(
                                    "binarization left a mixed pair".into(),
                                ));
                            };
                            CnfRhs::Pair {
                                left: *l,
                                left_pred: p.rhs[0].pred.clone(),
                                right: *r,
                                right_pred: p.rhs[1].pred.clone(),
                            }
                        }
                        _ => {
                            return Err(Error::Internal(
                                "binarization left a long right-hand side".into(),
                            ))
                        }
                    };
                    let cand = CnfProduction {
                        lhs: NtId(nt),
                        pred,
                        rhs,
                    };
                    if !emitted.contains(&cand) {
                        emitted.push(cand);
                    }
                }
            }
        }
        productions.extend(emitted);
    }

    // Productivity: does the start symbol have any terminating derivation?
    let mut productive = vec![false; b.names.len()];
    loop {
        let mut changed = false;
        for p in &productions {
            if productive[p.lhs.0] {
                continue;
            }
            let ok = match &p.rhs {
                CnfRhs::Terminal(_) => true,
                CnfRhs::Pair { left, right, .. } => productive[left.0] && productive[right.0],
            };
            if ok {
                productive[p.lhs.0] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let empty_language = !productive[g.start.0];

    Ok(CnfGrammar {
        nonterminals: b.names,
        terminals: g.terminals.clone(),
        start: g.start,
        productions,
        nullable_start,
        empty_language,
    })
}
