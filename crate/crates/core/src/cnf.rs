//! CNF formulas with a semantic variable map and DIMACS output.
//!
//! Every variable is tied to exactly one [`Atom`] describing what it means;
//! the map is emitted as `c map <var> <atom>` comment lines so solutions can
//! be decoded from any solver's output. Variable indices are allocated in
//! encounter order, and all encoders enumerate atoms in a fixed order
//! (positions ascending, symbols in alphabet order, states in declaration
//! order), so identical inputs produce byte-identical DIMACS files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Not;

/// 1-based variable index, DIMACS style.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn lit(self) -> Lit {
        Lit(self.0 as i32)
    }

    pub fn nlit(self) -> Lit {
        Lit(-(self.0 as i32))
    }
}

/// A literal: a variable or its negation, encoded as a signed index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(pub i32);

impl Lit {
    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The semantic meaning of a CNF (or LP) variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Position `pos` of the sequence takes symbol `sym`.
    Value { pos: usize, sym: String },
    /// The automaton is in `state` after `layer` symbols.
    State { layer: usize, state: String },
    /// The layered-graph arc (layer, from, sym, to) is on the chosen path.
    Arc {
        layer: usize,
        from: String,
        sym: String,
        to: String,
    },
    /// OR-node of the AND/OR DAG: nonterminal `nt` spans `[start, start+len)`.
    OrNode {
        nt: String,
        start: usize,
        len: usize,
    },
    /// AND-node: production `prod` applied at `start` with split `split`
    /// over length `len`.
    AndNode {
        prod: usize,
        start: usize,
        split: usize,
        len: usize,
    },
    /// Bit `count` of a sequential counter after `prefix` literals.
    CounterBit {
        group: usize,
        prefix: usize,
        count: usize,
    },
    /// Ladder bit of a sequential at-most-one chain.
    Ladder { group: usize, pos: usize },
    /// Mismatch penalty at a sequence position (soft constraints).
    Penalty { pos: usize },
    /// Branch selector (cyclic encoding): the run starts and ends in `state`.
    Selector { state: String },
    /// Node of the edit-distance graph: `depth` insertions pending at
    /// boundary `pos`, automaton in `state`.
    EditState {
        pos: usize,
        depth: usize,
        state: String,
    },
    /// Arc of the edit-distance graph.
    EditArc {
        pos: usize,
        depth: usize,
        state: String,
        action: EditAction,
        to: String,
    },
    /// Rows of employees `pair` and `pair + 1` agree on slots `0..=pos`.
    LexEq { pair: usize, pos: usize },
    /// An atom namespaced by an enclosing scope (e.g. one employee's copy).
    Scoped { scope: usize, inner: Box<Atom> },
    /// A variable read back from a bare DIMACS file.
    Raw { index: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditAction {
    /// Consume one sequence position while the automaton reads `auto`;
    /// costs one edit when the position's value differs.
    Consume { auto: String },
    /// Consume one sequence position without moving the automaton.
    Delete,
    /// Move the automaton on `auto` without consuming a position.
    Insert { auto: String },
}

impl Atom {
    pub fn scoped(scope: usize, inner: Atom) -> Atom {
        Atom::Scoped {
            scope,
            inner: Box::new(inner),
        }
    }

    pub fn value(pos: usize, sym: impl Into<String>) -> Atom {
        Atom::Value {
            pos,
            sym: sym.into(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Value { pos, sym } => write!(f, "x {pos} {sym}"),
            Atom::State { layer, state } => write!(f, "s {layer} {state}"),
            Atom::Arc {
                layer,
                from,
                sym,
                to,
            } => write!(f, "arc {layer} {from} {sym} {to}"),
            Atom::OrNode { nt, start, len } => write!(f, "or {nt} {start} {len}"),
            Atom::AndNode {
                prod,
                start,
                split,
                len,
            } => write!(f, "and {prod} {start} {split} {len}"),
            Atom::CounterBit {
                group,
                prefix,
                count,
            } => write!(f, "cnt {group} {prefix} {count}"),
            Atom::Ladder { group, pos } => write!(f, "amo {group} {pos}"),
            Atom::Penalty { pos } => write!(f, "pen {pos}"),
            Atom::Selector { state } => write!(f, "sel {state}"),
            Atom::EditState { pos, depth, state } => write!(f, "es {pos} {depth} {state}"),
            Atom::EditArc {
                pos,
                depth,
                state,
                action,
                to,
            } => {
                write!(f, "ea {pos} {depth} {state} ")?;
                match action {
                    EditAction::Consume { auto } => write!(f, "read {auto}")?,
                    EditAction::Delete => write!(f, "del")?,
                    EditAction::Insert { auto } => write!(f, "ins {auto}")?,
                }
                write!(f, " {to}")
            }
            Atom::LexEq { pair, pos } => write!(f, "lexeq {pair} {pos}"),
            Atom::Scoped { scope, inner } => write!(f, "emp {scope} {inner}"),
            Atom::Raw { index } => write!(f, "raw {index}"),
        }
    }
}

/// Which exactly-one encoding to use for value/state groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactlyOne {
    /// At-least-one clause plus pairwise at-most-one.
    #[default]
    Pairwise,
    /// At-least-one clause plus a sequential (ladder) at-most-one.
    Sequential,
}

/// Knobs shared by the SAT encoders.
#[derive(Debug, Clone, Default)]
pub struct EncodeConfig {
    pub exactly_one: ExactlyOne,
}

/// A CNF formula under construction.
#[derive(Debug, Clone, Default)]
pub struct CnfFormula {
    clauses: Vec<Vec<Lit>>,
    atoms: Vec<Atom>,
    index: HashMap<Atom, Var>,
    failed: bool,
    counter_groups: usize,
    eo_done: BTreeSet<(Option<usize>, usize)>,
}

impl CnfFormula {
    pub fn new() -> Self {
        CnfFormula::default()
    }

    /// Returns the variable for `atom`, allocating the next index on first use.
    pub fn var(&mut self, atom: Atom) -> Var {
        if let Some(&v) = self.index.get(&atom) {
            return v;
        }
        let v = Var(self.atoms.len() as u32 + 1);
        self.atoms.push(atom.clone());
        self.index.insert(atom, v);
        v
    }

    pub fn lookup(&self, atom: &Atom) -> Option<Var> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, v: Var) -> &Atom {
        &self.atoms[(v.0 - 1) as usize]
    }

    pub fn num_vars(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        self.clauses.push(lits.into_iter().collect());
    }

    /// Records that the instance is unsatisfiable: a single empty clause
    /// plus the failure flag.
    pub fn mark_failed(&mut self) {
        if !self.failed {
            self.failed = true;
            self.clauses.push(Vec::new());
        }
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    pub(crate) fn fresh_counter_group(&mut self) -> usize {
        let g = self.counter_groups;
        self.counter_groups += 1;
        g
    }

    /// Guards against emitting a position's exactly-one group twice when
    /// several encoders share the same formula.
    pub(crate) fn exactly_one_pending(&mut self, scope: Option<usize>, pos: usize) -> bool {
        self.eo_done.insert((scope, pos))
    }

    /// Adds `other` with all variables renumbered and every atom wrapped in
    /// `scope`. Returns nothing; use scoped atoms to look variables up.
    pub fn absorb_scoped(&mut self, other: CnfFormula, scope: usize) {
        let map: Vec<Var> = other
            .atoms
            .iter()
            .map(|a| self.var(Atom::scoped(scope, a.clone())))
            .collect();
        for clause in other.clauses {
            if clause.is_empty() {
                self.mark_failed();
                continue;
            }
            let remapped: Vec<Lit> = clause
                .iter()
                .map(|l| {
                    let v = map[(l.var().0 - 1) as usize];
                    if l.is_positive() {
                        v.lit()
                    } else {
                        v.nlit()
                    }
                })
                .collect();
            self.clauses.push(remapped);
        }
        if other.failed {
            self.mark_failed();
        }
    }

    /// Serializes to DIMACS with `c map` comment lines describing every
    /// variable.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            out.push_str(&format!("c map {} {}\n", i + 1, atom));
        }
        if self.failed {
            out.push_str("c flag infeasible\n");
        }
        out.push_str(&format!("p cnf {} {}\n", self.atoms.len(), self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }

    /// Builds a formula from bare clauses (no semantic map), as read from a
    /// DIMACS file.
    pub fn from_raw(num_vars: u32, clauses: Vec<Vec<Lit>>) -> Self {
        let mut f = CnfFormula::new();
        for i in 1..=num_vars {
            f.var(Atom::Raw { index: i });
        }
        let failed = clauses.iter().any(Vec::is_empty);
        f.clauses = clauses;
        f.failed = failed;
        f
    }
}

/// Parses DIMACS CNF text. Comment lines are skipped; the variable map
/// comments this crate writes are not reconstructed (variables come back
/// as raw indices).
pub fn parse_dimacs(text: &str) -> crate::error::Result<CnfFormula> {
    use crate::error::Error;
    let mut num_vars: Option<u32> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 || toks[0] != "cnf" {
                return Err(Error::parse(ln, "expected `p cnf <vars> <clauses>`"));
            }
            num_vars = Some(
                toks[1]
                    .parse()
                    .map_err(|_| Error::parse(ln, "bad variable count"))?,
            );
            continue;
        }
        for tok in line.split_whitespace() {
            let value: i32 = tok
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad literal {tok:?}")))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(Lit(value));
            }
        }
    }
    let declared = num_vars.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    let seen = clauses
        .iter()
        .flatten()
        .map(|l| l.var().0)
        .max()
        .unwrap_or(0);
    Ok(CnfFormula::from_raw(declared.max(seen), clauses))
}

/// Emits an exactly-one constraint over `lits`. Every clause gets the
/// optional `guard` literal appended, which turns the whole group into an
/// implication from the guard's negation.
pub fn add_exactly_one(
    f: &mut CnfFormula,
    lits: &[Lit],
    kind: ExactlyOne,
    guard: Option<Lit>,
) {
    let with_guard = |mut c: Vec<Lit>| {
        if let Some(g) = guard {
            c.push(g);
        }
        c
    };
    if lits.is_empty() {
        // no candidate survives: conflict (or guard forced)
        match guard {
            Some(g) => f.add_clause([g]),
            None => f.mark_failed(),
        }
        return;
    }
    f.add_clause(with_guard(lits.to_vec()));
    match kind {
        ExactlyOne::Pairwise => {
            for i in 0..lits.len() {
                for j in i + 1..lits.len() {
                    f.add_clause(with_guard(vec![!lits[i], !lits[j]]));
                }
            }
        }
        ExactlyOne::Sequential => {
            if lits.len() <= 1 {
                return;
            }
            let group = f.fresh_counter_group();
            let ladder: Vec<Var> = (0..lits.len() - 1)
                .map(|i| f.var(Atom::Ladder { group, pos: i }))
                .collect();
            for i in 0..lits.len() {
                if i < ladder.len() {
                    f.add_clause(with_guard(vec![!lits[i], ladder[i].lit()]));
                }
                if i > 0 && i < ladder.len() {
                    f.add_clause(with_guard(vec![ladder[i - 1].nlit(), ladder[i].lit()]));
                }
                if i > 0 {
                    f.add_clause(with_guard(vec![!lits[i], ladder[i - 1].nlit()]));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn var_allocation_is_stable() {
        let mut f = CnfFormula::new();
        let a = f.var(Atom::value(0, "r"));
        let b = f.var(Atom::value(0, "w"));
        assert_eq!(a, Var(1));
        assert_eq!(b, Var(2));
        assert_eq!(f.var(Atom::value(0, "r")), Var(1));
        assert_eq!(*f.atom(a), Atom::value(0, "r"));
    }

    #[test]
    fn dimacs_layout() {
        let mut f = CnfFormula::new();
        let a = f.var(Atom::value(0, "r"));
        let b = f.var(Atom::value(0, "w"));
        f.add_clause([a.lit(), b.lit()]);
        f.add_clause([a.nlit(), b.nlit()]);
        let text = f.to_dimacs();
        assert!(text.contains("c map 1 x 0 r"));
        assert!(text.contains("c map 2 x 0 w"));
        assert!(text.contains("p cnf 2 2"));
        assert!(text.contains("1 2 0"));
        assert!(text.contains("-1 -2 0"));
    }

    #[test]
    fn failed_formula_has_single_empty_clause() {
        let mut f = CnfFormula::new();
        f.mark_failed();
        f.mark_failed();
        assert!(f.is_failed());
        assert_eq!(f.clauses().iter().filter(|c| c.is_empty()).count(), 1);
        assert!(f.to_dimacs().contains("c flag infeasible"));
    }

    #[test]
    fn absorb_scoped_remaps() {
        let mut inner = CnfFormula::new();
        let v = inner.var(Atom::value(3, "a"));
        inner.add_clause([v.lit()]);
        let mut outer = CnfFormula::new();
        outer.var(Atom::value(0, "z"));
        outer.absorb_scoped(inner, 1);
        let mapped = outer
            .lookup(&Atom::scoped(1, Atom::value(3, "a")))
            .unwrap();
        assert_eq!(mapped, Var(2));
        assert_eq!(outer.clauses()[0], vec![mapped.lit()]);
    }
}
