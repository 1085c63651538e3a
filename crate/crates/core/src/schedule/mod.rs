//! The shift-scheduling model: one Grammar constraint per employee over a
//! shared shift grammar, plus per-slot demand cardinalities over the
//! employees' value literals.
//!
//! A day is a sequence of 15-minute slots. Each employee's row spells a
//! word of the shift grammar: rest blocks around either a part-time block
//! (work, break, work) or a full-time block (part, lunch, part), with span
//! bounds enforcing the working-time rules and activities confined to open
//! hours.

pub mod cardinality;

use std::fmt;
use std::sync::Arc;

use crate::cnf::{Atom, CnfFormula, EncodeConfig};
use crate::error::{Error, Result};
use crate::grammar::{build_andor_dag, encode_grammar_sat};
use crate::language::alphabet::{Alphabet, SymId};
use crate::language::domains::SequenceDomains;
use crate::language::earley::earley_recognize;
use crate::language::grammar::{
    to_cnf, NtId, Production, RestrictedGrammar, RhsItem,
};
use crate::language::predicate::SpanPredicate;
use crate::schedule::cardinality::encode_cardinality_geq;

pub const SLOT_MINUTES: usize = 15;

/// A standard day: 96 slots of 15 minutes.
pub const DEFAULT_SLOTS: usize = 96;

/// The terminal alphabet of an instance with `activities` activities:
/// a1..am, then break, lunch, rest.
pub fn shift_alphabet(activities: usize) -> Alphabet {
    let mut names: Vec<String> = (1..=activities).map(|i| format!("a{i}")).collect();
    names.extend(["b".to_string(), "l".to_string(), "r".to_string()]);
    Alphabet::new(names).expect("fixed alphabet is well-formed")
}

/// Builds the shift grammar for `activities` activities over `slots`
/// 15-minute slots:
///
/// ```text
/// S -> R P R | R F R      (P spans 13..24 slots, F spans 30..38)
/// R -> r R | r            L -> l L | l
/// Ai -> ai Ai | ai        (within open hours)
/// W -> Ai                 (at least 4 slots: one continuous hour)
/// P -> W b W              F -> P L P   (L spans exactly 4 slots)
/// ```
pub fn build_shift_grammar(activities: usize, slots: usize, open: &[bool]) -> Result<RestrictedGrammar> {
    if activities == 0 {
        return Err(Error::input("at least one activity is required"));
    }
    if open.len() != slots {
        return Err(Error::input(format!(
            "open mask has length {} but there are {slots} slots",
            open.len()
        )));
    }
    let terminals = shift_alphabet(activities);
    let activity_sym = |i: usize| SymId(i);
    let b_sym = SymId(activities);
    let l_sym = SymId(activities + 1);
    let r_sym = SymId(activities + 2);

    let mut names: Vec<String> = ["S", "R", "L", "W", "P", "F"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (s, r, l, w, p, f) = (NtId(0), NtId(1), NtId(2), NtId(3), NtId(4), NtId(5));
    let activity_nt = |i: usize| NtId(6 + i);
    for i in 1..=activities {
        names.push(format!("A{i}"));
    }

    let f_p = SpanPredicate::length_in(13, Some(24))?;
    let f_f = SpanPredicate::length_in(30, Some(38))?;
    let f_l = SpanPredicate::length_in(4, Some(4))?;
    let f_w = SpanPredicate::length_in(4, Some(slots.max(4)))?;
    let open_pred = SpanPredicate::OpenHours {
        mask: Arc::from(open.to_vec().into_boxed_slice()),
    };

    let mut productions = vec![
        Production {
            lhs: s,
            pred: SpanPredicate::Always,
            rhs: vec![
                RhsItem::nt(r),
                RhsItem::nt_pred(p, f_p),
                RhsItem::nt(r),
            ],
        },
        Production {
            lhs: s,
            pred: SpanPredicate::Always,
            rhs: vec![
                RhsItem::nt(r),
                RhsItem::nt_pred(f, f_f),
                RhsItem::nt(r),
            ],
        },
        Production {
            lhs: r,
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(r_sym), RhsItem::nt(r)],
        },
        Production {
            lhs: r,
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(r_sym)],
        },
        Production {
            lhs: l,
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(l_sym), RhsItem::nt(l)],
        },
        Production {
            lhs: l,
            pred: SpanPredicate::Always,
            rhs: vec![RhsItem::t(l_sym)],
        },
    ];
    for i in 0..activities {
        productions.push(Production {
            lhs: activity_nt(i),
            pred: open_pred.clone(),
            rhs: vec![RhsItem::t(activity_sym(i)), RhsItem::nt(activity_nt(i))],
        });
        productions.push(Production {
            lhs: activity_nt(i),
            pred: open_pred.clone(),
            rhs: vec![RhsItem::t(activity_sym(i))],
        });
    }
    for i in 0..activities {
        productions.push(Production {
            lhs: w,
            pred: f_w.clone(),
            rhs: vec![RhsItem::nt(activity_nt(i))],
        });
    }
    productions.push(Production {
        lhs: p,
        pred: SpanPredicate::Always,
        rhs: vec![RhsItem::nt(w), RhsItem::t(b_sym), RhsItem::nt(w)],
    });
    productions.push(Production {
        lhs: f,
        pred: SpanPredicate::Always,
        rhs: vec![
            RhsItem::nt(p),
            RhsItem::nt_pred(l, f_l),
            RhsItem::nt(p),
        ],
    });

    RestrictedGrammar::new(names, terminals, s, productions)
}

/// One day's staffing problem.
#[derive(Debug, Clone)]
pub struct ShiftInstance {
    pub slots: usize,
    pub activities: usize,
    pub employees: usize,
    /// demand[activity][slot]
    demand: Vec<Vec<usize>>,
    pub open: Vec<bool>,
}

impl ShiftInstance {
    pub fn new(
        slots: usize,
        activities: usize,
        employees: usize,
        demand: Vec<Vec<usize>>,
        open: Vec<bool>,
    ) -> Result<Self> {
        if activities == 0 {
            return Err(Error::input("at least one activity is required"));
        }
        if demand.len() != activities || demand.iter().any(|row| row.len() != slots) {
            return Err(Error::input(format!(
                "demand must be {activities} x {slots}"
            )));
        }
        if open.len() != slots {
            return Err(Error::input(format!("open mask must have length {slots}")));
        }
        Ok(ShiftInstance {
            slots,
            activities,
            employees,
            demand,
            open,
        })
    }

    pub fn demand(&self, activity: usize, slot: usize) -> usize {
        self.demand[activity][slot]
    }

    pub fn alphabet(&self) -> Alphabet {
        shift_alphabet(self.activities)
    }

    pub fn grammar(&self) -> Result<RestrictedGrammar> {
        build_shift_grammar(self.activities, self.slots, &self.open)
    }

    /// Parses the instance file format:
    /// ```text
    /// slots: 24
    /// activities: 1
    /// employees: 2
    /// open: 000011111111111111110000
    /// demand: a1 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 1 0 0 0 0 0 0 0 0
    /// ```
    /// Missing demand lines default to zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut slots = None;
        let mut activities = None;
        let mut employees = None;
        let mut open: Option<Vec<bool>> = None;
        let mut demand_lines: Vec<(usize, String, Vec<usize>)> = Vec::new();
        for (ln0, raw) in text.lines().enumerate() {
            let ln = ln0 + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `key: values`"))?;
            let rest = rest.trim();
            match key.trim() {
                "slots" => {
                    slots = Some(rest.parse().map_err(|_| Error::parse(ln, "bad slot count"))?)
                }
                "activities" => {
                    activities =
                        Some(rest.parse().map_err(|_| Error::parse(ln, "bad activity count"))?)
                }
                "employees" => {
                    employees =
                        Some(rest.parse().map_err(|_| Error::parse(ln, "bad employee count"))?)
                }
                "open" => {
                    let mut mask = Vec::with_capacity(rest.len());
                    for c in rest.chars() {
                        match c {
                            '0' => mask.push(false),
                            '1' => mask.push(true),
                            c if c.is_whitespace() => {}
                            _ => {
                                return Err(Error::parse(ln, format!("bad open bit {c:?}")));
                            }
                        }
                    }
                    open = Some(mask);
                }
                "demand" => {
                    let mut toks = rest.split_whitespace();
                    let activity = toks
                        .next()
                        .ok_or_else(|| Error::parse(ln, "demand line needs an activity"))?
                        .to_string();
                    let mut values = Vec::new();
                    for tok in toks {
                        values.push(
                            tok.parse()
                                .map_err(|_| Error::parse(ln, format!("bad demand {tok:?}")))?,
                        );
                    }
                    demand_lines.push((ln, activity, values));
                }
                other => return Err(Error::parse(ln, format!("unknown section {other:?}"))),
            }
        }
        let slots = slots.ok_or_else(|| Error::parse(1, "missing `slots:`"))?;
        let activities = activities.ok_or_else(|| Error::parse(1, "missing `activities:`"))?;
        let employees = employees.ok_or_else(|| Error::parse(1, "missing `employees:`"))?;
        let open = open.unwrap_or_else(|| vec![true; slots]);
        let mut demand = vec![vec![0usize; slots]; activities];
        for (ln, activity, values) in demand_lines {
            let idx = activity
                .strip_prefix('a')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= activities)
                .ok_or_else(|| Error::parse(ln, format!("unknown activity {activity:?}")))?;
            if values.len() != slots {
                return Err(Error::parse(
                    ln,
                    format!("demand line has {} values, expected {slots}", values.len()),
                ));
            }
            demand[idx - 1] = values;
        }
        ShiftInstance::new(slots, activities, employees, demand, open)
            .map_err(|e| Error::parse(1, e.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct InstanceOptions {
    pub config: EncodeConfig,
    /// Order employee rows lexicographically. Off by default to keep the
    /// model's solution set untouched.
    pub symmetry_break: bool,
}

/// Compiles the instance: one Grammar-constraint CNF per employee over
/// scoped copies of the shared shift grammar encoding, plus one at-least-k
/// cardinality per (slot, activity) over the employees' value literals.
pub fn build_instance(inst: &ShiftInstance, opts: &InstanceOptions) -> Result<CnfFormula> {
    let grammar = inst.grammar()?;
    let cnf_grammar = to_cnf(&grammar)?;
    let domains = SequenceDomains::full(inst.alphabet(), inst.slots);
    let dag = build_andor_dag(&cnf_grammar, &domains)?;
    let employee_formula = encode_grammar_sat(&dag, &opts.config);

    let mut f = CnfFormula::new();
    for j in 0..inst.employees {
        f.absorb_scoped(employee_formula.clone(), j);
    }
    let alphabet = inst.alphabet();
    for t in 0..inst.slots {
        for activity in 0..inst.activities {
            let k = inst.demand(activity, t);
            if k == 0 {
                continue;
            }
            let mut lits = Vec::with_capacity(inst.employees);
            for j in 0..inst.employees {
                let atom = Atom::scoped(j, Atom::value(t, alphabet.name(SymId(activity))));
                // a value that never survived encoding cannot help meet demand
                if let Some(v) = f.lookup(&atom) {
                    lits.push(v.lit());
                }
            }
            encode_cardinality_geq(&mut f, &lits, k);
        }
    }
    if opts.symmetry_break {
        add_lex_ordering(&mut f, inst);
    }
    Ok(f)
}

/// Lexicographic row ordering between consecutive employees: whenever the
/// rows agree on a prefix, the next slot may not decrease.
fn add_lex_ordering(f: &mut CnfFormula, inst: &ShiftInstance) {
    let alphabet = inst.alphabet();
    let xvar = |f: &mut CnfFormula, j: usize, t: usize, v: SymId| {
        f.lookup(&Atom::scoped(j, Atom::value(t, alphabet.name(v))))
    };
    for pair in 0..inst.employees.saturating_sub(1) {
        let mut prev_eq: Option<crate::cnf::Var> = None;
        for t in 0..inst.slots {
            let eq = f.var(Atom::LexEq { pair, pos: t });
            for u in alphabet.ids() {
                for v in alphabet.ids() {
                    if u.0 <= v.0 {
                        continue;
                    }
                    let (Some(xu), Some(xv)) =
                        (xvar(f, pair, t, u), xvar(f, pair + 1, t, v))
                    else {
                        continue;
                    };
                    let mut clause = vec![xu.nlit(), xv.nlit()];
                    if let Some(pe) = prev_eq {
                        clause.insert(0, pe.nlit());
                    }
                    f.add_clause(clause);
                }
            }
            for v in alphabet.ids() {
                let (Some(xu), Some(xv)) =
                    (xvar(f, pair, t, v), xvar(f, pair + 1, t, v))
                else {
                    continue;
                };
                let mut clause = vec![xu.nlit(), xv.nlit(), eq.lit()];
                if let Some(pe) = prev_eq {
                    clause.insert(0, pe.nlit());
                }
                f.add_clause(clause);
            }
            prev_eq = Some(eq);
        }
    }
}

/// A decoded schedule: one row of symbols per employee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleTable {
    pub alphabet: Alphabet,
    pub rows: Vec<Vec<SymId>>,
}

impl fmt::Display for ScheduleTable {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .alphabet
            .names()
            .map(str::len)
            .max()
            .unwrap_or(1);
        for (j, row) in self.rows.iter().enumerate() {
            write!(out, "emp {j} |")?;
            for &v in row {
                write!(out, " {:>width$}", self.alphabet.name(v))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Reads the schedule out of a satisfying assignment and re-validates it:
/// exactly one symbol per employee and slot, every row accepted by the
/// shift grammar, and every per-slot demand met. Any violation is an
/// error so encoder bugs cannot slip through decoding.
pub fn decode_solution(
    f: &CnfFormula,
    inst: &ShiftInstance,
    assignment: &dyn Fn(crate::cnf::Var) -> Option<bool>,
) -> Result<ScheduleTable> {
    let alphabet = inst.alphabet();
    let mut rows = Vec::with_capacity(inst.employees);
    for j in 0..inst.employees {
        let mut row = Vec::with_capacity(inst.slots);
        for t in 0..inst.slots {
            let mut chosen: Option<SymId> = None;
            for v in alphabet.ids() {
                let atom = Atom::scoped(j, Atom::value(t, alphabet.name(v)));
                let Some(var) = f.lookup(&atom) else { continue };
                if assignment(var) == Some(true) {
                    if let Some(prev) = chosen {
                        return Err(Error::input(format!(
                            "employee {j} slot {t} takes both {} and {}",
                            alphabet.name(prev),
                            alphabet.name(v)
                        )));
                    }
                    chosen = Some(v);
                }
            }
            row.push(chosen.ok_or_else(|| {
                Error::input(format!("employee {j} slot {t} has no value"))
            })?);
        }
        rows.push(row);
    }
    let table = ScheduleTable { alphabet, rows };
    validate_table(&table, inst)?;
    Ok(table)
}

/// The two schedule invariants, checked loudly.
pub fn validate_table(table: &ScheduleTable, inst: &ShiftInstance) -> Result<()> {
    let grammar = inst.grammar()?;
    if table.rows.len() != inst.employees {
        return Err(Error::input(format!(
            "table has {} rows for {} employees",
            table.rows.len(),
            inst.employees
        )));
    }
    for (j, row) in table.rows.iter().enumerate() {
        if !earley_recognize(&grammar, row)? {
            return Err(Error::input(format!(
                "employee {j}'s row is not a word of the shift grammar"
            )));
        }
    }
    for t in 0..inst.slots {
        for activity in 0..inst.activities {
            let have = table
                .rows
                .iter()
                .filter(|row| row[t] == SymId(activity))
                .count();
            if have < inst.demand(activity, t) {
                return Err(Error::input(format!(
                    "slot {t} staffs {have} of activity a{} but {} are required",
                    activity + 1,
                    inst.demand(activity, t)
                )));
            }
        }
    }
    Ok(())
}
