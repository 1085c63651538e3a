//! Line-based text formats.
//!
//! Automaton files:
//! ```text
//! # the r* w* r* automaton
//! alphabet: r w
//! states: qr qw qr2
//! initial: qr
//! final: qr qw qr2
//! trans: qr r qr
//! trans: qr w qw
//! ```
//! The kind is inferred: a single initial state and at most one transition
//! per (state, symbol) make the automaton deterministic.
//!
//! Grammar files: one production per line, `|` separates alternatives.
//! Terminals start with a lowercase letter, nonterminals with an uppercase
//! letter. Occurrence annotations restrict spans: `P{len 13 24}` bounds the
//! span length (use `-` for an open upper bound), `A{open}` requires every
//! spanned position to be open per the `open:` header (a 0/1 string).
//! ```text
//! start: S
//! open: 000011111111111111110000
//! S -> R P{len 13 24} R
//! R -> r R | r
//! ```
//!
//! Domain files: an optional `n:` header, then `position: symbols` lines.
//! Positions not listed keep the full alphabet.
//! ```text
//! n: 3
//! 1: r
//! 2: w
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::language::alphabet::Alphabet;
use crate::language::automaton::{Automaton, AutomatonKind, StateId};
use crate::language::domains::SequenceDomains;
use crate::language::grammar::{GSym, NtId, Production, RestrictedGrammar, RhsItem};
use crate::language::predicate::SpanPredicate;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn is_identifier(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Vec<String> = Vec::new();
    let mut initial_names: Vec<String> = Vec::new();
    let mut final_names: Vec<String> = Vec::new();
    let mut trans_lines: Vec<(usize, String, String, String)> = Vec::new();

    for (ln, line) in content_lines(text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, "expected `key: values`"))?;
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "alphabet" => {
                alphabet = Some(Alphabet::new(toks.iter().copied()).map_err(|e| {
                    Error::parse(ln, e.to_string())
                })?);
            }
            "states" => {
                for t in &toks {
                    if !is_identifier(t) {
                        return Err(Error::parse(ln, format!("bad state name {t:?}")));
                    }
                    states.push(t.to_string());
                }
            }
            "initial" => initial_names.extend(toks.iter().map(|t| t.to_string())),
            "final" => final_names.extend(toks.iter().map(|t| t.to_string())),
            "trans" => {
                if toks.len() != 3 {
                    return Err(Error::parse(ln, "expected `trans: from symbol to`"));
                }
                trans_lines.push((ln, toks[0].into(), toks[1].into(), toks[2].into()));
            }
            other => return Err(Error::parse(ln, format!("unknown section {other:?}"))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| Error::parse(1, "missing `alphabet:` line"))?;
    if states.is_empty() {
        return Err(Error::parse(1, "missing `states:` line"));
    }
    let state_id = |ln: usize, name: &str| -> Result<StateId> {
        states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| Error::parse(ln, format!("undeclared state {name:?}")))
    };
    let mut transitions = Vec::new();
    let mut seen_pairs = BTreeSet::new();
    let mut deterministic = true;
    for (ln, from, sym, to) in &trans_lines {
        let from = state_id(*ln, from)?;
        let to = state_id(*ln, to)?;
        let sym = alphabet
            .get(sym)
            .ok_or_else(|| Error::parse(*ln, format!("undeclared symbol {sym:?}")))?;
        if !seen_pairs.insert((from, sym)) {
            deterministic = false;
        }
        transitions.push((from, sym, to));
    }
    let mut initial = Vec::new();
    for name in &initial_names {
        initial.push(state_id(1, name)?);
    }
    if initial.is_empty() {
        return Err(Error::parse(1, "missing `initial:` line"));
    }
    if initial.len() > 1 {
        deterministic = false;
    }
    let mut finals = BTreeSet::new();
    for name in &final_names {
        finals.insert(state_id(1, name)?);
    }
    let kind = if deterministic {
        AutomatonKind::Deterministic
    } else {
        AutomatonKind::Nondeterministic
    };
    Automaton::new(kind, states, alphabet, transitions, initial, finals)
        .map_err(|e| Error::parse(1, e.to_string()))
}

/// A token of a production line: a symbol name plus an optional annotation,
/// or the alternative separator `|`.
enum RuleToken {
    Occurrence(OccToken),
    Pipe,
}

struct OccToken {
    name: String,
    annotation: Option<String>,
}

/// Tokenizes one side of a production. Annotations may contain spaces
/// (`P{len 13 24}`), so this walks characters instead of splitting on
/// whitespace.
fn tokenize_rule(ln: usize, text: &str) -> Result<Vec<RuleToken>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '|' {
            chars.next();
            out.push(RuleToken::Pipe);
            continue;
        }
        let mut name = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                name.push(c);
                chars.next();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return Err(Error::parse(ln, format!("unexpected character {c:?}")));
        }
        let mut annotation = None;
        if chars.peek() == Some(&'{') {
            chars.next();
            let mut ann = String::new();
            loop {
                match chars.next() {
                    Some('}') => break,
                    Some(c) => ann.push(c),
                    None => {
                        return Err(Error::parse(
                            ln,
                            format!("unterminated annotation after {name:?}"),
                        ))
                    }
                }
            }
            annotation = Some(ann);
        }
        out.push(RuleToken::Occurrence(OccToken { name, annotation }));
    }
    Ok(out)
}

fn single_occurrence(ln: usize, text: &str) -> Result<OccToken> {
    let mut toks = tokenize_rule(ln, text)?;
    if toks.len() != 1 {
        return Err(Error::parse(ln, "expected a single symbol"));
    }
    match toks.pop().unwrap() {
        RuleToken::Occurrence(occ) => Ok(occ),
        RuleToken::Pipe => Err(Error::parse(ln, "expected a symbol, found `|`")),
    }
}

fn parse_annotation(
    ln: usize,
    ann: &str,
    open_mask: Option<&Arc<[bool]>>,
) -> Result<SpanPredicate> {
    let toks: Vec<&str> = ann.split_whitespace().collect();
    match toks.as_slice() {
        ["len", lo, hi] => {
            let lo: usize = lo
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad length bound {lo:?}")))?;
            let hi = if *hi == "-" || *hi == "*" {
                None
            } else {
                Some(
                    hi.parse()
                        .map_err(|_| Error::parse(ln, format!("bad length bound {hi:?}")))?,
                )
            };
            SpanPredicate::length_in(lo, hi).map_err(|e| Error::parse(ln, e.to_string()))
        }
        ["open"] => {
            let mask = open_mask
                .ok_or_else(|| Error::parse(ln, "`{open}` used without an `open:` header"))?;
            Ok(SpanPredicate::OpenHours { mask: mask.clone() })
        }
        ["always"] => Ok(SpanPredicate::Always),
        _ => Err(Error::parse(ln, format!("unknown annotation {{{ann}}}"))),
    }
}

fn is_nonterminal_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

pub fn parse_grammar(text: &str) -> Result<RestrictedGrammar> {
    let mut start_name: Option<String> = None;
    let mut open_mask: Option<Arc<[bool]>> = None;
    let mut alphabet_names: Option<Vec<String>> = None;
    // (line, lhs occurrence, rhs alternative token lists)
    let mut rules: Vec<(usize, OccToken, Vec<Vec<OccToken>>)> = Vec::new();

    for (ln, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("start:") {
            start_name = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("open:") {
            let bits = rest.trim();
            let mut mask = Vec::with_capacity(bits.len());
            for c in bits.chars() {
                match c {
                    '0' => mask.push(false),
                    '1' => mask.push(true),
                    _ => return Err(Error::parse(ln, format!("bad open-mask character {c:?}"))),
                }
            }
            open_mask = Some(mask.into());
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            alphabet_names = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| Error::parse(ln, "expected `Lhs -> rhs`"))?;
        let lhs = single_occurrence(ln, lhs.trim())?;
        if !is_nonterminal_name(&lhs.name) {
            return Err(Error::parse(
                ln,
                format!("production left-hand side {:?} must start uppercase", lhs.name),
            ));
        }
        let mut alternatives: Vec<Vec<OccToken>> = vec![Vec::new()];
        for tok in tokenize_rule(ln, rhs)? {
            match tok {
                RuleToken::Pipe => alternatives.push(Vec::new()),
                RuleToken::Occurrence(occ) => alternatives.last_mut().unwrap().push(occ),
            }
        }
        rules.push((ln, lhs, alternatives));
    }

    if rules.is_empty() {
        return Err(Error::parse(1, "grammar has no productions"));
    }

    // Collect nonterminals and terminals in order of first appearance.
    let mut nt_names: Vec<String> = Vec::new();
    let mut term_names: Vec<String> = alphabet_names.unwrap_or_default();
    {
        let mut note = |name: &str| {
            if is_nonterminal_name(name) {
                if !nt_names.iter().any(|s| s == name) {
                    nt_names.push(name.to_string());
                }
            } else if !term_names.iter().any(|s| s == name) {
                term_names.push(name.to_string());
            }
        };
        for (_, lhs, alts) in &rules {
            note(&lhs.name);
            for alt in alts {
                for occ in alt {
                    note(&occ.name);
                }
            }
        }
    }
    if term_names.is_empty() {
        return Err(Error::parse(1, "grammar uses no terminal symbols"));
    }
    let terminals = Alphabet::new(term_names).map_err(|e| Error::parse(1, e.to_string()))?;
    let nt_id = |name: &str| NtId(nt_names.iter().position(|s| s == name).unwrap());

    let mut productions = Vec::new();
    for (ln, lhs, alts) in &rules {
        let lhs_pred = match &lhs.annotation {
            Some(ann) => parse_annotation(*ln, ann, open_mask.as_ref())?,
            None => SpanPredicate::Always,
        };
        for alt in alts {
            let mut rhs = Vec::new();
            for occ in alt {
                if is_nonterminal_name(&occ.name) {
                    let pred = match &occ.annotation {
                        Some(ann) => parse_annotation(*ln, ann, open_mask.as_ref())?,
                        None => SpanPredicate::Always,
                    };
                    rhs.push(RhsItem {
                        sym: GSym::Nonterminal(nt_id(&occ.name)),
                        pred,
                    });
                } else {
                    if occ.annotation.is_some() {
                        return Err(Error::parse(
                            *ln,
                            format!("terminal {:?} cannot carry an annotation", occ.name),
                        ));
                    }
                    rhs.push(RhsItem::t(terminals.get(&occ.name).unwrap()));
                }
            }
            productions.push(Production {
                lhs: nt_id(&lhs.name),
                pred: lhs_pred.clone(),
                rhs,
            });
        }
    }

    let start = match start_name {
        Some(name) => NtId(
            nt_names
                .iter()
                .position(|s| *s == name)
                .ok_or_else(|| Error::parse(1, format!("start symbol {name:?} never used")))?,
        ),
        None => productions[0].lhs,
    };
    RestrictedGrammar::new(nt_names, terminals, start, productions)
        .map_err(|e| Error::parse(1, e.to_string()))
}

pub fn parse_domains(text: &str, alphabet: &Alphabet) -> Result<SequenceDomains> {
    let mut n: Option<usize> = None;
    let mut lines: Vec<(usize, usize, BTreeSet<crate::language::alphabet::SymId>)> = Vec::new();
    for (ln, line) in content_lines(text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, "expected `position: symbols` or `n: length`"))?;
        let key = key.trim();
        if key == "n" {
            n = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::parse(ln, "bad sequence length"))?,
            );
            continue;
        }
        let pos: usize = key
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad position {key:?}")))?;
        let mut set = BTreeSet::new();
        for tok in rest.split_whitespace() {
            let sym = alphabet
                .get(tok)
                .ok_or_else(|| Error::parse(ln, format!("symbol {tok:?} not in alphabet")))?;
            set.insert(sym);
        }
        lines.push((ln, pos, set));
    }
    let n = match n {
        Some(n) => n,
        None => lines
            .iter()
            .map(|&(_, pos, _)| pos + 1)
            .max()
            .ok_or_else(|| Error::parse(1, "domain file gives neither `n:` nor positions"))?,
    };
    let mut d = SequenceDomains::full(alphabet.clone(), n);
    for (ln, pos, set) in lines {
        if pos >= n {
            return Err(Error::parse(ln, format!("position {pos} out of range 0..{n}")));
        }
        d.restrict(pos, set);
    }
    Ok(d)
}

/// Renders an automaton in the same line format [`parse_automaton`] reads.
pub fn render_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "alphabet: {}\n",
        a.alphabet().names().collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "states: {}\n",
        a.states().map(|q| a.state_name(q)).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "initial: {}\n",
        a.initial()
            .iter()
            .map(|&q| a.state_name(q))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.push_str(&format!(
        "final: {}\n",
        a.finals()
            .iter()
            .map(|&q| a.state_name(q))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    for &(from, sym, to) in a.transitions() {
        out.push_str(&format!(
            "trans: {} {} {}\n",
            a.state_name(from),
            a.alphabet().name(sym),
            a.state_name(to)
        ));
    }
    out
}
