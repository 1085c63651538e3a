//! LP-format writing and a reader for the subset this crate emits.
//!
//! Layout: `\ map` comment lines tying variable names to their semantic
//! atoms, then the five sections Minimize / Subject To / Bounds / Binaries
//! / End. Everything is emitted in declaration order, so identical models
//! produce byte-identical files.

use crate::error::{Error, Result};
use crate::mip::{LpModel, Relation, Sense, VarKind};

fn write_terms(out: &mut String, terms: &[(f64, usize)], names: &[String]) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (i, &(coeff, idx)) in terms.iter().enumerate() {
        let mag = coeff.abs();
        if i == 0 {
            if coeff < 0.0 {
                out.push_str("- ");
            }
        } else if coeff < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if (mag - 1.0).abs() > f64::EPSILON {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&names[idx]);
    }
}

/// Serializes the model to LP format.
pub fn write_lp(m: &LpModel) -> Result<String> {
    m.validate()?;
    let names: Vec<String> = m.vars().iter().map(|v| v.name.clone()).collect();
    let mut out = String::new();
    for v in m.vars() {
        if let Some(atom) = &v.atom {
            out.push_str(&format!("\\ map {} {}\n", v.name, atom));
        }
    }
    let (sense, objective) = match &m.objective {
        Some((sense, terms)) => (*sense, terms.clone()),
        None => (Sense::Minimize, Vec::new()),
    };
    out.push_str(match sense {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    out.push_str(" obj: ");
    write_terms(&mut out, &objective, &names);
    out.push('\n');
    out.push_str("Subject To\n");
    for c in m.constraints() {
        out.push_str(&format!(" {}: ", c.name));
        write_terms(&mut out, &c.terms, &names);
        out.push_str(&format!(" {} {}\n", c.relation.as_str(), c.rhs));
    }
    out.push_str("Bounds\n");
    for v in m.vars() {
        if v.kind == VarKind::Continuous {
            out.push_str(&format!(" {} <= {} <= {}\n", v.lb, v.name, v.ub));
        }
    }
    out.push_str("Binaries\n");
    let binaries: Vec<&str> = m
        .vars()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push(' ');
        out.push_str(&binaries.join(" "));
        out.push('\n');
    }
    out.push_str("End\n");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

/// Parses the LP subset produced by [`write_lp`] back into a model. The
/// `\ map` comments are ignored; structural content (variables, kinds,
/// bounds, objective, constraints) round-trips.
pub fn parse_lp(text: &str) -> Result<LpModel> {
    let mut m = LpModel::new();
    let mut section = None;
    let mut objective: Option<(Sense, Vec<(f64, String)>)> = None;
    type RawConstraint = (String, Vec<(f64, String)>, Relation, f64);
    let mut constraints: Vec<RawConstraint> = Vec::new();
    let mut bounds: Vec<(f64, String, f64)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();

    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let new_section = match lower.as_str() {
            "minimize" => Some((Section::Objective, Sense::Minimize)),
            "maximize" => Some((Section::Objective, Sense::Maximize)),
            "subject to" | "st" | "s.t." => Some((Section::Constraints, Sense::Minimize)),
            "bounds" => Some((Section::Bounds, Sense::Minimize)),
            "binaries" | "binary" => Some((Section::Binaries, Sense::Minimize)),
            "end" => Some((Section::Done, Sense::Minimize)),
            _ => None,
        };
        if let Some((s, sense)) = new_section {
            if s == Section::Objective {
                objective = Some((sense, Vec::new()));
            }
            section = Some(s);
            continue;
        }
        match section {
            Some(Section::Objective) => {
                let expr = line.split_once(':').map(|(_, e)| e).unwrap_or(line);
                let (terms, rest) = parse_terms(ln, expr)?;
                if !rest.trim().is_empty() {
                    return Err(Error::parse(ln, format!("trailing input {rest:?}")));
                }
                objective
                    .as_mut()
                    .expect("objective section opened")
                    .1
                    .extend(terms);
            }
            Some(Section::Constraints) => {
                let (name, expr) = match line.split_once(':') {
                    Some((n, e)) => (n.trim().to_string(), e),
                    None => (format!("c{}", constraints.len()), line),
                };
                let (terms, rest) = parse_terms(ln, expr)?;
                let rest = rest.trim();
                let (relation, rhs_text) = if let Some(r) = rest.strip_prefix("<=") {
                    (Relation::Le, r)
                } else if let Some(r) = rest.strip_prefix(">=") {
                    (Relation::Ge, r)
                } else if let Some(r) = rest.strip_prefix('=') {
                    (Relation::Eq, r)
                } else {
                    return Err(Error::parse(ln, "constraint is missing a relation"));
                };
                let rhs: f64 = rhs_text
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad right-hand side {rhs_text:?}")))?;
                constraints.push((name, terms, relation, rhs));
            }
            Some(Section::Bounds) => {
                let parts: Vec<&str> = line.split("<=").map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(Error::parse(ln, "expected `lb <= name <= ub`"));
                }
                let lb: f64 = parts[0]
                    .parse()
                    .map_err(|_| Error::parse(ln, "bad lower bound"))?;
                let ub: f64 = parts[2]
                    .parse()
                    .map_err(|_| Error::parse(ln, "bad upper bound"))?;
                bounds.push((lb, parts[1].to_string(), ub));
            }
            Some(Section::Binaries) => {
                binaries.extend(line.split_whitespace().map(str::to_string));
            }
            Some(Section::Done) | None => {
                return Err(Error::parse(ln, format!("unexpected input {line:?}")));
            }
        }
    }

    // declare variables: binaries first in listed order, then bounded
    // continuous ones, then anything left over in expressions
    for name in &binaries {
        m.binary(name, None);
    }
    for (lb, name, ub) in &bounds {
        if m.var_index(name).is_none() {
            m.add_var(name, VarKind::Continuous, *lb, *ub, None);
        }
    }
    let ensure = |m: &mut LpModel, name: &str| -> usize {
        match m.var_index(name) {
            Some(idx) => idx,
            None => m.add_var(name, VarKind::Continuous, 0.0, f64::INFINITY, None),
        }
    };
    if let Some((sense, terms)) = objective {
        let resolved: Vec<(f64, usize)> = terms
            .into_iter()
            .map(|(c, name)| (c, ensure(&mut m, &name)))
            .collect();
        m.objective = Some((sense, resolved));
    }
    for (name, terms, relation, rhs) in constraints {
        let resolved: Vec<(f64, usize)> = terms
            .into_iter()
            .map(|(c, n)| (c, ensure(&mut m, &n)))
            .collect();
        m.add_constraint(&name, resolved, relation, rhs);
    }
    Ok(m)
}

/// Parses `[-] [coeff] name (+|- [coeff] name)*`, stopping at a relation
/// operator. A bare `0` term is dropped. Returns the unconsumed tail.
fn parse_terms(ln: usize, text: &str) -> Result<(Vec<(f64, String)>, &str)> {
    let mut terms = Vec::new();
    let mut rest = text.trim_start();
    let mut sign = 1.0;
    let mut first = true;
    loop {
        if rest.is_empty() || rest.starts_with("<=") || rest.starts_with(">=") || rest.starts_with('=')
        {
            return Ok((terms, rest));
        }
        if let Some(r) = rest.strip_prefix('+') {
            if first && terms.is_empty() && sign == 1.0 && r.trim_start().is_empty() {
                return Err(Error::parse(ln, "dangling `+`"));
            }
            sign = 1.0;
            rest = r.trim_start();
            continue;
        }
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
            continue;
        }
        // token: number or identifier
        let end = rest
            .find(|c: char| c.is_whitespace() || "+-<>=".contains(c))
            .unwrap_or(rest.len());
        let tok = &rest[..end];
        rest = rest[end..].trim_start();
        if let Ok(num) = tok.parse::<f64>() {
            // a number directly followed by a name is a coefficient;
            // otherwise it is a constant term (only 0 is meaningful here)
            let next_is_name = rest
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            if next_is_name {
                let end = rest
                    .find(|c: char| c.is_whitespace() || "+-<>=".contains(c))
                    .unwrap_or(rest.len());
                let name = rest[..end].to_string();
                rest = rest[end..].trim_start();
                terms.push((sign * num, name));
            } else if num != 0.0 {
                return Err(Error::parse(ln, format!("constant term {tok} unsupported")));
            }
        } else if !tok.is_empty() {
            terms.push((sign, tok.to_string()));
        } else {
            return Err(Error::parse(ln, format!("unexpected input {rest:?}")));
        }
        sign = 1.0;
        first = false;
    }
}
