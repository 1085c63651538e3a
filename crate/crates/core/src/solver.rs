//! Invoking an external SAT solver on a DIMACS file and reading its
//! standard-output verdict back. No solver is linked in; the command
//! template is split on whitespace and `{file}` is replaced by the DIMACS
//! path literally, so nothing from instance files is ever interpreted by a
//! shell.

use std::path::Path;
use std::process::Command;

use crate::cnf::Var;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverVerdict {
    Satisfiable(SolverModel),
    Unsatisfiable,
}

/// A model read from `v` lines, indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverModel {
    values: Vec<Option<bool>>,
}

impl SolverModel {
    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get((v.0 - 1) as usize).copied().flatten()
    }
}

/// Parses solver output: an `s SATISFIABLE`/`s UNSATISFIABLE` status line
/// plus `v` literal lines terminated by 0.
pub fn parse_solver_output(text: &str) -> Result<SolverVerdict> {
    let mut status: Option<bool> = None;
    let mut literals: Vec<i32> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                other => {
                    return Err(Error::input(format!("unknown solver status {other:?}")))
                }
            }
        } else if let Some(rest) = line.strip_prefix('v') {
            for tok in rest.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::input(format!("bad literal {tok:?} in model")))?;
                if lit != 0 {
                    literals.push(lit);
                }
            }
        }
    }
    match status {
        Some(false) => Ok(SolverVerdict::Unsatisfiable),
        Some(true) => {
            let max = literals.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0);
            let mut values = vec![None; max as usize];
            for lit in literals {
                values[(lit.unsigned_abs() - 1) as usize] = Some(lit > 0);
            }
            Ok(SolverVerdict::Satisfiable(SolverModel { values }))
        }
        None => Err(Error::input("solver output carries no `s` status line")),
    }
}

/// Runs `template` with `{file}` replaced by the DIMACS path and parses
/// the verdict. Nonzero exit statuses are fine (solvers conventionally
/// exit 10/20); only missing output is an error.
pub fn run_solver(template: &str, dimacs_path: &Path) -> Result<SolverVerdict> {
    let path = dimacs_path.to_string_lossy();
    let parts: Vec<String> = template
        .split_whitespace()
        .map(|tok| tok.replace("{file}", &path))
        .collect();
    if parts.is_empty() {
        return Err(Error::input("empty solver command template"));
    }
    let output = Command::new(&parts[0])
        .args(&parts[1..])
        .output()
        .map_err(|e| Error::input(format!("failed to run solver {:?}: {e}", parts[0])))?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    parse_solver_output(&stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sat_with_model() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        match parse_solver_output(out).unwrap() {
            SolverVerdict::Satisfiable(model) => {
                assert_eq!(model.get(Var(1)), Some(true));
                assert_eq!(model.get(Var(2)), Some(false));
                assert_eq!(model.get(Var(3)), Some(true));
            }
            SolverVerdict::Unsatisfiable => panic!("expected sat"),
        }
    }

    #[test]
    fn parses_unsat_and_rejects_garbage() {
        assert_eq!(
            parse_solver_output("s UNSATISFIABLE\n").unwrap(),
            SolverVerdict::Unsatisfiable
        );
        assert!(parse_solver_output("nothing useful\n").is_err());
    }
}
