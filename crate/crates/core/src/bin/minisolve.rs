//! A tiny DIMACS SAT solver speaking the conventional output protocol
//! (`s SATISFIABLE` / `s UNSATISFIABLE`, `v` model lines, exit 10/20).
//! Backed by the crate's desk-scale DPLL search; meant for tests and small
//! instances, not competition benchmarks.

use std::process::ExitCode;

use langsat::cnf::{parse_dimacs, Var};
use langsat::sat::solve;

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let path = match (args.next(), args.next()) {
        (Some(path), None) => path,
        _ => {
            eprintln!("usage: minisolve <dimacs-file>");
            return ExitCode::from(2);
        }
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("minisolve: cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let formula = match parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("minisolve: {path}: {e}");
            return ExitCode::from(2);
        }
    };
    match solve(&formula, &[]) {
        Some(model) => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for i in 1..=formula.num_vars() {
                let var = Var(i as u32);
                let value = model.get(var).unwrap_or(false);
                line.push_str(&format!(" {}", if value { i as i64 } else { -(i as i64) }));
                if line.len() > 72 {
                    println!("{line}");
                    line = String::from("v");
                }
            }
            println!("{line} 0");
            ExitCode::from(10)
        }
        None => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
    }
}
