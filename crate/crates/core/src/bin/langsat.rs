//! Command-line front end: compile Regular/Grammar constraints to DIMACS,
//! emit MIP models, run the propagators, cross-check them against the
//! brute-force oracle, and compile/solve/decode shift-scheduling instances.
//!
//! Exit codes: 0 success or satisfiable, 1 unsatisfiable or pruned to
//! failure, 2 usage or input error, 3 internal invariant violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use langsat::cnf::{CnfFormula, EncodeConfig, ExactlyOne};
use langsat::error::Error;
use langsat::grammar::{build_andor_dag, encode_grammar_sat, propagate_grammar_earley};
use langsat::language::{
    parse_automaton, parse_domains, parse_grammar, to_cnf, Alphabet, Automaton, RestrictedGrammar,
    SequenceDomains,
};
use langsat::mip::{encode_grammar_mip, encode_regular_flow, write_lp};
use langsat::oracle::{enumerate_language, gac_oracle, LanguageSpec};
use langsat::regular::cyclic::encode_cyclic;
use langsat::regular::encode::encode_regular_sat;
use langsat::regular::soft::{encode_soft_edit, encode_soft_hamming};
use langsat::regular::{propagate_regular, unfold};
use langsat::schedule::{build_instance, decode_solution, InstanceOptions, ShiftInstance};
use langsat::solver::{run_solver, SolverVerdict};

#[derive(Parser)]
#[command(name = "langsat", version, about = "Compile formal-language constraints over finite-domain sequences into SAT and MIP encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SoftMetric {
    Hamming,
    Edit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum ExactlyOneArg {
    #[default]
    Pairwise,
    Sequential,
}

impl From<ExactlyOneArg> for ExactlyOne {
    fn from(arg: ExactlyOneArg) -> ExactlyOne {
        match arg {
            ExactlyOneArg::Pairwise => ExactlyOne::Pairwise,
            ExactlyOneArg::Sequential => ExactlyOne::Sequential,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum CheckKind {
    Regular,
    Grammar,
    #[default]
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Regular constraint (or its soft/cyclic variant) to DIMACS
    CompileRegular {
        /// Automaton file
        #[arg(long)]
        automaton: PathBuf,
        /// Sequence length (full domains)
        #[arg(long)]
        n: Option<usize>,
        /// Domains file restricting candidate values per position
        #[arg(long)]
        domains: Option<PathBuf>,
        /// Soft variant: accept strings within --budget of the language
        #[arg(long, value_enum)]
        soft: Option<SoftMetric>,
        /// Distance budget for --soft
        #[arg(long, default_value_t = 0)]
        budget: usize,
        /// Cyclic variant: the sequence is read as a ring
        #[arg(long)]
        cyclic: bool,
        /// Exactly-one encoding for value/state groups
        #[arg(long, value_enum, default_value_t)]
        exactly_one: ExactlyOneArg,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a Grammar constraint to DIMACS
    CompileGrammar {
        /// Grammar file
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        domains: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        exactly_one: ExactlyOneArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the pruned AND/OR DAG in its text format
        #[arg(long)]
        dump_dag: Option<PathBuf>,
    },
    /// Propagate a constraint to generalized arc consistency and report
    /// the pruned domains
    Propagate {
        #[arg(long, conflicts_with = "grammar")]
        automaton: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        domains: Option<PathBuf>,
    },
    /// Cross-check propagators, unit propagation, and the oracle on
    /// seeded random instances
    CheckGac {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        kind: CheckKind,
    },
    /// Compile a shift-scheduling instance; optionally run a SAT solver
    /// and decode the schedule
    Schedule {
        /// Instance file
        #[arg(long)]
        instance: PathBuf,
        /// External solver template, e.g. "minisolve {file}"
        #[arg(long)]
        solver: Option<String>,
        /// Where to write the DIMACS file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Order employee rows lexicographically
        #[arg(long)]
        symmetry_break: bool,
        #[arg(long, value_enum, default_value_t)]
        exactly_one: ExactlyOneArg,
    },
    /// Emit a mixed-integer model in LP format
    EmitMip {
        #[arg(long, conflicts_with = "grammar")]
        automaton: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        domains: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the enumerated language and oracle GAC domains
    Oracle {
        #[arg(long, conflicts_with = "grammar")]
        automaton: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        domains: Option<PathBuf>,
    },
}

/// 0 = success/satisfiable, 1 = unsatisfiable/pruned-to-failure.
enum Outcome {
    Success,
    Unsat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Unsat) => ExitCode::from(1),
        Err(e) => {
            eprintln!("langsat: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, parsed: Result<T, Error>) -> Result<T, Error> {
    parsed.map_err(|e| match e {
        Error::Parse { line, message } => {
            Error::input(format!("{}:{line}: {message}", path.display()))
        }
        other => other,
    })
}

fn load_automaton(path: &Path) -> Result<Automaton, Error> {
    located(path, parse_automaton(&read_file(path)?))
}

fn load_grammar(path: &Path) -> Result<RestrictedGrammar, Error> {
    located(path, parse_grammar(&read_file(path)?))
}

fn load_domains(
    alphabet: &Alphabet,
    n: Option<usize>,
    domains: Option<&PathBuf>,
) -> Result<SequenceDomains, Error> {
    match (n, domains) {
        (Some(n), None) => Ok(SequenceDomains::full(alphabet.clone(), n)),
        (None, Some(path)) => located(path, parse_domains(&read_file(path)?, alphabet)),
        (Some(n), Some(path)) => {
            let d = located(path, parse_domains(&read_file(path)?, alphabet))?;
            if d.n() != n {
                return Err(Error::input(format!(
                    "--n {n} contradicts the {}-position domains file",
                    d.n()
                )));
            }
            Ok(d)
        }
        (None, None) => Err(Error::input("give --n or --domains")),
    }
}

fn write_out(out: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_cnf(f: &CnfFormula, out: Option<&PathBuf>) -> Result<Outcome, Error> {
    write_out(out, &f.to_dimacs())?;
    Ok(if f.is_failed() {
        Outcome::Unsat
    } else {
        Outcome::Success
    })
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::CompileRegular {
            automaton,
            n,
            domains,
            soft,
            budget,
            cyclic,
            exactly_one,
            out,
        } => {
            let a = load_automaton(&automaton)?;
            let d = load_domains(a.alphabet(), n, domains.as_ref())?;
            let cfg = EncodeConfig {
                exactly_one: exactly_one.into(),
            };
            if cyclic && soft.is_some() {
                return Err(Error::input("--cyclic and --soft do not combine"));
            }
            let f = if cyclic {
                encode_cyclic(&a, &d, &cfg)?
            } else {
                match soft {
                    Some(SoftMetric::Hamming) => encode_soft_hamming(&a, &d, budget, &cfg)?,
                    Some(SoftMetric::Edit) => encode_soft_edit(&a, &d, budget, &cfg)?,
                    None => {
                        let g = unfold(&a, &d)?;
                        encode_regular_sat(&g, &cfg)
                    }
                }
            };
            emit_cnf(&f, out.as_ref())
        }
        Command::CompileGrammar {
            grammar,
            n,
            domains,
            exactly_one,
            out,
            dump_dag,
        } => {
            let g = load_grammar(&grammar)?;
            let d = load_domains(g.terminals(), n, domains.as_ref())?;
            let cnf_grammar = to_cnf(&g)?;
            if cnf_grammar.is_empty_language() {
                eprintln!("langsat: warning: the grammar derives no terminating string (empty language)");
            }
            let dag = build_andor_dag(&cnf_grammar, &d)?;
            if let Some(path) = &dump_dag {
                std::fs::write(path, dag.dump())
                    .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            }
            let cfg = EncodeConfig {
                exactly_one: exactly_one.into(),
            };
            let f = encode_grammar_sat(&dag, &cfg);
            emit_cnf(&f, out.as_ref())
        }
        Command::Propagate {
            automaton,
            grammar,
            n,
            domains,
        } => {
            let pruned = match (automaton, grammar) {
                (Some(path), None) => {
                    let a = load_automaton(&path)?;
                    let d = load_domains(a.alphabet(), n, domains.as_ref())?;
                    let g = unfold(&a, &d)?;
                    propagate_regular(&g, &d)?
                }
                (None, Some(path)) => {
                    let g = load_grammar(&path)?;
                    let d = load_domains(g.terminals(), n, domains.as_ref())?;
                    propagate_grammar_earley(&g, &d)?
                }
                _ => return Err(Error::input("give exactly one of --automaton/--grammar")),
            };
            print!("{}", pruned.render());
            if pruned.is_failed() {
                println!("status: failed");
                Ok(Outcome::Unsat)
            } else {
                println!("status: consistent");
                Ok(Outcome::Success)
            }
        }
        Command::CheckGac { count, seed, kind } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checked = 0usize;
            for i in 0..count {
                if matches!(kind, CheckKind::Regular | CheckKind::Both) {
                    if let Err(report) = langsat::checks::regular_gac_once(&mut rng, 5, 4, 8)? {
                        eprintln!("langsat: check-gac: regular instance {i} (seed {seed}):\n{report}");
                        return Err(Error::Internal("GAC equivalence violated".into()));
                    }
                    checked += 1;
                }
                if matches!(kind, CheckKind::Grammar | CheckKind::Both) {
                    if let Err(report) = langsat::checks::grammar_gac_once(&mut rng, 5, 8, 3, 8)? {
                        eprintln!("langsat: check-gac: grammar instance {i} (seed {seed}):\n{report}");
                        return Err(Error::Internal("GAC equivalence violated".into()));
                    }
                    checked += 1;
                }
            }
            println!("check-gac: {checked} instances agree with the oracle (seed {seed})");
            Ok(Outcome::Success)
        }
        Command::Schedule {
            instance,
            solver,
            out,
            symmetry_break,
            exactly_one,
        } => {
            let inst = located(&instance, ShiftInstance::parse(&read_file(&instance)?))?;
            let opts = InstanceOptions {
                config: EncodeConfig {
                    exactly_one: exactly_one.into(),
                },
                symmetry_break,
            };
            let f = build_instance(&inst, &opts)?;
            let dimacs_path = match &out {
                Some(path) => path.clone(),
                None => std::env::temp_dir()
                    .join(format!("langsat-schedule-{}.cnf", std::process::id())),
            };
            std::fs::write(&dimacs_path, f.to_dimacs())
                .map_err(|e| Error::input(format!("{}: {e}", dimacs_path.display())))?;
            println!("wrote {}", dimacs_path.display());
            let Some(template) = solver else {
                return Ok(if f.is_failed() {
                    Outcome::Unsat
                } else {
                    Outcome::Success
                });
            };
            match run_solver(&template, &dimacs_path)? {
                SolverVerdict::Unsatisfiable => {
                    println!("unsatisfiable");
                    Ok(Outcome::Unsat)
                }
                SolverVerdict::Satisfiable(model) => {
                    let table = decode_solution(&f, &inst, &|v| model.get(v))?;
                    print!("{table}");
                    Ok(Outcome::Success)
                }
            }
        }
        Command::EmitMip {
            automaton,
            grammar,
            n,
            domains,
            out,
        } => {
            let model = match (automaton, grammar) {
                (Some(path), None) => {
                    let a = load_automaton(&path)?;
                    let d = load_domains(a.alphabet(), n, domains.as_ref())?;
                    let g = unfold(&a, &d)?;
                    encode_regular_flow(&g)
                }
                (None, Some(path)) => {
                    let g = load_grammar(&path)?;
                    let d = load_domains(g.terminals(), n, domains.as_ref())?;
                    let cnf_grammar = to_cnf(&g)?;
                    let dag = build_andor_dag(&cnf_grammar, &d)?;
                    encode_grammar_mip(&dag)
                }
                _ => return Err(Error::input("give exactly one of --automaton/--grammar")),
            };
            write_out(out.as_ref(), &write_lp(&model)?)?;
            Ok(if model.is_failed() {
                Outcome::Unsat
            } else {
                Outcome::Success
            })
        }
        Command::Oracle {
            automaton,
            grammar,
            n,
            domains,
        } => {
            let (loaded_a, loaded_g);
            let (spec, d) = match (automaton, grammar) {
                (Some(path), None) => {
                    loaded_a = load_automaton(&path)?;
                    let d = load_domains(loaded_a.alphabet(), n, domains.as_ref())?;
                    (LanguageSpec::Automaton(&loaded_a), d)
                }
                (None, Some(path)) => {
                    loaded_g = load_grammar(&path)?;
                    let d = load_domains(loaded_g.terminals(), n, domains.as_ref())?;
                    (LanguageSpec::Grammar(&loaded_g), d)
                }
                _ => return Err(Error::input("give exactly one of --automaton/--grammar")),
            };
            let sample = enumerate_language(spec, &d)?;
            println!("strings: {}", sample.strings.len());
            for s in &sample.strings {
                println!("{}", d.alphabet().render_sequence(s));
            }
            let gac = gac_oracle(&sample, &d);
            println!("gac:");
            print!("{}", gac.render());
            Ok(if sample.strings.is_empty() {
                Outcome::Unsat
            } else {
                Outcome::Success
            })
        }
    }
}
