//! The cross-implementation agreement checks behind `check-gac` and the
//! acceptance suite: on random instances, the dynamic-programming
//! propagators, the unit-propagation fixpoints of the CNF encodings, and
//! the brute-force oracle must produce identical domains.

use rand::Rng;

use crate::cnf::{Atom, EncodeConfig, Lit};
use crate::error::Result;
use crate::gen;
use crate::grammar::{build_andor_dag, encode_grammar_sat, propagate_grammar_cyk,
    propagate_grammar_earley};
use crate::language::domains::SequenceDomains;
use crate::language::grammar::to_cnf;
use crate::oracle::{enumerate_language, gac_oracle, LanguageSpec};
use crate::regular::encode::encode_regular_sat;
use crate::regular::{propagate_regular, unfold};
use crate::sat::{project_value_domains, unit_propagate};

fn assumptions_excluding(
    f: &crate::cnf::CnfFormula,
    full: &SequenceDomains,
    d: &SequenceDomains,
) -> Vec<Lit> {
    let mut out = Vec::new();
    for t in 0..full.n() {
        for &v in full.at(t) {
            if !d.contains(t, v) {
                if let Some(var) = f.lookup(&Atom::value(t, full.alphabet().name(v))) {
                    out.push(var.nlit());
                }
            }
        }
    }
    out
}

/// One Regular-constraint agreement check: the reachability propagator,
/// the unit-propagation fixpoint of the encoding built from the restricted
/// domains, and the fixpoint of the full-domain encoding under
/// domain-restriction assumptions must all equal the enumeration oracle.
pub fn regular_gac_once(
    rng: &mut impl Rng,
    max_states: usize,
    max_symbols: usize,
    max_n: usize,
) -> Result<std::result::Result<(), String>> {
    let a = gen::automaton(rng, max_states, max_symbols);
    let n = rng.gen_range(1..=max_n);
    let d = gen::subset_domains(rng, a.alphabet(), n);
    let cfg = EncodeConfig::default();

    let sample = enumerate_language(LanguageSpec::Automaton(&a), &d)?;
    let expect = gac_oracle(&sample, &d);

    let full = SequenceDomains::full(a.alphabet().clone(), n);
    let g_full = unfold(&a, &full)?;
    let propagated = propagate_regular(&g_full, &d)?;
    if propagated != expect {
        return Ok(Err(format!(
            "propagate_regular disagrees with the oracle\nautomaton: {a:?}\ndomains:\n{}\npropagator:\n{}\noracle:\n{}",
            d.render(),
            propagated.render(),
            expect.render()
        )));
    }

    // encoding over the restricted domains, no assumptions
    let g_d = unfold(&a, &d)?;
    let f = encode_regular_sat(&g_d, &cfg);
    let projected = project_value_domains(&f, &unit_propagate(&f, &[]), &d, None);
    if projected != expect {
        return Ok(Err(format!(
            "unit propagation on the restricted encoding disagrees\nautomaton: {a:?}\ndomains:\n{}\nprojected:\n{}\noracle:\n{}",
            d.render(),
            projected.render(),
            expect.render()
        )));
    }

    // encoding over full domains, restriction via assumptions
    let f_full = encode_regular_sat(&g_full, &cfg);
    let assumptions = assumptions_excluding(&f_full, &full, &d);
    let projected =
        project_value_domains(&f_full, &unit_propagate(&f_full, &assumptions), &d, None);
    if projected != expect {
        return Ok(Err(format!(
            "unit propagation under assumptions disagrees\nautomaton: {a:?}\ndomains:\n{}\nprojected:\n{}\noracle:\n{}",
            d.render(),
            projected.render(),
            expect.render()
        )));
    }
    Ok(Ok(()))
}

/// One Grammar-constraint agreement check: CYK propagator, Earley
/// propagator, and the unit-propagation fixpoints of the DAG encoding
/// (restricted build and full build under assumptions) against the oracle.
pub fn grammar_gac_once(
    rng: &mut impl Rng,
    max_nonterminals: usize,
    max_productions: usize,
    max_symbols: usize,
    max_n: usize,
) -> Result<std::result::Result<(), String>> {
    let g = gen::cnf_shaped_grammar(rng, max_nonterminals, max_productions, max_symbols, max_n);
    let cnf = to_cnf(&g)?;
    let n = rng.gen_range(1..=max_n);
    let d = gen::subset_domains(rng, g.terminals(), n);
    let cfg = EncodeConfig::default();

    let sample = enumerate_language(LanguageSpec::Grammar(&g), &d)?;
    let expect = gac_oracle(&sample, &d);

    let cyk = propagate_grammar_cyk(&cnf, &d)?;
    if cyk != expect {
        return Ok(Err(format!(
            "the CYK propagator disagrees with the oracle\ngrammar: {g:?}\ndomains:\n{}\ncyk:\n{}\noracle:\n{}",
            d.render(),
            cyk.render(),
            expect.render()
        )));
    }
    let earley = propagate_grammar_earley(&g, &d)?;
    if earley != expect {
        return Ok(Err(format!(
            "the Earley propagator disagrees with the oracle\ngrammar: {g:?}\ndomains:\n{}\nearley:\n{}\noracle:\n{}",
            d.render(),
            earley.render(),
            expect.render()
        )));
    }

    let dag = build_andor_dag(&cnf, &d)?;
    let f = encode_grammar_sat(&dag, &cfg);
    let projected = project_value_domains(&f, &unit_propagate(&f, &[]), &d, None);
    if projected != expect {
        return Ok(Err(format!(
            "unit propagation on the restricted DAG encoding disagrees\ngrammar: {g:?}\ndomains:\n{}\nprojected:\n{}\noracle:\n{}",
            d.render(),
            projected.render(),
            expect.render()
        )));
    }

    let full = SequenceDomains::full(g.terminals().clone(), n);
    let dag_full = build_andor_dag(&cnf, &full)?;
    let f_full = encode_grammar_sat(&dag_full, &cfg);
    let assumptions = assumptions_excluding(&f_full, &full, &d);
    let projected =
        project_value_domains(&f_full, &unit_propagate(&f_full, &assumptions), &d, None);
    if projected != expect {
        return Ok(Err(format!(
            "unit propagation under assumptions disagrees\ngrammar: {g:?}\ndomains:\n{}\nprojected:\n{}\noracle:\n{}",
            d.render(),
            projected.render(),
            expect.render()
        )));
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn regular_agreement_on_a_seeded_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for i in 0..40 {
            regular_gac_once(&mut rng, 4, 3, 6)
                .unwrap()
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
        }
    }

    #[test]
    fn grammar_agreement_on_a_seeded_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for i in 0..30 {
            grammar_gac_once(&mut rng, 4, 6, 3, 6)
                .unwrap()
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
        }
    }
}
