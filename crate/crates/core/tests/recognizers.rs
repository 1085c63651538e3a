//! Cross-checks between the independent recognition routes: Earley on the
//! original grammar against CYK on the converted grammar, and the
//! deterministic run against subset simulation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use langsat::gen;
use langsat::language::{cyk_recognize, earley_recognize, to_cnf, SequenceDomains};

/// 200 random grammars (unit rules, mixed right-hand sides, span
/// predicates): CYK over the CNF conversion must agree with Earley on the
/// original for every string up to length 6.
#[test]
fn cyk_of_cnf_agrees_with_earley_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA9);
    for i in 0..200 {
        let g = gen::restricted_grammar(&mut rng, 4, 6, 2, 6);
        let cnf = to_cnf(&g).unwrap();
        for n in 0..=6usize {
            let box_domains = SequenceDomains::full(g.terminals().clone(), n);
            for s in box_domains.iter_box() {
                let via_earley = earley_recognize(&g, &s).unwrap();
                let via_cyk = cyk_recognize(&cnf, &s).unwrap();
                assert_eq!(
                    via_earley, via_cyk,
                    "grammar {i} disagrees on {s:?}\n{g:?}"
                );
            }
        }
    }
}

/// Deterministic automata viewed as NFAs accept the same strings.
#[test]
fn dfa_and_subset_simulation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAA);
    let mut deterministic_seen = 0;
    while deterministic_seen < 60 {
        let a = gen::automaton(&mut rng, 5, 3);
        if a.kind() != langsat::language::AutomatonKind::Deterministic {
            continue;
        }
        deterministic_seen += 1;
        for n in 0..=4usize {
            let box_domains = SequenceDomains::full(a.alphabet().clone(), n);
            for s in box_domains.iter_box() {
                assert_eq!(a.dfa_accepts(&s).unwrap(), a.nfa_accepts(&s).unwrap());
            }
        }
    }
}

/// The grammar-side oracle agrees with the automaton-side oracle on a
/// right-linear grammar built from an automaton's transitions.
#[test]
fn right_linear_grammar_matches_its_automaton() {
    let text_automaton = "\
alphabet: r w
states: qr qw qr2
initial: qr
final: qr qw qr2
trans: qr r qr
trans: qr w qw
trans: qw w qw
trans: qw r qr2
trans: qr2 r qr2
";
    let text_grammar = "\
start: S
S -> r S | w T | r | w
T -> w T | r U | w | r
U -> r U | r
";
    let a = langsat::language::parse_automaton(text_automaton).unwrap();
    let g = langsat::language::parse_grammar(text_grammar).unwrap();
    let s = a.alphabet().parse_sequence("r w r").unwrap();
    assert!(earley_recognize(&g, &s).unwrap());
    for n in 1..=6usize {
        let box_domains = SequenceDomains::full(a.alphabet().clone(), n);
        for s in box_domains.iter_box() {
            assert_eq!(
                a.dfa_accepts(&s).unwrap(),
                earley_recognize(&g, &s).unwrap(),
                "{s:?}"
            );
        }
    }
}
