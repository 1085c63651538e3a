//! Exercises the C ABI from Rust the way a foreign caller would: through
//! raw pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use langsat_capi::*;

const AUTOMATON: &str = "\
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

const GRAMMAR: &str = "\
start: S
S -> A B | B A
A -> a
B -> b
";

fn cstr(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let text = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    ls_string_free(ptr);
    text
}

#[test]
fn automaton_round_trip_and_compile() {
    unsafe {
        let mut automaton = ptr::null_mut();
        let status = ls_automaton_parse(cstr(AUTOMATON).as_ptr(), &mut automaton);
        assert_eq!(status, LsStatus::Ok);

        let mut accepted = false;
        assert_eq!(
            ls_automaton_accepts(automaton, cstr("r w r").as_ptr(), &mut accepted),
            LsStatus::Ok
        );
        assert!(accepted);
        assert_eq!(
            ls_automaton_accepts(automaton, cstr("w r w").as_ptr(), &mut accepted),
            LsStatus::Ok
        );
        assert!(!accepted);

        let mut domains = ptr::null_mut();
        assert_eq!(
            ls_automaton_full_domains(automaton, 3, &mut domains),
            LsStatus::Ok
        );
        assert!(!ls_domains_is_failed(domains));

        let mut dimacs = ptr::null_mut();
        assert_eq!(
            ls_compile_regular(automaton, domains, LS_SOFT_NONE, 0, false, &mut dimacs),
            LsStatus::Ok
        );
        let text = take_string(dimacs);
        assert!(text.contains("p cnf"));
        assert!(text.contains("c map 1 x 0 r"));

        let mut lp = ptr::null_mut();
        assert_eq!(
            ls_emit_regular_lp(automaton, domains, &mut lp),
            LsStatus::Ok
        );
        let text = take_string(lp);
        assert!(text.contains("Subject To"));

        ls_domains_free(domains);
        ls_automaton_free(automaton);
    }
}

#[test]
fn propagation_through_the_boundary() {
    unsafe {
        let mut automaton = ptr::null_mut();
        assert_eq!(
            ls_automaton_parse(cstr(AUTOMATON).as_ptr(), &mut automaton),
            LsStatus::Ok
        );
        let mut domains = ptr::null_mut();
        assert_eq!(
            ls_automaton_full_domains(automaton, 3, &mut domains),
            LsStatus::Ok
        );
        // {r,w} x {r} x {w}: only "rrw" is accepted
        assert_eq!(
            ls_domains_restrict(domains, 1, cstr("r").as_ptr()),
            LsStatus::Ok
        );
        assert_eq!(
            ls_domains_restrict(domains, 2, cstr("w").as_ptr()),
            LsStatus::Ok
        );
        let mut pruned = ptr::null_mut();
        assert_eq!(
            ls_propagate_regular(automaton, domains, &mut pruned),
            LsStatus::Ok
        );
        let mut rendered = ptr::null_mut();
        assert_eq!(ls_domains_render(pruned, &mut rendered), LsStatus::Ok);
        assert_eq!(take_string(rendered), "0: r\n1: r\n2: w\n");
        ls_domains_free(pruned);
        ls_domains_free(domains);
        ls_automaton_free(automaton);
    }
}

#[test]
fn grammar_side() {
    unsafe {
        let mut grammar = ptr::null_mut();
        assert_eq!(
            ls_grammar_parse(cstr(GRAMMAR).as_ptr(), &mut grammar),
            LsStatus::Ok
        );
        let mut accepted = false;
        assert_eq!(
            ls_grammar_accepts(grammar, cstr("a b").as_ptr(), &mut accepted),
            LsStatus::Ok
        );
        assert!(accepted);
        assert_eq!(
            ls_grammar_accepts(grammar, cstr("a a").as_ptr(), &mut accepted),
            LsStatus::Ok
        );
        assert!(!accepted);

        let mut domains = ptr::null_mut();
        assert_eq!(
            ls_grammar_full_domains(grammar, 2, &mut domains),
            LsStatus::Ok
        );
        let mut dimacs = ptr::null_mut();
        assert_eq!(
            ls_compile_grammar(grammar, domains, &mut dimacs),
            LsStatus::Ok
        );
        assert!(take_string(dimacs).contains("p cnf"));

        let mut pruned = ptr::null_mut();
        assert_eq!(
            ls_domains_restrict(domains, 0, cstr("a").as_ptr()),
            LsStatus::Ok
        );
        assert_eq!(
            ls_propagate_grammar(grammar, domains, &mut pruned),
            LsStatus::Ok
        );
        let mut rendered = ptr::null_mut();
        assert_eq!(ls_domains_render(pruned, &mut rendered), LsStatus::Ok);
        assert_eq!(take_string(rendered), "0: a\n1: b\n");
        ls_domains_free(pruned);
        ls_domains_free(domains);
        ls_grammar_free(grammar);
    }
}

#[test]
fn errors_carry_messages_and_codes() {
    unsafe {
        let mut automaton = ptr::null_mut();
        let status = ls_automaton_parse(cstr("states: broken\n").as_ptr(), &mut automaton);
        assert_eq!(status, LsStatus::ParseError);
        let message = CStr::from_ptr(ls_last_error()).to_str().unwrap();
        assert!(!message.is_empty());

        assert_eq!(
            ls_automaton_parse(ptr::null(), &mut automaton),
            LsStatus::NullPointer
        );

        let version = CStr::from_ptr(ls_version()).to_str().unwrap();
        assert!(!version.is_empty());
    }
}
