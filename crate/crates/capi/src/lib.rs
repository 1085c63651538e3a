//! C ABI for the langsat constraint compiler.
//!
//! Handles are opaque pointers owned by this library; every constructor
//! has a matching `_free`, and strings returned through out-parameters are
//! released with `ls_string_free`. Functions report an `LsStatus`; on
//! failure `ls_last_error` describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};

use langsat::cnf::EncodeConfig;
use langsat::error::Error;
use langsat::grammar::{build_andor_dag, encode_grammar_sat, propagate_grammar_earley};
use langsat::language::{
    parse_automaton, parse_grammar, to_cnf, Automaton, AutomatonKind, RestrictedGrammar,
    SequenceDomains,
};
use langsat::mip::{encode_grammar_mip, encode_regular_flow, write_lp};
use langsat::regular::cyclic::encode_cyclic;
use langsat::regular::encode::encode_regular_sat;
use langsat::regular::soft::{encode_soft_edit, encode_soft_hamming};
use langsat::regular::{propagate_regular, unfold};

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InputError = 4,
    Infeasible = 5,
    Internal = 6,
}

/// An automaton handle.
pub struct LsAutomaton(Automaton);

/// A grammar handle.
pub struct LsGrammar(RestrictedGrammar);

/// A per-position candidate-set handle.
pub struct LsDomains(SequenceDomains);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let cleaned: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).expect("NUL bytes removed");
    });
}

fn status_of(e: &Error) -> LsStatus {
    match e {
        Error::Parse { .. } => LsStatus::ParseError,
        Error::Input(_) => LsStatus::InputError,
        Error::Infeasible(_) => LsStatus::Infeasible,
        Error::Internal(_) => LsStatus::Internal,
    }
}

fn fail(e: &Error) -> LsStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// # Safety
/// `text` must be a NUL-terminated string (or null, which errors).
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, LsStatus> {
    if text.is_null() {
        set_error("null string argument");
        return Err(LsStatus::NullPointer);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        LsStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> LsStatus {
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    let cleaned: String = text.chars().filter(|&c| c != '\0').collect();
    let boxed = CString::new(cleaned).expect("NUL bytes removed");
    unsafe { *out = boxed.into_raw() };
    LsStatus::Ok
}

/// The library version as a static string; never freed.
#[no_mangle]
pub extern "C" fn ls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The last error message recorded on this thread. The pointer stays valid
/// until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned through an out-parameter.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an automaton from its text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ls_automaton_parse(
    text: *const c_char,
    out: *mut *mut LsAutomaton,
) -> LsStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    match parse_automaton(text) {
        Ok(a) => {
            *out = Box::into_raw(Box::new(LsAutomaton(a)));
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// `a` must come from `ls_automaton_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ls_automaton_free(a: *mut LsAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Parses a grammar from its text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ls_grammar_parse(
    text: *const c_char,
    out: *mut *mut LsGrammar,
) -> LsStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    match parse_grammar(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(LsGrammar(g)));
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// `g` must come from `ls_grammar_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ls_grammar_free(g: *mut LsGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

unsafe fn borrow<'a, T>(ptr: *const T) -> Result<&'a T, LsStatus> {
    match ptr.as_ref() {
        Some(r) => Ok(r),
        None => {
            set_error("null handle argument");
            Err(LsStatus::NullPointer)
        }
    }
}

/// Full domains of length `n` over the automaton's alphabet.
///
/// # Safety
/// `a` must be a live automaton handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_automaton_full_domains(
    a: *const LsAutomaton,
    n: usize,
    out: *mut *mut LsDomains,
) -> LsStatus {
    let a = match borrow(a) {
        Ok(a) => a,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    let d = SequenceDomains::full(a.0.alphabet().clone(), n);
    *out = Box::into_raw(Box::new(LsDomains(d)));
    LsStatus::Ok
}

/// Full domains of length `n` over the grammar's terminal alphabet.
///
/// # Safety
/// `g` must be a live grammar handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_grammar_full_domains(
    g: *const LsGrammar,
    n: usize,
    out: *mut *mut LsDomains,
) -> LsStatus {
    let g = match borrow(g) {
        Ok(g) => g,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    let d = SequenceDomains::full(g.0.terminals().clone(), n);
    *out = Box::into_raw(Box::new(LsDomains(d)));
    LsStatus::Ok
}

/// Restricts one position to the whitespace-separated symbols in `allowed`.
///
/// # Safety
/// `d` must be a live domains handle; `allowed` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ls_domains_restrict(
    d: *mut LsDomains,
    pos: usize,
    allowed: *const c_char,
) -> LsStatus {
    let Some(d) = d.as_mut() else {
        set_error("null handle argument");
        return LsStatus::NullPointer;
    };
    let allowed = match read_str(allowed) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if pos >= d.0.n() {
        set_error(&format!("position {pos} out of range 0..{}", d.0.n()));
        return LsStatus::InputError;
    }
    match d.0.alphabet().parse_sequence(allowed) {
        Ok(symbols) => {
            d.0.restrict(pos, symbols);
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// True when some position has no candidates left.
///
/// # Safety
/// `d` must be a live domains handle.
#[no_mangle]
pub unsafe extern "C" fn ls_domains_is_failed(d: *const LsDomains) -> bool {
    d.as_ref().is_none_or(|d| d.0.is_failed())
}

/// Renders the domains as one `position: symbols` line per position.
///
/// # Safety
/// `d` must be a live domains handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_domains_render(
    d: *const LsDomains,
    out: *mut *mut c_char,
) -> LsStatus {
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    give_string(out, d.0.render())
}

/// # Safety
/// `d` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ls_domains_free(d: *mut LsDomains) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Runs the automaton on a whitespace-separated symbol sequence
/// (deterministic or subset simulation, per the automaton's kind).
///
/// # Safety
/// `a` must be a live handle; `sequence` NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ls_automaton_accepts(
    a: *const LsAutomaton,
    sequence: *const c_char,
    out: *mut bool,
) -> LsStatus {
    let a = match borrow(a) {
        Ok(a) => a,
        Err(status) => return status,
    };
    let sequence = match read_str(sequence) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    let result = a
        .0
        .alphabet()
        .parse_sequence(sequence)
        .and_then(|s| match a.0.kind() {
            AutomatonKind::Deterministic => a.0.dfa_accepts(&s),
            AutomatonKind::Nondeterministic => a.0.nfa_accepts(&s),
        });
    match result {
        Ok(accepted) => {
            *out = accepted;
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Earley recognition of a whitespace-separated symbol sequence.
///
/// # Safety
/// `g` must be a live handle; `sequence` NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ls_grammar_accepts(
    g: *const LsGrammar,
    sequence: *const c_char,
    out: *mut bool,
) -> LsStatus {
    let g = match borrow(g) {
        Ok(g) => g,
        Err(status) => return status,
    };
    let sequence = match read_str(sequence) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    let result = g
        .0
        .terminals()
        .parse_sequence(sequence)
        .and_then(|s| langsat::language::earley_recognize(&g.0, &s));
    match result {
        Ok(accepted) => {
            *out = accepted;
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Soft-variant selector for `ls_compile_regular`.
pub const LS_SOFT_NONE: c_int = 0;
pub const LS_SOFT_HAMMING: c_int = 1;
pub const LS_SOFT_EDIT: c_int = 2;

/// Compiles the Regular constraint (or its soft/cyclic variant) over the
/// domains to DIMACS CNF text.
///
/// # Safety
/// `a` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_compile_regular(
    a: *const LsAutomaton,
    d: *const LsDomains,
    soft: c_int,
    budget: usize,
    cyclic: bool,
    out: *mut *mut c_char,
) -> LsStatus {
    let a = match borrow(a) {
        Ok(a) => a,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let cfg = EncodeConfig::default();
    if cyclic && soft != LS_SOFT_NONE {
        set_error("cyclic and soft variants do not combine");
        return LsStatus::InputError;
    }
    let formula = if cyclic {
        encode_cyclic(&a.0, &d.0, &cfg)
    } else {
        match soft {
            LS_SOFT_NONE => unfold(&a.0, &d.0).map(|g| encode_regular_sat(&g, &cfg)),
            LS_SOFT_HAMMING => encode_soft_hamming(&a.0, &d.0, budget, &cfg),
            LS_SOFT_EDIT => encode_soft_edit(&a.0, &d.0, budget, &cfg),
            other => {
                set_error(&format!("unknown soft metric {other}"));
                return LsStatus::InputError;
            }
        }
    };
    match formula {
        Ok(f) => give_string(out, f.to_dimacs()),
        Err(e) => fail(&e),
    }
}

/// Compiles the Grammar constraint over the domains to DIMACS CNF text.
///
/// # Safety
/// `g` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_compile_grammar(
    g: *const LsGrammar,
    d: *const LsDomains,
    out: *mut *mut c_char,
) -> LsStatus {
    let g = match borrow(g) {
        Ok(g) => g,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let result = to_cnf(&g.0)
        .and_then(|cnf| build_andor_dag(&cnf, &d.0))
        .map(|dag| encode_grammar_sat(&dag, &EncodeConfig::default()));
    match result {
        Ok(f) => give_string(out, f.to_dimacs()),
        Err(e) => fail(&e),
    }
}

/// Emits the network-flow MIP model of the Regular constraint as LP text.
///
/// # Safety
/// `a` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_emit_regular_lp(
    a: *const LsAutomaton,
    d: *const LsDomains,
    out: *mut *mut c_char,
) -> LsStatus {
    let a = match borrow(a) {
        Ok(a) => a,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    match unfold(&a.0, &d.0).and_then(|g| write_lp(&encode_regular_flow(&g))) {
        Ok(text) => give_string(out, text),
        Err(e) => fail(&e),
    }
}

/// Emits the AND/OR MIP model of the Grammar constraint as LP text.
///
/// # Safety
/// `g` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_emit_grammar_lp(
    g: *const LsGrammar,
    d: *const LsDomains,
    out: *mut *mut c_char,
) -> LsStatus {
    let g = match borrow(g) {
        Ok(g) => g,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    let result = to_cnf(&g.0)
        .and_then(|cnf| build_andor_dag(&cnf, &d.0))
        .and_then(|dag| write_lp(&encode_grammar_mip(&dag)));
    match result {
        Ok(text) => give_string(out, text),
        Err(e) => fail(&e),
    }
}

/// Prunes the domains to generalized arc consistency against the Regular
/// constraint; the result is a fresh handle.
///
/// # Safety
/// `a` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_propagate_regular(
    a: *const LsAutomaton,
    d: *const LsDomains,
    out: *mut *mut LsDomains,
) -> LsStatus {
    let a = match borrow(a) {
        Ok(a) => a,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    match unfold(&a.0, &d.0).and_then(|g| propagate_regular(&g, &d.0)) {
        Ok(pruned) => {
            *out = Box::into_raw(Box::new(LsDomains(pruned)));
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Prunes the domains to generalized arc consistency against the Grammar
/// constraint; the result is a fresh handle.
///
/// # Safety
/// `g` and `d` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_propagate_grammar(
    g: *const LsGrammar,
    d: *const LsDomains,
    out: *mut *mut LsDomains,
) -> LsStatus {
    let g = match borrow(g) {
        Ok(g) => g,
        Err(status) => return status,
    };
    let d = match borrow(d) {
        Ok(d) => d,
        Err(status) => return status,
    };
    if out.is_null() {
        set_error("null output pointer");
        return LsStatus::NullPointer;
    }
    match propagate_grammar_earley(&g.0, &d.0) {
        Ok(pruned) => {
            *out = Box::into_raw(Box::new(LsDomains(pruned)));
            LsStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
