/* C interface to the langsat constraint compiler. */

#ifndef LANGSAT_H
#define LANGSAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Soft-variant selector for `ls_compile_regular`.
 */
#define LS_SOFT_NONE 0

#define LS_SOFT_HAMMING 1

#define LS_SOFT_EDIT 2

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  LS_STATUS_INVALID_UTF8 = 2,
  LS_STATUS_PARSE_ERROR = 3,
  LS_STATUS_INPUT_ERROR = 4,
  LS_STATUS_INFEASIBLE = 5,
  LS_STATUS_INTERNAL = 6,
} LsStatus;

/**
 * An automaton handle.
 */
typedef struct LsAutomaton LsAutomaton;

/**
 * A per-position candidate-set handle.
 */
typedef struct LsDomains LsDomains;

/**
 * A grammar handle.
 */
typedef struct LsGrammar LsGrammar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as a static string; never freed.
 */
const char *ls_version(void);

/**
 * The last error message recorded on this thread. The pointer stays valid
 * until the next failing call on the same thread; do not free it.
 */
const char *ls_last_error(void);

/**
 * Frees a string returned through an out-parameter.
 *
 * # Safety
 * `s` must have been produced by this library and not freed before.
 */
void ls_string_free(char *s);

/**
 * Parses an automaton from its text format.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be a valid pointer.
 */
enum LsStatus ls_automaton_parse(const char *text, struct LsAutomaton **out);

/**
 * # Safety
 * `a` must come from `ls_automaton_parse` and not be freed twice.
 */
void ls_automaton_free(struct LsAutomaton *a);

/**
 * Parses a grammar from its text format.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be a valid pointer.
 */
enum LsStatus ls_grammar_parse(const char *text, struct LsGrammar **out);

/**
 * # Safety
 * `g` must come from `ls_grammar_parse` and not be freed twice.
 */
void ls_grammar_free(struct LsGrammar *g);

/**
 * Full domains of length `n` over the automaton's alphabet.
 *
 * # Safety
 * `a` must be a live automaton handle; `out` must be valid.
 */
enum LsStatus ls_automaton_full_domains(const struct LsAutomaton *a,
                                        size_t n,
                                        struct LsDomains **out);

/**
 * Full domains of length `n` over the grammar's terminal alphabet.
 *
 * # Safety
 * `g` must be a live grammar handle; `out` must be valid.
 */
enum LsStatus ls_grammar_full_domains(const struct LsGrammar *g, size_t n, struct LsDomains **out);

/**
 * Restricts one position to the whitespace-separated symbols in `allowed`.
 *
 * # Safety
 * `d` must be a live domains handle; `allowed` must be NUL-terminated.
 */
enum LsStatus ls_domains_restrict(struct LsDomains *d, size_t pos, const char *allowed);

/**
 * True when some position has no candidates left.
 *
 * # Safety
 * `d` must be a live domains handle.
 */
bool ls_domains_is_failed(const struct LsDomains *d);

/**
 * Renders the domains as one `position: symbols` line per position.
 *
 * # Safety
 * `d` must be a live domains handle; `out` must be valid.
 */
enum LsStatus ls_domains_render(const struct LsDomains *d, char **out);

/**
 * # Safety
 * `d` must come from this library and not be freed twice.
 */
void ls_domains_free(struct LsDomains *d);

/**
 * Runs the automaton on a whitespace-separated symbol sequence
 * (deterministic or subset simulation, per the automaton's kind).
 *
 * # Safety
 * `a` must be a live handle; `sequence` NUL-terminated; `out` valid.
 */
enum LsStatus ls_automaton_accepts(const struct LsAutomaton *a, const char *sequence, bool *out);

/**
 * Earley recognition of a whitespace-separated symbol sequence.
 *
 * # Safety
 * `g` must be a live handle; `sequence` NUL-terminated; `out` valid.
 */
enum LsStatus ls_grammar_accepts(const struct LsGrammar *g, const char *sequence, bool *out);

/**
 * Compiles the Regular constraint (or its soft/cyclic variant) over the
 * domains to DIMACS CNF text.
 *
 * # Safety
 * `a` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_compile_regular(const struct LsAutomaton *a,
                                 const struct LsDomains *d,
                                 int soft,
                                 size_t budget,
                                 bool cyclic,
                                 char **out);

/**
 * Compiles the Grammar constraint over the domains to DIMACS CNF text.
 *
 * # Safety
 * `g` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_compile_grammar(const struct LsGrammar *g, const struct LsDomains *d, char **out);

/**
 * Emits the network-flow MIP model of the Regular constraint as LP text.
 *
 * # Safety
 * `a` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_emit_regular_lp(const struct LsAutomaton *a,
                                 const struct LsDomains *d,
                                 char **out);

/**
 * Emits the AND/OR MIP model of the Grammar constraint as LP text.
 *
 * # Safety
 * `g` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_emit_grammar_lp(const struct LsGrammar *g, const struct LsDomains *d, char **out);

/**
 * Prunes the domains to generalized arc consistency against the Regular
 * constraint; the result is a fresh handle.
 *
 * # Safety
 * `a` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_propagate_regular(const struct LsAutomaton *a,
                                   const struct LsDomains *d,
                                   struct LsDomains **out);

/**
 * Prunes the domains to generalized arc consistency against the Grammar
 * constraint; the result is a fresh handle.
 *
 * # Safety
 * `g` and `d` must be live handles; `out` must be valid.
 */
enum LsStatus ls_propagate_grammar(const struct LsGrammar *g,
                                   const struct LsDomains *d,
                                   struct LsDomains **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LANGSAT_H */
