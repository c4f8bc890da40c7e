#ifndef COXETER_CHEIN_H
#define COXETER_CHEIN_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_UTF8 = 2,
  CC_STATUS_PARSE_ERROR = 3,
  /**
   * The input parsed but does not suit the operation.
   */
  CC_STATUS_WRONG_INPUT = 4,
  /**
   * Enumeration cap or search budget exceeded, or an infinite group.
   */
  CC_STATUS_RESOURCE_LIMIT = 5,
  CC_STATUS_OUT_OF_RANGE = 6,
  CC_STATUS_PANIC = 7,
} CcStatus;

/**
 * A validated Coxeter diagram.
 */
typedef struct CcDiagram CcDiagram;

/**
 * A finite group given by its multiplication table.
 */
typedef struct CcGroup CcGroup;

/**
 * A finite loop given by its multiplication table.
 */
typedef struct CcLoop CcLoop;

/**
 * Dimensions of the cochain, cocycle, coboundary and cohomology spaces.
 */
typedef struct {
  uintptr_t c0;
  uintptr_t c1;
  uintptr_t c2;
  uintptr_t z1;
  uintptr_t b1;
  uintptr_t h1;
} CcCohomologyDims;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. Valid until the next library call on the same thread.
 */
const char *cc_last_error(void);

/**
 * Parses a `coxeter v1` document.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` a valid pointer.
 */
CcStatus cc_diagram_from_text(const char *text_ptr, CcDiagram **out);

/**
 * # Safety
 * `d` must be null or a handle from this library, not yet freed.
 */
void cc_diagram_free(CcDiagram *d);

/**
 * Number of Coxeter generators, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
uintptr_t cc_diagram_rank(const CcDiagram *d);

/**
 * Cohomology dimensions of the diagram's underlying graph.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_diagram_cohomology(const CcDiagram *d, CcCohomologyDims *out);

/**
 * Enumerates the Coxeter group of `d`, failing with
 * [`CcStatus::ResourceLimit`] above `cap` elements.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_group_enumerate(const CcDiagram *d, uintptr_t cap, CcGroup **out);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
void cc_group_free(CcGroup *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
uintptr_t cc_group_order(const CcGroup *g);

/**
 * Builds the Chein loop `M(G,2)`: elements `0..|G|` are `G`, element
 * `|G| + g` is `g·u`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_loop_chein(const CcGroup *g, CcLoop **out);

/**
 * Parses a `table v1` document as a loop with identity 0.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` a valid pointer.
 */
CcStatus cc_loop_from_text(const char *text_ptr, CcLoop **out);

/**
 * # Safety
 * `l` must be null or a live handle.
 */
void cc_loop_free(CcLoop *l);

/**
 * # Safety
 * `l` must be null or a live handle.
 */
uintptr_t cc_loop_order(const CcLoop *l);

/**
 * `x·y`.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_loop_product(const CcLoop *l, uintptr_t x, uintptr_t y, uintptr_t *out);

/**
 * Whether all three Moufang identities hold.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_loop_is_moufang(const CcLoop *l, bool *out);

/**
 * `|Aut(L)|` by exhaustive search limited to `budget` nodes.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
CcStatus cc_loop_aut_order(const CcLoop *l, uint64_t budget, uintptr_t *out);

/**
 * Runs a CLI command (`"parse"`, `"group"`, `"loop"`, `"aut"`,
 * `"cohomology"`, `"amalgams"`, `"verify"`) and returns its JSON report.
 * `input` may be null only for `"verify"`. `cap` and `budget` of 0 select
 * the defaults. `exit_code` receives the CLI exit code of the report (0 or
 * 2). The string must be released with [`cc_string_free`].
 *
 * # Safety
 * String arguments must be nul-terminated; `out_json` and `exit_code`
 * must be valid pointers.
 */
CcStatus cc_run_json(const char *command,
                     const char *input,
                     uintptr_t cap,
                     uint64_t budget,
                     char **out_json,
                     int32_t *exit_code);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library, not yet freed.
 */
void cc_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* COXETER_CHEIN_H */
