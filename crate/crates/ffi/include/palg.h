#ifndef PALG_H
#define PALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum PalgStatus {
  PALG_STATUS_OK = 0,
  PALG_STATUS_NULL_POINTER = 1,
  PALG_STATUS_INVALID_UTF8 = 2,
  PALG_STATUS_PARSE = 3,
  /**
   * The input is not a valid algebra, poset, graph or morphism.
   */
  PALG_STATUS_INVALID = 4,
  PALG_STATUS_CAP_EXCEEDED = 5,
  /**
   * An element index is out of range.
   */
  PALG_STATUS_OUT_OF_RANGE = 6,
  /**
   * The search found nothing (e.g. no embedding exists).
   */
  PALG_STATUS_NOT_FOUND = 7,
  /**
   * The operation does not apply, e.g. recovering a graph from an algebra
   * with several atoms, or a formula with free variables.
   */
  PALG_STATUS_UNSUPPORTED = 8,
  /**
   * Buffer too small.
   */
  PALG_STATUS_BUFFER_TOO_SMALL = 9,
  PALG_STATUS_PANIC = 10,
} PalgStatus;

/**
 * Opaque finite p-algebra.
 */
typedef struct PalgAlgebra PalgAlgebra;

/**
 * Opaque finite poset.
 */
typedef struct PalgPoset PalgPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *palg_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void palg_string_free(char *s);

/**
 * # Safety
 * `a` must be null or a live handle.
 */
void palg_algebra_free(struct PalgAlgebra *a);

/**
 * # Safety
 * `p` must be null or a live handle.
 */
void palg_poset_free(struct PalgPoset *p);

/**
 * The Boolean algebra with `i` atoms plus a new top.
 *
 * # Safety
 * `out` must be writable.
 */
enum PalgStatus palg_algebra_bnalg(size_t i, struct PalgAlgebra **out);

/**
 * The six-element algebra `0 < a < b, c < e < 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PalgStatus palg_algebra_n(struct PalgAlgebra **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PalgStatus palg_algebra_powerset(size_t n, struct PalgAlgebra **out);

/**
 * `a × b`. A `max_size` of zero uses the default cap.
 *
 * # Safety
 * `a` and `b` must be live handles, `out` writable.
 */
enum PalgStatus palg_algebra_product(const struct PalgAlgebra *a,
                                     const struct PalgAlgebra *b,
                                     size_t max_size,
                                     struct PalgAlgebra **out);

/**
 * Reads an algebra in the TOML file format.
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` writable.
 */
enum PalgStatus palg_algebra_parse(const char *text, struct PalgAlgebra **out);

/**
 * Writes the algebra in the TOML file format. Free the result with
 * `palg_string_free`.
 *
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_to_text(const struct PalgAlgebra *a, char **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t palg_algebra_size(const struct PalgAlgebra *a);

/**
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_meet(const struct PalgAlgebra *a, size_t x, size_t y, size_t *out);

/**
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_join(const struct PalgAlgebra *a, size_t x, size_t y, size_t *out);

/**
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_star(const struct PalgAlgebra *a, size_t x, size_t *out);

/**
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_leq(const struct PalgAlgebra *a, size_t x, size_t y, bool *out);

/**
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_is_boolean(const struct PalgAlgebra *a, bool *out);

/**
 * Subdirect irreducibility.
 *
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_is_si(const struct PalgAlgebra *a, bool *out);

/**
 * Poset of join-irreducible elements.
 *
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_algebra_dual(const struct PalgAlgebra *a, struct PalgPoset **out);

/**
 * Evaluates a sentence; the standard predicate library is available.
 *
 * # Safety
 * `a` must be a live handle, `formula` a NUL-terminated string, `out` writable.
 */
enum PalgStatus palg_eval(const struct PalgAlgebra *a, const char *formula, bool *out);

/**
 * The least embedding of `a` into `b`. `map` receives `size(a)` entries;
 * returns `NotFound` if there is none.
 *
 * # Safety
 * `a`, `b` must be live handles and `map` must hold `map_len` elements.
 */
enum PalgStatus palg_find_embedding(const struct PalgAlgebra *a,
                                    const struct PalgAlgebra *b,
                                    size_t *map,
                                    size_t map_len);

/**
 * Reads a poset in the TOML file format.
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` writable.
 */
enum PalgStatus palg_poset_parse(const char *text, struct PalgPoset **out);

/**
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PalgStatus palg_poset_to_text(const struct PalgPoset *p, char **out);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t palg_poset_size(const struct PalgPoset *p);

/**
 * The algebra of upsets. A `max_size` of zero uses the default cap.
 *
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PalgStatus palg_poset_upset_algebra(const struct PalgPoset *p,
                                         size_t max_size,
                                         struct PalgAlgebra **out);

/**
 * Encodes a graph written in the DOT subset as an algebra with one atom.
 *
 * # Safety
 * `dot` must be a NUL-terminated string, `out` writable.
 */
enum PalgStatus palg_encode_graph(const char *dot, size_t max_size, struct PalgAlgebra **out);

/**
 * Reads the graph off an algebra with exactly one atom, as DOT text.
 *
 * # Safety
 * `a` must be a live handle, `out` writable.
 */
enum PalgStatus palg_recover_graph(const struct PalgAlgebra *a, char **out);

/**
 * Runs a verification suite with default bounds. `passed` receives the
 * overall verdict and `report` (if not null) the report text.
 *
 * # Safety
 * `suite` must be a NUL-terminated string, `passed` writable, `report` null or writable.
 */
enum PalgStatus palg_check_suite(const char *suite, bool *passed, char **report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PALG_H */
