#ifndef PLLAB_H
#define PLLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum PllabStatus {
  PLLAB_STATUS_OK = 0,
  PLLAB_STATUS_NULL_POINTER = 1,
  PLLAB_STATUS_INVALID_UTF8 = 2,
  PLLAB_STATUS_SCHEMA = 3,
  PLLAB_STATUS_DIMENSION_MISMATCH = 4,
  PLLAB_STATUS_INVALID_PARAMETER = 5,
  PLLAB_STATUS_INTERNAL = 6,
} PllabStatus;

typedef struct PllabBracket PllabBracket;

typedef struct PllabElement PllabElement;

typedef struct PllabQuantization PllabQuantization;

typedef struct PllabBracketOptions {
  size_t budget;
  uint64_t seed;
  /*
   Nonzero selects the column-major pairing of `H_n ⊗ H_k`.
   */
  int32_t column_major;
  double tolerance;
} PllabBracketOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *pllab_last_error(void);

/*
 Releases a string returned by this library.
 */
void pllab_string_free(char *s);

/*
 Parses a quantization from its JSON descriptor.
 */
enum PllabStatus pllab_quantization_from_json(const char *json, struct PllabQuantization **out);

void pllab_quantization_free(struct PllabQuantization *q);

/*
 Dimension of the underlying space, or 0 for a null handle.
 */
size_t pllab_quantization_dim(const struct PllabQuantization *q);

/*
 Creates the element of `H_d(E)` with the given `d × m` coefficients.
 */
enum PllabStatus pllab_element_new(const double *re,
                                   const double *im,
                                   size_t d,
                                   size_t m,
                                   struct PllabElement **out);

void pllab_element_free(struct PllabElement *u);

/*
 Certified bracket `[lower, upper]` for the matrix norm of `u` in `q`.
 */
enum PllabStatus pllab_amp_norm(const struct PllabQuantization *q,
                                const struct PllabElement *u,
                                double *lower,
                                double *upper);

struct PllabBracketOptions pllab_bracket_options_default(void);

/*
 Bracket for the pl-norm of `u ∈ H_d(E ⊗ F)`. `opts` may be null for defaults.
 */
enum PllabStatus pllab_pl_bracket(const struct PllabQuantization *e,
                                  const struct PllabQuantization *f,
                                  const struct PllabElement *u,
                                  const struct PllabBracketOptions *opts,
                                  struct PllabBracket **out);

/*
 Bracket for the l-norm of `u ∈ H_d(E ⊗ F)`. `opts` may be null for defaults.
 */
enum PllabStatus pllab_l_bracket(const struct PllabQuantization *e,
                                 const struct PllabQuantization *f,
                                 const struct PllabElement *u,
                                 const struct PllabBracketOptions *opts,
                                 struct PllabBracket **out);

void pllab_bracket_free(struct PllabBracket *b);

/*
 Lower end of the bracket, NaN for a null handle.
 */
double pllab_bracket_lower(const struct PllabBracket *b);

/*
 Upper end of the bracket, NaN for a null handle.
 */
double pllab_bracket_upper(const struct PllabBracket *b);

/*
 1 when the bracket did not close within the tolerance, 0 when it did,
 -1 for a null handle.
 */
int32_t pllab_bracket_gap(const struct PllabBracket *b);

/*
 The bracket with both witnesses as JSON; free with [`pllab_string_free`].
 */
enum PllabStatus pllab_bracket_to_json(const struct PllabBracket *b, char **out);

/*
 Runs a CLI job and returns its JSON report and exit code (0 pass, 1
 violation, 2 gap). `input_json` may be null for the suites.
 */
enum PllabStatus pllab_run(const char *command,
                           const char *input_json,
                           size_t budget,
                           uint64_t seed,
                           size_t trials,
                           char **report,
                           int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLLAB_H */
