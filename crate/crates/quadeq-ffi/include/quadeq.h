#ifndef QUADEQ_H
#define QUADEQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QuadeqBasis {
  QUADEQ_BASIS_ADAPTED = 0,
  QUADEQ_BASIS_CLASSIC = 1,
} QuadeqBasis;

typedef enum QuadeqStatus {
  QUADEQ_STATUS_OK = 0,
  QUADEQ_STATUS_NULL_POINTER = 1,
  QUADEQ_STATUS_INVALID_UTF8 = 2,
  QUADEQ_STATUS_SYNTAX = 3,
  QUADEQ_STATUS_INVALID_ARGUMENT = 4,
  QUADEQ_STATUS_MISMATCH = 5,
  QUADEQ_STATUS_COMPUTATION = 6,
  QUADEQ_STATUS_PANIC = 7,
} QuadeqStatus;

typedef enum QuadeqVerdict {
  QUADEQ_VERDICT_EXISTS = 0,
  QUADEQ_VERDICT_NOT_EXISTS = 1,
  QUADEQ_VERDICT_UNDETERMINED = 2,
} QuadeqVerdict;

// The parameters `(δ, ε, ϑ)`, the solution class and the frame.
typedef struct QuadeqSpec QuadeqSpec;

// A reduced word in a fixed basis.
typedef struct QuadeqWord QuadeqWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next call on this thread.
const char *quadeq_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or was returned by this library and not yet freed.
void quadeq_string_free(char *s);

// Parses `text` as a word of the given basis over the group of sign `epsilon` (±1).
//
// # Safety
// `text` is a NUL-terminated string; `out_word` is writable.
enum QuadeqStatus quadeq_word_parse(const char *text,
                                    int32_t epsilon,
                                    enum QuadeqBasis basis,
                                    struct QuadeqWord **out_word);

// # Safety
// `word` is null or a live handle from [`quadeq_word_parse`].
void quadeq_word_free(struct QuadeqWord *word);

// The display form of `word`.
//
// # Safety
// `word` is a live handle; `out_text` is writable.
enum QuadeqStatus quadeq_word_to_string(const struct QuadeqWord *word, char **out_text);

// The canonical form `ᾱ^r β̄^s` of the image of `word` in π.
//
// # Safety
// `word` is a live handle; `out_r` and `out_s` are writable.
enum QuadeqStatus quadeq_word_project(const struct QuadeqWord *word,
                                      int64_t *out_r,
                                      int64_t *out_s);

// The image of a word of the normal closure of R in Z[π], as text.
//
// # Safety
// `word` is a live handle; `out_text` is writable.
enum QuadeqStatus quadeq_qn(const struct QuadeqWord *word, char **out_text);

// Creates equation parameters; signs are ±1, `basis` selects the frame.
//
// # Safety
// `out_spec` is writable.
enum QuadeqStatus quadeq_spec_new(int32_t delta,
                                  int32_t epsilon,
                                  int32_t theta,
                                  bool faithful,
                                  enum QuadeqBasis basis,
                                  struct QuadeqSpec **out_spec);

// # Safety
// `spec` is null or a live handle from [`quadeq_spec_new`].
void quadeq_spec_free(struct QuadeqSpec *spec);

// Substitutes `(first, second)` into the equation with parameter `v`.
//
// # Safety
// All handles are live; the output pointers are writable.
enum QuadeqStatus quadeq_verify_solution(const struct QuadeqSpec *spec,
                                         const struct QuadeqWord *v,
                                         const struct QuadeqWord *first,
                                         const struct QuadeqWord *second,
                                         bool *out_holds,
                                         bool *out_faithful);

// Classifies the equation with parameter `v`. `wicks_len` bounds the
// Wicks search (0 selects the default). The JSON line of the command-line
// tool is written to `out_json` when it is not null.
//
// # Safety
// Handles are live; `out_verdict` is writable; `out_json` is null or writable.
enum QuadeqStatus quadeq_classify(const struct QuadeqSpec *spec,
                                  const struct QuadeqWord *v,
                                  uint32_t wicks_len,
                                  enum QuadeqVerdict *out_verdict,
                                  char **out_json);

// Runs every table fixture; `out_failures` receives the failure count.
//
// # Safety
// The output pointers are writable.
enum QuadeqStatus quadeq_verify_tables(uint64_t *out_checked, uint64_t *out_failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADEQ_H */
