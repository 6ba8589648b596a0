#ifndef PERCITE_H
#define PERCITE_H

/* Generated by the percite-ffi build script; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PerciteStatus {
  PERCITE_STATUS_OK = 0,
  // A required pointer argument was NULL.
  PERCITE_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  PERCITE_STATUS_INVALID_UTF8 = 2,
  // Input text could not be parsed (corpus, scheme JSON).
  PERCITE_STATUS_PARSE_ERROR = 3,
  // Parsed but violated a precondition (unknown key, bad value).
  PERCITE_STATUS_INVALID_INPUT = 4,
  // The requested statistic is undefined for these inputs.
  PERCITE_STATUS_UNDEFINED = 5,
  // Failure inside the library, not attributable to the inputs.
  PERCITE_STATUS_INTERNAL_ERROR = 6,
} PerciteStatus;

// Opaque corpus handle. Created by percite_corpus_parse(), released by
// percite_corpus_free().
typedef struct PerciteCorpus PerciteCorpus;

// Opaque percentile-scheme handle. Created by percite_scheme_builtin()
// or percite_scheme_from_json(), released by percite_scheme_free().
typedef struct PerciteScheme PerciteScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the thread-local message for the most recent failure on this
// thread, or an empty string when nothing has failed yet.
//
// The pointer stays valid until the next failing call on the same
// thread; do not free it.
//
// # Safety
// Always safe to call.
const char *percite_last_error_message(void);

// Parses a corpus from `data` in the named `format` ("csv" or "jsonl")
// and stores a new handle in `*out`.
//
// # Safety
// `data` and `format` must be NUL-terminated strings; `out` must point
// to writable storage for one pointer.
enum PerciteStatus percite_corpus_parse(const char *data,
                                        const char *format,
                                        struct PerciteCorpus **out);

// Releases a corpus handle. NULL is a no-op.
//
// # Safety
// `corpus` must be a handle from percite_corpus_parse() that has not
// already been freed.
void percite_corpus_free(struct PerciteCorpus *corpus);

// Stores the number of papers in `*out`.
//
// # Safety
// `corpus` must be a live handle; `out` must point to writable storage.
enum PerciteStatus percite_corpus_paper_count(const struct PerciteCorpus *corpus, size_t *out);

// Stores a handle to the named builtin scheme ("quartiles", "nsb6" or
// "top10") in `*out`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must point to writable
// storage for one pointer.
enum PerciteStatus percite_scheme_builtin(const char *name, struct PerciteScheme **out);

// Parses a scheme from its JSON form
// `{"name": ..., "boundaries": [...], "weights": [...]}` and stores a
// handle in `*out`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must point to writable
// storage for one pointer.
enum PerciteStatus percite_scheme_from_json(const char *json, struct PerciteScheme **out);

// Releases a scheme handle. NULL is a no-op.
//
// # Safety
// `scheme` must be a handle from a scheme constructor that has not
// already been freed.
void percite_scheme_free(struct PerciteScheme *scheme);

// Stores in `*out` the percentile of `value` within the reference set
// named `refset_key`. `tie_rule` is "strictly_below", "below_or_equal"
// or "midpoint"; NULL means midpoint.
//
// # Safety
// `corpus` must be a live handle; `refset_key` must be a NUL-terminated
// string; `out` must point to writable storage.
enum PerciteStatus percite_percentile_of(const struct PerciteCorpus *corpus,
                                         const char *refset_key,
                                         double value,
                                         const char *tie_rule,
                                         double *out);

// Scores the whole corpus on integer counts and stores the class-weighted
// sum in `*out_classed` and the percentile sum in `*out_quantile`.
// `tie_rule` NULL means midpoint.
//
// # Safety
// `corpus` and `scheme` must be live handles; both out-pointers must
// point to writable storage.
enum PerciteStatus percite_i3(const struct PerciteCorpus *corpus,
                              const struct PerciteScheme *scheme,
                              const char *tie_rule,
                              double *out_classed,
                              double *out_quantile);

// Builds the per-unit report for `dimension` on integer counts and
// stores it as a JSON string in `*out`. `indicator` orders the rows
// ("i3_classed", "i3_quantile", "rcr", "mncs" or "exergy"; NULL means
// i3_quantile). `tie_rule` NULL means midpoint. Free the string with
// percite_string_free().
//
// # Safety
// `corpus` and `scheme` must be live handles; `dimension` must be a
// NUL-terminated string; `out` must point to writable storage for one
// pointer.
enum PerciteStatus percite_report_json(const struct PerciteCorpus *corpus,
                                       const struct PerciteScheme *scheme,
                                       const char *dimension,
                                       const char *indicator,
                                       const char *tie_rule,
                                       char **out);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must be a string returned by this library that has not already
// been freed.
void percite_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERCITE_H */
