#ifndef SEQCOMPOSE_H
#define SEQCOMPOSE_H

/* Generated by cbindgen from the seqcompose-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Failure codes mirror the library's error
 * classes; `SEQC_STATUS_NULL_ARGUMENT` and `SEQC_STATUS_INVALID_UTF8` are
 * raised at the boundary itself.
 */
typedef enum SeqcStatus {
  SEQC_STATUS_OK = 0,
  SEQC_STATUS_NULL_ARGUMENT = 1,
  SEQC_STATUS_INVALID_UTF8 = 2,
  SEQC_STATUS_PARSE = 3,
  SEQC_STATUS_CONFIG = 4,
  SEQC_STATUS_MINING = 5,
  SEQC_STATUS_EVAL = 6,
  SEQC_STATUS_IO = 7,
} SeqcStatus;

/**
 * A ranked list of mined association rules. Opaque.
 */
typedef struct SeqcRules SeqcRules;

/**
 * A loaded invocation log, grouped into sessions. Opaque.
 */
typedef struct SeqcSessions SeqcSessions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on the calling thread, or an empty
 * string. The pointer stays valid until the next failing call on the same
 * thread; do not free it.
 */
const char *seqc_last_error(void);

/**
 * Releases a string returned through an out-parameter.
 *
 * # Safety
 * `s` must be NULL or a pointer previously returned by this library through
 * a `char **` out-parameter, not yet freed.
 */
void seqc_string_free(char *s);

/**
 * Generates a synthetic dataset and writes `log.csv`, `catalog.json`,
 * `compositions.json` and `manifest.json` into `out_dir`. `config_json` is
 * a JSON object of generator settings; missing keys use the defaults, and
 * NULL means all defaults.
 *
 * # Safety
 * `config_json` must be NULL or a NUL-terminated string; `out_dir` must be
 * a NUL-terminated string.
 */
enum SeqcStatus seqc_generate_dataset(const char *config_json, const char *out_dir);

/**
 * Loads an invocation log CSV and groups it into sessions. On success,
 * stores a new handle in `*out`; release it with [`seqc_sessions_free`].
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SeqcStatus seqc_sessions_load_csv(const char *path, struct SeqcSessions **out);

/**
 * Number of sessions behind the handle; 0 for NULL.
 *
 * # Safety
 * `sessions` must be NULL or a live handle from [`seqc_sessions_load_csv`].
 */
size_t seqc_sessions_count(const struct SeqcSessions *sessions);

/**
 * Releases a sessions handle.
 *
 * # Safety
 * `sessions` must be NULL or a handle from [`seqc_sessions_load_csv`] that
 * has not been freed yet.
 */
void seqc_sessions_free(struct SeqcSessions *sessions);

/**
 * Mines the sessions into ranked association rules. `algorithm` is one of
 * `apriori`, `patterngrowth`, `closed` or `multilevel`; thresholds are
 * percentages. Baseline algorithms mine operation-level patterns directly;
 * `multilevel` runs the two-level pipeline. On success, stores a new handle
 * in `*out`; release it with [`seqc_rules_free`].
 *
 * # Safety
 * `sessions` must be a live handle, `algorithm` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum SeqcStatus seqc_mine(const struct SeqcSessions *sessions,
                          const char *algorithm,
                          double min_support_pct,
                          double min_confidence_pct,
                          struct SeqcRules **out);

/**
 * Number of rules behind the handle; 0 for NULL.
 *
 * # Safety
 * `rules` must be NULL or a live handle from [`seqc_mine`].
 */
size_t seqc_rules_count(const struct SeqcRules *rules);

/**
 * Serializes the rules to JSON lines (one rule object per line). On
 * success, stores a newly allocated string in `*out`; release it with
 * [`seqc_string_free`].
 *
 * # Safety
 * `rules` must be a live handle and `out` a valid pointer.
 */
enum SeqcStatus seqc_rules_to_jsonl(const struct SeqcRules *rules, char **out);

/**
 * Scores the rules against the ground-truth compositions file written by
 * [`seqc_generate_dataset`]: `*precision_out` becomes the percentage of
 * compositions reconstructed by some rule, `*noise_out` the ratio of
 * generated rules to expected associations.
 *
 * # Safety
 * `rules` must be a live handle, `compositions_path` a NUL-terminated
 * string, and both out-pointers valid.
 */
enum SeqcStatus seqc_eval_rules(const struct SeqcRules *rules,
                                const char *compositions_path,
                                double *precision_out,
                                double *noise_out);

/**
 * Releases a rules handle.
 *
 * # Safety
 * `rules` must be NULL or a handle from [`seqc_mine`] that has not been
 * freed yet.
 */
void seqc_rules_free(struct SeqcRules *rules);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQCOMPOSE_H */
