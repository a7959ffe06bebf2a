#ifndef UNBOX_H
#define UNBOX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum UnboxStatus {
  UNBOX_STATUS_OK = 0,
  UNBOX_STATUS_NULL_POINTER = 1,
  UNBOX_STATUS_INVALID_UTF8 = 2,
  UNBOX_STATUS_INVALID_ARGUMENT = 3,
  UNBOX_STATUS_LEXICON = 4,
  UNBOX_STATUS_PANIC = 5,
} UnboxStatus;

typedef enum UnboxLabel {
  UNBOX_LABEL_NEGATIVE = -1,
  UNBOX_LABEL_NEUTRAL = 0,
  UNBOX_LABEL_POSITIVE = 1,
} UnboxLabel;

/**
 * Opaque sentiment lexicon with the default rule constants.
 */
typedef struct UnboxLexicon UnboxLexicon;

typedef struct UnboxScores {
  double pos;
  double neu;
  double neg;
  double compound;
} UnboxScores;

/**
 * Per-class and macro metrics of a binary confusion matrix.
 */
typedef struct UnboxReport {
  double negative_precision;
  double negative_recall;
  double negative_f1;
  double positive_precision;
  double positive_recall;
  double positive_f1;
  double macro_precision;
  double macro_recall;
  double macro_f1;
  double accuracy;
} UnboxReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `unbox_*` call on the same thread.
 */
const char *unbox_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *unbox_version(void);

/**
 * New handle on the lexicon and emoji table shipped with the library.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum UnboxStatus unbox_lexicon_bundled(struct UnboxLexicon **out);

/**
 * Parse a lexicon from tab-separated bytes. The emoji table is optional
 * (pass NULL and 0).
 *
 * # Safety
 * Each buffer must be readable for its stated length; `out` must be valid.
 */
enum UnboxStatus unbox_lexicon_load(const uint8_t *lexicon,
                                    size_t lexicon_len,
                                    const uint8_t *emoji,
                                    size_t emoji_len,
                                    struct UnboxLexicon **out);

/**
 * Release a handle. NULL is ignored.
 *
 * # Safety
 * `handle` must come from this library and not be used afterwards.
 */
void unbox_lexicon_free(struct UnboxLexicon *handle);

/**
 * Number of lexicon entries; 0 for NULL.
 *
 * # Safety
 * `handle` must be NULL or a live handle.
 */
size_t unbox_lexicon_len(const struct UnboxLexicon *handle);

/**
 * Sentiment scores of a NUL-terminated UTF-8 text.
 *
 * # Safety
 * `handle` must be live, `text` NUL-terminated, `out` valid.
 */
enum UnboxStatus unbox_score(const struct UnboxLexicon *handle,
                             const char *text,
                             struct UnboxScores *out);

/**
 * Map a compound score to a label: `>= threshold` positive,
 * `<= -threshold` negative, otherwise neutral.
 *
 * # Safety
 * `out` must be valid.
 */
enum UnboxStatus unbox_label(double compound, double threshold, enum UnboxLabel *out);

/**
 * Metrics of the matrix with negative as class 0 and positive as class 1.
 *
 * # Safety
 * `out` must be valid.
 */
enum UnboxStatus unbox_report_from_confusion(uint64_t tn,
                                             uint64_t fp,
                                             uint64_t fn_,
                                             uint64_t tp,
                                             struct UnboxReport *out);

/**
 * Train and test partition sizes for `n` rows.
 *
 * # Safety
 * Both out-pointers must be valid.
 */
enum UnboxStatus unbox_split_sizes(size_t n,
                                   double train_fraction,
                                   size_t *out_train,
                                   size_t *out_test);

/**
 * Whether the cleaning stage would drop `text` as numeric-only.
 *
 * # Safety
 * `text` NUL-terminated, `out` valid.
 */
enum UnboxStatus unbox_is_numeric_only(const char *text, bool *out);

/**
 * Share of cased letters in `text` that are upper case.
 *
 * # Safety
 * `text` NUL-terminated, `out` valid.
 */
enum UnboxStatus unbox_caps_ratio(const char *text, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNBOX_H */
