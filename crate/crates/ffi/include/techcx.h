#ifndef TECHCX_H
#define TECHCX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcxMeasure {
  TCX_MEASURE_HH_FINE = 0,
  TCX_MEASURE_HH_COARSE = 1,
  TCX_MEASURE_HH_EIGEN = 2,
  TCX_MEASURE_FS_MODULAR = 3,
  TCX_MEASURE_STRUCTURAL = 4,
} TcxMeasure;

typedef enum TcxStatus {
  TCX_STATUS_OK = 0,
  TCX_STATUS_NULL_POINTER = 1,
  TCX_STATUS_INVALID_ARGUMENT = 2,
  TCX_STATUS_IO = 3,
  /**
   * Malformed or unusable input data.
   */
  TCX_STATUS_DATA = 4,
  /**
   * The measure is undefined for this input (too small, degenerate).
   */
  TCX_STATUS_UNDEFINED = 5,
  TCX_STATUS_PANIC = 6,
} TcxStatus;

typedef struct TcxCorpus TcxCorpus;

typedef struct TcxGraph TcxGraph;

typedef struct TcxScores TcxScores;

/**
 * One score; the technology id is fetched with [`tcx_scores_technology`].
 */
typedef struct TcxScoreRow {
  int32_t year;
  enum TcxMeasure measure;
  double value;
  size_t n_patents;
} TcxScoreRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *tcx_last_error(void);

/**
 * Opens a corpus cache, or parses a CSV when the path ends in `.csv`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TcxStatus tcx_corpus_open(const char *path, struct TcxCorpus **out);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
size_t tcx_corpus_len(const struct TcxCorpus *c);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void tcx_corpus_free(struct TcxCorpus *c);

/**
 * Computes scores. `config_json` is a run configuration in JSON or null
 * for the defaults (all measures, every full window, seed 0).
 *
 * # Safety
 * `corpus` must be a live handle, `config_json` null or NUL-terminated,
 * and `out` a valid pointer.
 */
enum TcxStatus tcx_compute(const struct TcxCorpus *corpus,
                           const char *config_json,
                           struct TcxScores **out);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
size_t tcx_scores_len(const struct TcxScores *s);

/**
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum TcxStatus tcx_scores_get(const struct TcxScores *s, size_t i, struct TcxScoreRow *out);

/**
 * Technology id of row `i`, owned by the handle; null when out of range.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
const char *tcx_scores_technology(const struct TcxScores *s, size_t i);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void tcx_scores_free(struct TcxScores *s);

/**
 * Graph on nodes `0..n` from `m` edges stored as `2*m` endpoint indices.
 *
 * # Safety
 * `edges` must point to `2*m` values (or be null when `m` is 0) and `out`
 * must be valid.
 */
enum TcxStatus tcx_graph_from_edges(size_t n, const size_t *edges, size_t m, struct TcxGraph **out);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t tcx_graph_node_count(const struct TcxGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t tcx_graph_edge_count(const struct TcxGraph *g);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void tcx_graph_free(struct TcxGraph *g);

/**
 * Structural complexity with default sampling parameters. Either output
 * pointer may be null.
 *
 * # Safety
 * `g` must be a live handle; non-null outputs must be valid.
 */
enum TcxStatus tcx_structural_score(const struct TcxGraph *g,
                                    uint64_t seed,
                                    double *out_structural,
                                    double *out_nds);

/**
 * # Safety
 * `x` must point to `n` values and `out` must be valid.
 */
enum TcxStatus tcx_gini(const double *x, size_t n, double *out);

/**
 * # Safety
 * `x` and `y` must point to `n` values and `out` must be valid.
 */
enum TcxStatus tcx_spearman(const double *x, const double *y, size_t n, double *out);

/**
 * Method of reflection on a row-major `rows x cols` 0/1 matrix. Writes
 * z-standardized technology scores to `out` (length `cols`); columns
 * dropped for having no specialized region get NaN.
 *
 * # Safety
 * `cells` must point to `rows*cols` bytes and `out` to `cols` doubles.
 */
enum TcxStatus tcx_kci(const uint8_t *cells,
                       size_t rows,
                       size_t cols,
                       size_t iterations,
                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TECHCX_H */
