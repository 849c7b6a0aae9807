#ifndef GSKETCH_H
#define GSKETCH_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_ARGUMENT = 2,
  GS_STATUS_ILLEGAL_STREAM = 3,
  GS_STATUS_PARSE = 4,
  GS_STATUS_IO = 5,
  GS_STATUS_INCOMPATIBLE_SKETCHES = 6,
  /**
   * The output buffer is too small; the required length was written.
   */
  GS_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * The graph is disconnected (MST oracle).
   */
  GS_STATUS_DISCONNECTED = 8,
  GS_STATUS_INTERNAL = 9,
} GsStatus;

typedef enum GsTester {
  GS_TESTER_CONNECTIVITY = 0,
  GS_TESTER_K_EDGE = 1,
  GS_TESTER_K_VERTEX = 2,
  GS_TESTER_CYCLE_FREE = 3,
  GS_TESTER_BIPARTITE = 4,
  GS_TESTER_EULER = 5,
} GsTester;

typedef enum GsDecision {
  GS_DECISION_ACCEPT = 0,
  GS_DECISION_REJECT = 1,
  GS_DECISION_FAIL = 2,
} GsDecision;

typedef enum GsDecodeKind {
  GS_DECODE_KIND_ZERO = 0,
  GS_DECODE_KIND_RECOVERED = 1,
  GS_DECODE_KIND_FAIL = 2,
} GsDecodeKind;

/**
 * Opaque AMS sketch.
 */
typedef struct GsAms GsAms;

/**
 * Opaque ℓ0 sampler.
 */
typedef struct GsL0 GsL0;

/**
 * Opaque sparse recovery sketch.
 */
typedef struct GsSparse GsSparse;

/**
 * Opaque edge-update stream.
 */
typedef struct GsStream GsStream;

/**
 * Estimator output. `value` is NaN when `aborted` is set.
 */
typedef struct GsEstimate {
  double value;
  bool aborted;
  size_t samples;
  size_t sketch_words;
  double p;
} GsEstimate;

/**
 * Tester parameters. `p <= 0` and `delta <= 0` select the defaults.
 */
typedef struct GsTesterConfig {
  double eps;
  uint32_t k;
  uint64_t seed;
  double p;
  double delta;
  /**
   * Use exact answers in place of sketches.
   */
  bool exact;
} GsTesterConfig;

typedef struct GsVerdict {
  enum GsDecision decision;
  size_t samples;
  size_t sketch_words;
  /**
   * Final edge count.
   */
  uint64_t lambda;
} GsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *gs_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gs_version(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gs_string_free(char *s);

/**
 * Creates an empty stream on `n` vertices with weights in `[1, max_weight]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GsStatus gs_stream_new(uint32_t n, uint32_t max_weight, struct GsStream **out);

/**
 * Reads a text or binary stream file.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be valid.
 */
enum GsStatus gs_stream_load(const char *path, struct GsStream **out);

/**
 * Writes the stream in the text format.
 *
 * # Safety
 * `stream` must come from this library; `path` must be NUL-terminated.
 */
enum GsStatus gs_stream_save(const struct GsStream *stream, const char *path);

/**
 * Appends an update: `delta = 1` inserts, `delta = -1` deletes. Legality is
 * checked when the stream is consumed.
 *
 * # Safety
 * `stream` must come from this library.
 */
enum GsStatus gs_stream_push(struct GsStream *stream,
                             uint32_t u,
                             uint32_t v,
                             uint32_t weight,
                             int8_t delta);

/**
 * Number of updates in the stream.
 *
 * # Safety
 * `stream` must come from this library or be NULL.
 */
size_t gs_stream_len(const struct GsStream *stream);

/**
 * Replays the stream and reports the final edge count.
 *
 * # Safety
 * `stream` and `edges` must be valid.
 */
enum GsStatus gs_stream_validate(const struct GsStream *stream, uint64_t *edges);

/**
 * # Safety
 * `stream` must come from this library or be NULL.
 */
void gs_stream_free(struct GsStream *stream);

/**
 * Number of components with at most `⌊1/eps⌋` vertices.
 *
 * # Safety
 * `stream` and `out` must be valid.
 */
enum GsStatus gs_estimate_scc(const struct GsStream *stream,
                              double eps,
                              uint32_t t,
                              uint64_t seed,
                              struct GsEstimate *out);

/**
 * Number of connected components within additive `eps·n`.
 *
 * # Safety
 * `stream` and `out` must be valid.
 */
enum GsStatus gs_estimate_cc(const struct GsStream *stream,
                             double eps,
                             uint32_t q,
                             uint64_t seed,
                             struct GsEstimate *out);

/**
 * Weight of a minimum spanning tree within a factor `1 ± eps`.
 *
 * # Safety
 * `stream` and `out` must be valid.
 */
enum GsStatus gs_estimate_mst(const struct GsStream *stream,
                              double eps,
                              uint32_t q,
                              uint64_t seed,
                              struct GsEstimate *out);

/**
 * Runs one tester. If `json` is non-NULL it receives the full verdict, witness
 * included, as a string to release with [`gs_string_free`].
 *
 * # Safety
 * `stream`, `cfg` and `out` must be valid; `json` may be NULL.
 */
enum GsStatus gs_test(const struct GsStream *stream,
                      enum GsTester which,
                      const struct GsTesterConfig *cfg,
                      struct GsVerdict *out,
                      char **json);

/**
 * Exact number of connected components.
 *
 * # Safety
 * `stream` and `out` must be valid.
 */
enum GsStatus gs_oracle_components(const struct GsStream *stream, size_t *out);

/**
 * Exact MST weight; `Disconnected` if there is no spanning tree.
 *
 * # Safety
 * `stream` and `out` must be valid.
 */
enum GsStatus gs_oracle_mst(const struct GsStream *stream, uint64_t *out);

/**
 * AMS sketch over `[0, dim)` with zero-test failure probability `delta`.
 *
 * # Safety
 * `out` must be valid.
 */
enum GsStatus gs_ams_new(uint64_t dim, double delta, uint64_t seed, struct GsAms **out);

/**
 * # Safety
 * `s` and `out` must be valid.
 */
enum GsStatus gs_ams_estimate_f2(const struct GsAms *s, double *out);

/**
 * # Safety
 * `s` and `out` must be valid.
 */
enum GsStatus gs_ams_is_zero(const struct GsAms *s, bool *out);

/**
 * ℓ0 sampler over `[0, dim)` with `reps` independent repetitions.
 *
 * # Safety
 * `out` must be valid.
 */
enum GsStatus gs_l0_new(uint64_t dim, uint32_t reps, uint64_t seed, struct GsL0 **out);

/**
 * Writes one nonzero coordinate and sets `found`, or clears `found`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum GsStatus gs_l0_sample(const struct GsL0 *s, bool *found, uint64_t *index, int64_t *value);

/**
 * Sparse recovery sketch for `k`-sparse vectors over `[0, dim)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum GsStatus gs_sparse_new(uint64_t dim,
                            uint32_t k,
                            double delta,
                            uint64_t seed,
                            struct GsSparse **out);

/**
 * Decodes into caller arrays of capacity `cap`. On `Recovered`, `len` holds the
 * support size; if it exceeds `cap` the call returns `BufferTooSmall`.
 *
 * # Safety
 * `indices` and `values` must hold `cap` entries (or be NULL with `cap = 0`).
 */
enum GsStatus gs_sparse_decode(const struct GsSparse *s,
                               enum GsDecodeKind *kind,
                               uint64_t *indices,
                               int64_t *values,
                               size_t cap,
                               size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSKETCH_H */
