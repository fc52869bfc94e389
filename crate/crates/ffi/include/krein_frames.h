#ifndef KREIN_FRAMES_H
#define KREIN_FRAMES_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_ARGUMENT = 2,
  KF_STATUS_DIMENSION = 3,
  KF_STATUS_VALIDATION = 4,
  KF_STATUS_DEGENERATE_SUBSPACE = 5,
  KF_STATUS_MEMBER_CLASSIFICATION = 6,
  KF_STATUS_NOT_A_FRAME = 7,
  KF_STATUS_NUMERICAL = 8,
  KF_STATUS_SCHEMA = 9,
  KF_STATUS_PANIC = 10,
} KfStatus;

// Outcome of certifying a family.
typedef struct KfCertificate KfCertificate;

// A weighted family of subspaces being assembled.
typedef struct KfFamily KfFamily;

// A finite-dimensional Krein space.
typedef struct KfSpace KfSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library and valid until the next call on this thread.
const char *kf_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *kf_version(void);

// Creates a Krein space from an `n x n` fundamental symmetry.
//
// # Safety
// `j` must point to `2 * n * n` doubles and `out` must be writable.
enum KfStatus kf_space_new(const double *j, size_t n, struct KfSpace **out);

// Writes the signature `(p, q)` of the space.
//
// # Safety
// All pointers must be valid.
enum KfStatus kf_space_signature(const struct KfSpace *space, size_t *p, size_t *q);

// # Safety
// `space` must come from [`kf_space_new`] and not be freed twice.
void kf_space_free(struct KfSpace *space);

// Starts an empty family over `space`. The family keeps its own copy of
// the space.
//
// # Safety
// `space` must be valid and `out` writable.
enum KfStatus kf_family_new(const struct KfSpace *space, struct KfFamily **out);

// Adds the member spanned by the `cols` columns of an `n x cols` basis
// with the given weight. The member must be uniformly definite.
//
// # Safety
// `family` must be valid and `basis` must point to `2 * n * cols` doubles.
enum KfStatus kf_family_add(struct KfFamily *family,
                            const double *basis,
                            size_t cols,
                            double weight);

// Number of members added so far; 0 for a null handle.
//
// # Safety
// `family` must be valid or null.
size_t kf_family_len(const struct KfFamily *family);

// # Safety
// `family` must come from [`kf_family_new`] and not be freed twice.
void kf_family_free(struct KfFamily *family);

// Certifies the family. A family that is not a frame still yields a
// certificate; only malformed input fails.
//
// # Safety
// `family` must be valid and `out` writable.
enum KfStatus kf_family_certify(const struct KfFamily *family, struct KfCertificate **out);

// # Safety
// `cert` must be valid and `is_frame` writable.
enum KfStatus kf_certificate_is_frame(const struct KfCertificate *cert, bool *is_frame);

// Writes the optimal bounds `(B-, A-, A+, B+)`; `NotAFrame` if none.
//
// # Safety
// `cert` must be valid and `out` must have room for four doubles.
enum KfStatus kf_certificate_optimal_bounds(const struct KfCertificate *cert, double *out);

// Writes the estimate bounds `(B-e, A-e, A+e, B+e)`; `NotAFrame` if none.
//
// # Safety
// `cert` must be valid and `out` must have room for four doubles.
enum KfStatus kf_certificate_estimate_bounds(const struct KfCertificate *cert, double *out);

// # Safety
// `cert` must come from [`kf_family_certify`] and not be freed twice.
void kf_certificate_free(struct KfCertificate *cert);

// Runs a CLI command on a JSON problem specification and returns the JSON
// report in `out` (free it with [`kf_string_free`]). `passed` receives the
// overall verdict. A negative `seed` uses the specification's seed (or 0).
//
// # Safety
// `spec_json` and `command` must be NUL-terminated; `out` and `passed`
// must be writable.
enum KfStatus kf_run_json(const char *spec_json,
                          const char *command,
                          int64_t seed,
                          size_t samples,
                          char **out,
                          bool *passed);

// # Safety
// `s` must come from this library and not be freed twice.
void kf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KREIN_FRAMES_H */
