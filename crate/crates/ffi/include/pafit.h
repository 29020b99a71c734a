#ifndef PAFIT_H
#define PAFIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PafitStatus {
  PAFIT_STATUS_OK = 0,
  PAFIT_STATUS_NULL_POINTER = 1,
  PAFIT_STATUS_INVALID_ARGUMENT = 2,
  PAFIT_STATUS_PARSE = 3,
  PAFIT_STATUS_UNKNOWN_ISOTOPOLOGUE = 4,
  PAFIT_STATUS_NUMERIC = 5,
  PAFIT_STATUS_IDENTIFIABILITY = 6,
  PAFIT_STATUS_CALIBRATION = 7,
  PAFIT_STATUS_IO = 8,
  PAFIT_STATUS_PANIC = 9,
} PafitStatus;

/**
 * A parsed line list together with its isotopologue table.
 */
typedef struct PafitDataset PafitDataset;

/**
 * Result of a fit, with the problem it was fitted to.
 */
typedef struct PafitFit PafitFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or NULL.
 * The pointer stays valid until the next call into this library.
 */
const char *pafit_last_error_message(void);

/**
 * Reduced mass (amu) of two atomic masses (amu).
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_reduced_mass(double mass_a, double mass_b, double *out);

/**
 * Fixed-rotor radius (a0) from a rotational constant (cm-1) and reduced mass (amu).
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_radius_from_b(double b_rot_cm1, double mu_amu, double *out);

/**
 * Rotational constant (cm-1) of a fixed rotor of radius `r_a0`.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_b_from_radius(double r_a0, double mu_amu, double *out);

/**
 * Centrifugal barrier of a pure-C6 potential: position (a0) and height (µK).
 *
 * # Safety
 * `r_barrier_a0` and `height_uk` must be NULL or valid for writes.
 */
enum PafitStatus pafit_centrifugal_barrier(double c6,
                                           double mu_amu,
                                           uint32_t l,
                                           double *r_barrier_a0,
                                           double *height_uk);

/**
 * Near-dissociation vibrational count at binding energy `e_cm1` (< 0).
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_quantum_defect(double c6,
                                      double c8,
                                      double mu_amu,
                                      double e_cm1,
                                      double *out);

/**
 * Energy (cm-1) of the level holding `count` quanta below dissociation.
 *
 * # Safety
 * `out_cm1` must be NULL or valid for writes.
 */
enum PafitStatus pafit_level_energy(double c6,
                                    double c8,
                                    double mu_amu,
                                    double count,
                                    double *out_cm1);

/**
 * Parse a line list and an isotopologue table from CSV text.
 *
 * # Safety
 * The strings must be NULL or NUL-terminated; `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_dataset_from_csv(const char *lines_csv,
                                        const char *isotopologues_csv,
                                        struct PafitDataset **out);

/**
 * The bundled reference line list.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum PafitStatus pafit_dataset_bundled(struct PafitDataset **out);

/**
 * Number of rows (observed or not) in the dataset.
 *
 * # Safety
 * `ds` must be NULL or a live dataset handle; `out` NULL or valid for writes.
 */
enum PafitStatus pafit_dataset_len(const struct PafitDataset *ds, size_t *out);

/**
 * # Safety
 * `ds` must be NULL or a handle from this library that has not been freed.
 */
void pafit_dataset_free(struct PafitDataset *ds);

/**
 * Fit the observed F'=2 lines of a dataset.
 *
 * # Safety
 * `ds` must be NULL or a live dataset handle; `out` NULL or valid for writes.
 */
enum PafitStatus pafit_fit(const struct PafitDataset *ds, struct PafitFit **out);

/**
 * Fitted dispersion coefficients (a.u.), RMS residual (cm-1) and whether
 * the optimiser converged. Any output pointer may be NULL to skip it.
 *
 * # Safety
 * `fit` must be NULL or a live fit handle; outputs NULL or valid for writes.
 */
enum PafitStatus pafit_fit_summary(const struct PafitFit *fit,
                                   double *c6,
                                   double *c8,
                                   double *rms_cm1,
                                   bool *converged);

/**
 * Fitted `v_d` of one isotopologue.
 *
 * # Safety
 * `fit` must be NULL or a live fit handle; `id` NULL or NUL-terminated;
 * `out` NULL or valid for writes.
 */
enum PafitStatus pafit_fit_v_d(const struct PafitFit *fit, const char *id, double *out);

/**
 * The fit report as JSON. Release the string with [`pafit_string_free`].
 *
 * # Safety
 * `fit` must be NULL or a live fit handle; `out` NULL or valid for writes.
 */
enum PafitStatus pafit_fit_to_json(const struct PafitFit *fit, char **out);

/**
 * # Safety
 * `fit` must be NULL or a handle from this library that has not been freed.
 */
void pafit_fit_free(struct PafitFit *fit);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been freed.
 */
void pafit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAFIT_H */
