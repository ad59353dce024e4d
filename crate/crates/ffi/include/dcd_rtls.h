#ifndef DCD_RTLS_H
#define DCD_RTLS_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum {
  DCD_RTLS_STATUS_OK = 0,
  DCD_RTLS_STATUS_NULL_POINTER = 1,
  DCD_RTLS_STATUS_INVALID_ARGUMENT = 2,
  DCD_RTLS_STATUS_CONFIG = 3,
  DCD_RTLS_STATUS_DEGENERATE_DENOMINATOR = 4,
  DCD_RTLS_STATUS_INVALID_MODEL = 5,
  DCD_RTLS_STATUS_NUMERICAL = 6,
  DCD_RTLS_STATUS_PANIC = 7,
} DcdRtlsStatus;

// Algorithms covered by the operation-count model.
typedef enum {
  DCD_RTLS_ALGO_DCD_RTLS = 0,
  DCD_RTLS_ALGO_AIP = 1,
  DCD_RTLS_ALGO_X_RTLS = 2,
  DCD_RTLS_ALGO_K_RTLS = 3,
} DcdRtlsAlgo;

// Opaque filter handle.
typedef struct DcdRtlsFilter DcdRtlsFilter;

// Filter settings. `lambda = 1 − 2^-p_exponent`.
typedef struct {
  size_t order;
  uint32_t p_exponent;
  double gamma;
  double delta;
  bool structured;
  size_t dcd_n;
  uint32_t dcd_m;
  double dcd_h;
} DcdRtlsConfig;

// Arithmetic operations per iteration.
typedef struct {
  uint64_t mul;
  uint64_t add;
  uint64_t div;
  uint64_t sqrt;
} DcdRtlsOpCounts;

// Closed-form predictions for a model given by a row-major `l × l` input
// covariance `r`, system `h`, noise variances and forgetting factor.
typedef struct {
  double steady_state_msd;
  double noise_drive;
  double mean_convergence_rate;
  double s_bar_spectral_radius;
  double lambda_bound;
  double lambda_exact;
} DcdRtlsTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. The pointer stays valid until
// the next failing call on the same thread.
const char *dcd_rtls_last_error(void);

// Eight taps, `λ = 1 − 2⁻¹⁰`, `γ = 1`, `δ = 10⁻²`, unstructured input, `N = 1`,
// `M = 16`, `H = 1`.
DcdRtlsConfig dcd_rtls_config_default(void);

// Creates a filter; on success `*out` owns it and must be released with
// [`dcd_rtls_filter_free`].
//
// # Safety
// `config` must point to a valid config and `out` to writable storage.
DcdRtlsStatus dcd_rtls_filter_new(const DcdRtlsConfig *config, DcdRtlsFilter **out);

// Releases a filter. Null is ignored.
//
// # Safety
// `filter` must come from [`dcd_rtls_filter_new`] and not be used afterwards.
void dcd_rtls_filter_free(DcdRtlsFilter *filter);

// Filter length, or 0 for a null handle.
//
// # Safety
// `filter` must be null or a live handle.
size_t dcd_rtls_filter_order(const DcdRtlsFilter *filter);

// Processes one regressor `x[0..len]` and output sample `y`.
//
// After a failure other than a length mismatch the filter state is
// unspecified and the handle should be recreated.
//
// # Safety
// `filter` must be a live handle and `x` must point to `len` doubles.
DcdRtlsStatus dcd_rtls_filter_step(DcdRtlsFilter *filter, const double *x, size_t len, double y);

// Copies the current weights into `out[0..len]`; `len` must equal the order.
//
// # Safety
// `filter` must be a live handle and `out` must have room for `len` doubles.
DcdRtlsStatus dcd_rtls_filter_weights(const DcdRtlsFilter *filter, double *out, size_t len);

// Operations spent by the most recent step.
//
// # Safety
// `filter` must be a live handle and `out` writable.
DcdRtlsStatus dcd_rtls_filter_last_counts(const DcdRtlsFilter *filter, DcdRtlsOpCounts *out);

// Predicted operations per iteration for order `l`, `n` DCD updates and an
// `m`-bit step ladder.
//
// # Safety
// `out` must be writable.
DcdRtlsStatus dcd_rtls_predicted_ops(DcdRtlsAlgo algo,
                                     uint64_t l,
                                     uint64_t n,
                                     uint64_t m,
                                     bool structured,
                                     DcdRtlsOpCounts *out);

// `1 − 2/(tr{R⁻¹}ζ_max + (1 − η/ζ_min)² + 1)`.
double dcd_rtls_stability_lambda_bound(double trace_r_inv,
                                       double zeta_max,
                                       double zeta_min,
                                       double eta);

// Evaluates every closed-form prediction for one model.
//
// # Safety
// `r` must point to `l * l` doubles, `h` to `l` doubles and `out` must be
// writable.
DcdRtlsStatus dcd_rtls_theory(const double *r,
                              const double *h,
                              size_t l,
                              double eta,
                              double xi,
                              double lambda,
                              DcdRtlsTheory *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DCD_RTLS_H */
