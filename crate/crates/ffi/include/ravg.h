#ifndef RAVG_H
#define RAVG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RavgStatus {
  RAVG_STATUS_OK = 0,
  RAVG_STATUS_NULL_POINTER = 1,
  RAVG_STATUS_INVALID_ARGUMENT = 2,
  RAVG_STATUS_INADMISSIBLE = 3,
  RAVG_STATUS_BOUNDARY_NOT_VANISHING = 4,
  RAVG_STATUS_COST_GUARD = 5,
  RAVG_STATUS_GRID_TOO_SMALL = 6,
  RAVG_STATUS_IO = 7,
  RAVG_STATUS_FORMAT = 8,
  RAVG_STATUS_CONFIG = 9,
  RAVG_STATUS_PANIC = 10,
} RavgStatus;

/**
 * Opaque source field.
 */
typedef struct RavgField RavgField;

/**
 * Opaque sampled momentum average.
 */
typedef struct RavgGrid RavgGrid;

typedef struct RavgConstants {
  double c1;
  double c2;
  double c3;
  double c4;
  double c5;
  double c6;
  double c_r;
} RavgConstants;

/**
 * Tensor bump `A φ(t) φ(x) φ(p)` with the given centers and radii.
 */
typedef struct RavgBump {
  double t_center;
  double t_halfwidth;
  double x_center[3];
  double x_radius;
  double p_center[3];
  double p_radius;
  double amplitude;
} RavgBump;

typedef struct RavgGridSpec {
  size_t nt;
  size_t nx;
  size_t time_order;
  size_t time_panels;
  size_t ball_radial;
  size_t ball_polar;
  size_t ball_azimuthal;
} RavgGridSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message (NUL-terminated, truncated to `len - 1`
 * bytes) into `buf` and returns the full message length.
 */
size_t ravg_last_error(char *buf, size_t len);

/**
 * NUL-terminated crate version; static storage.
 */
const char *ravg_version(void);

/**
 * Constants for horizon `t`, momentum radius `r` and exponent `q ∈ (1, ∞)`.
 */
enum RavgStatus ravg_constants(double t, double r, double q, struct RavgConstants *result);

enum RavgStatus ravg_c_r(double r, double *result);

/**
 * Monte-Carlo measure of `{p ∈ B_R : |e' + e·p/p₀| < ε}` with `n ≥ 10⁴` points.
 */
enum RavgStatus ravg_measure_slice(double e_prime,
                                   const double *e,
                                   double epsilon,
                                   double radius,
                                   size_t n,
                                   uint64_t seed,
                                   double *value,
                                   double *std_error);

/**
 * `∫ g^{-2} dp` over `{p ∈ B_R : |g| > ε}`, `g = e' + e·p/p₀`, by the
 * reduced nested quadrature.
 */
enum RavgStatus ravg_weighted_slice_integral(double e_prime,
                                             const double *e,
                                             double epsilon,
                                             double radius,
                                             double *value);

/**
 * Tensor bump inside the domain `[ε₀, T-ε₀] × [-a, a]³ × B_R`.
 */
enum RavgStatus ravg_field_bump(double horizon,
                                double eps0,
                                double half_extent,
                                double radius,
                                const struct RavgBump *params,
                                struct RavgField **result);

/**
 * Source `∂ₜb + v·∇ₓb` of the transported bump with drift `κ ∈ [0, 1]`; its
 * solution vanishes outside the bump time window.
 */
enum RavgStatus ravg_field_transport_source(double horizon,
                                            double eps0,
                                            double half_extent,
                                            double radius,
                                            const struct RavgBump *params,
                                            double drift,
                                            struct RavgField **result);

enum RavgStatus ravg_field_eval(const struct RavgField *field,
                                double t,
                                const double *x,
                                const double *p,
                                double *value);

void ravg_field_free(struct RavgField *field);

/**
 * Samples `ũ` for the (damped when `damped != 0`) solution with source `field`.
 */
enum RavgStatus ravg_grid_materialize(const struct RavgField *field,
                                      const struct RavgGridSpec *spec,
                                      int32_t damped,
                                      struct RavgGrid **result);

/**
 * Node counts `(t, x₁, x₂, x₃)`.
 */
enum RavgStatus ravg_grid_dims(const struct RavgGrid *grid, size_t *dims);

/**
 * Copies the row-major values into `buf`, which must hold `len ≥` the node count.
 */
enum RavgStatus ravg_grid_values(const struct RavgGrid *grid, double *buf, size_t len);

/**
 * `‖ũ‖_q`; pass `INFINITY` for the maximum.
 */
enum RavgStatus ravg_grid_lq_norm(const struct RavgGrid *grid, double q, double *value);

/**
 * Fourier `Hˢ` norm with zero-padding factor `padding`.
 */
enum RavgStatus ravg_grid_hs_norm(const struct RavgGrid *grid,
                                  double s,
                                  size_t padding,
                                  double *value);

enum RavgStatus ravg_grid_write(const struct RavgGrid *grid, const char *path);

enum RavgStatus ravg_grid_read(const char *path, struct RavgGrid **result);

void ravg_grid_free(struct RavgGrid *grid);

/**
 * Runs the suite described by the TOML file at `config` and writes its
 * bundle; `all_pass` receives 1 when every check passed.
 */
enum RavgStatus ravg_run_config(const char *config, int32_t *all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAVG_H */
