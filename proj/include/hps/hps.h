/* hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the solver library.  All entry points return an hps_status;
 * on failure hps_last_error() describes the problem.  Handles are opaque and
 * must be released with their destroy function.
 */
#ifndef HPS_HPS_H
#define HPS_HPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HPS_API __declspec(dllexport)
#else
#define HPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hps_status {
  HPS_OK = 0,
  HPS_ERROR_INVALID_ARGUMENT = 1,
  HPS_ERROR_NO_CONVERGENCE = 2,
  HPS_ERROR_IO = 3,
  HPS_ERROR_INTERNAL = 4
} hps_status;

typedef enum hps_problem { HPS_PROBLEM_BUMP = 0, HPS_PROBLEM_PLANEWAVE = 1 } hps_problem;

typedef enum hps_mode {
  HPS_MODE_DIRECT = 0,
  HPS_MODE_MG = 1,
  HPS_MODE_UNPRECONDITIONED = 2,
  HPS_MODE_EXACT_COARSE = 3
} hps_mode;

typedef struct hps_options {
  int problem;        /* hps_problem */
  int elements;       /* elements per side, power of two >= 2 */
  int degree;         /* polynomial degree >= 2 */
  double ppw;         /* points per wavelength; 0 = unset */
  double kappa;       /* wavenumber; 0 = unset; exactly one of ppw/kappa */
  int mode;           /* hps_mode */
  int levels;         /* hierarchy depth; 0 = full */
  int gamma;          /* coarse calls per level (mg mode) */
  int coarse_iters;   /* coarse GMRES iterations (mg mode) */
  double tol;         /* relative residual target */
  int restart;        /* GMRES restart length */
  int max_iters;      /* outer iteration cap */
} hps_options;

/* Fills the desk-scale defaults (bump problem, n=16, N=8, ppw=9.6, mg mode,
 * tol=1e-8, restart=60). */
HPS_API void hps_options_init(hps_options* options);

typedef struct hps_run hps_run;

/* Validates the options and creates a run handle. */
HPS_API hps_status hps_run_create(const hps_options* options, hps_run** out);
HPS_API void hps_run_destroy(hps_run* run);

/* Builds and solves.  Returns HPS_ERROR_NO_CONVERGENCE when the iteration
 * cap was hit; results remain queryable. */
HPS_API hps_status hps_run_execute(hps_run* run);

/* Result queries; valid after hps_run_execute. */
HPS_API int hps_run_converged(const hps_run* run);
HPS_API int hps_run_iterations(const hps_run* run);
HPS_API double hps_run_final_residual(const hps_run* run);
HPS_API double hps_run_build_seconds(const hps_run* run);
HPS_API double hps_run_solve_seconds(const hps_run* run);
HPS_API uint64_t hps_run_precond_bytes(const hps_run* run);
/* Relative errors against the exact solution; negative when not available. */
HPS_API double hps_run_l2_error(const hps_run* run);
HPS_API double hps_run_linf_error(const hps_run* run);

/* Writes the run report; format chosen by extension (.json or .csv). */
HPS_API hps_status hps_run_write_report(const hps_run* run, const char* path);

/* Writes the solution field; format chosen by extension (.csv or .bin). */
HPS_API hps_status hps_run_dump_field(hps_run* run, const char* path);

/* Runs the depth x gamma x coarse-iterations sweep and writes the table to
 * `path` (.json or .csv).  *all_converged (optional) is set to 1 when every
 * cell converged. */
HPS_API hps_status hps_sweep_run(const hps_options* base, const int* levels,
                                 size_t num_levels, const int* gammas,
                                 size_t num_gammas, const int* coarse_iters,
                                 size_t num_coarse_iters, const char* path,
                                 int* all_converged);

/* Message for the most recent failure on this thread. */
HPS_API const char* hps_last_error(void);

HPS_API const char* hps_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HPS_HPS_H */
