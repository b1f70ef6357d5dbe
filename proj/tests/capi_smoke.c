/* hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
 * SPDX-License-Identifier: Apache-2.0
 *
 * Verifies that the public header is valid C and the shared library links
 * and runs from a plain C client.
 */
#include <stdio.h>
#include <string.h>

#include "hps/hps.h"

int main(void) {
  hps_options opt;
  hps_options_init(&opt);
  opt.problem = HPS_PROBLEM_PLANEWAVE;
  opt.elements = 2;
  opt.degree = 6;
  opt.ppw = 0.0;
  opt.kappa = 8.0;
  opt.mode = HPS_MODE_DIRECT;

  hps_run* run = NULL;
  if (hps_run_create(&opt, &run) != HPS_OK) {
    fprintf(stderr, "create failed: %s\n", hps_last_error());
    return 1;
  }
  if (hps_run_execute(run) != HPS_OK) {
    fprintf(stderr, "execute failed: %s\n", hps_last_error());
    hps_run_destroy(run);
    return 1;
  }
  const double residual = hps_run_final_residual(run);
  const int converged = hps_run_converged(run);
  hps_run_destroy(run);

  if (!converged || residual > 1e-10) {
    fprintf(stderr, "unexpected result: converged=%d residual=%g\n", converged,
            residual);
    return 1;
  }
  if (strlen(hps_version()) == 0) return 1;
  printf("c client ok: residual=%g\n", residual);
  return 0;
}
