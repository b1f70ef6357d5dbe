// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hps/types.hpp"

namespace hps {

using LinOp = std::function<CVector(const CVector&)>;

struct KrylovConfig {
  int restart = 60;
  double tol = 1e-8;  // relative residual target
  int max_iters = 2000;
  bool record_history = true;
  bool reorthogonalize = false;  // one extra Gram-Schmidt pass per step
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // relative residuals per iteration
  bool converged = false;
  double final_residual = 0.0;
  double wall_build = 0.0;
  double wall_solve = 0.0;
  std::size_t precond_memory = 0;
  // Max deviation of the Arnoldi basis from orthonormality, tracked when
  // record_history is set.
  double basis_orthogonality = 0.0;
};

/// Restarted GMRES with modified Gram-Schmidt Arnoldi.  Convergence is
/// declared on the true residual ||rhs - op x|| / ||rhs||; if `right_precond`
/// is given it is applied as a fixed right preconditioner.
std::pair<CVector, SolveReport> gmres(const LinOp& op, const CVector& rhs,
                                      const KrylovConfig& config,
                                      const LinOp* right_precond = nullptr);

/// Flexible GMRES: the (possibly iteration-dependent) preconditioner's output
/// vectors are stored, so inexact inner solves are allowed.
std::pair<CVector, SolveReport> fgmres(const LinOp& op, const CVector& rhs,
                                       const LinOp& precond,
                                       const KrylovConfig& config);

/// Coarse-solver variant: exactly `steps` GMRES iterations from a zero guess,
/// no convergence test.
CVector gmres_fixed_steps(const LinOp& op, const CVector& rhs, int steps);

}  // namespace hps
