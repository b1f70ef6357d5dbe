// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace hps {

namespace {

struct Givens {
  double c = 1.0;
  Complex s{0.0, 0.0};
};

Givens make_givens(Complex a, Complex b) {
  Givens g;
  const double na = std::abs(a);
  const double nb = std::abs(b);
  if (nb == 0.0) return g;
  const double r = std::hypot(na, nb);
  if (na == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / nb;
  } else {
    g.c = na / r;
    g.s = (a / na) * std::conj(b) / r;
  }
  return g;
}

void apply_givens(const Givens& g, Complex& a, Complex& b) {
  const Complex t = g.c * a + g.s * b;
  b = -std::conj(g.s) * a + g.c * b;
  a = t;
}

enum class PrecondMode { kNone, kFixedRight, kFlexible };

// One driver for all three variants.  kFixedRight applies the preconditioner
// once to the Krylov combination at cycle end; kFlexible stores the
// preconditioned vectors.  fixed_steps > 0 runs exactly that many iterations
// with no convergence test (the coarse-solver mode).
std::pair<CVector, SolveReport> gmres_driver(const LinOp& op, const CVector& rhs,
                                             const KrylovConfig& config,
                                             PrecondMode mode,
                                             const LinOp* precond,
                                             int fixed_steps = 0) {
  if (config.restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
  if (fixed_steps == 0 && !(config.tol > 0.0 && config.tol < 1.0))
    throw std::invalid_argument("gmres: tol must lie in (0, 1)");

  const Eigen::Index n = rhs.size();
  SolveReport report;
  CVector x = CVector::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    return {x, report};
  }

  const int restart = fixed_steps > 0 ? fixed_steps : config.restart;
  const int max_iters = fixed_steps > 0 ? fixed_steps : config.max_iters;

  std::vector<CVector> V;   // Arnoldi basis
  std::vector<CVector> Z;   // preconditioned basis (flexible only)
  CMatrix H = CMatrix::Zero(restart + 1, restart);
  std::vector<Givens> rotations(restart);
  CVector gvec = CVector::Zero(restart + 1);

  int total_iters = 0;
  bool converged = false;
  while (total_iters < max_iters && !converged) {
    const CVector r0 = (total_iters == 0) ? rhs : (rhs - op(x)).eval();
    const double beta = r0.norm();
    if (fixed_steps == 0 && beta / bnorm <= config.tol) {
      converged = true;
      break;
    }
    V.assign(1, r0 / beta);
    Z.clear();
    gvec.setZero();
    gvec[0] = beta;

    int j = 0;
    bool breakdown = false;
    for (; j < restart && total_iters < max_iters; ++j, ++total_iters) {
      CVector w;
      if (mode == PrecondMode::kFlexible) {
        Z.push_back((*precond)(V[j]));
        w = op(Z.back());
      } else if (mode == PrecondMode::kFixedRight) {
        w = op((*precond)(V[j]));
      } else {
        w = op(V[j]);
      }
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[i].dot(w);  // conjugated inner product
        w.noalias() -= H(i, j) * V[i];
      }
      if (config.reorthogonalize) {
        for (int i = 0; i <= j; ++i) {
          const Complex correction = V[i].dot(w);
          H(i, j) += correction;
          w.noalias() -= correction * V[i];
        }
      }
      const double hnext = w.norm();
      H(j + 1, j) = hnext;

      for (int i = 0; i < j; ++i) apply_givens(rotations[i], H(i, j), H(i + 1, j));
      rotations[j] = make_givens(H(j, j), H(j + 1, j));
      apply_givens(rotations[j], H(j, j), H(j + 1, j));
      apply_givens(rotations[j], gvec[j], gvec[j + 1]);

      const double rel = std::abs(gvec[j + 1]) / bnorm;
      if (config.record_history) report.residual_history.push_back(rel);

      if (hnext <= 1e-14 * bnorm) {  // happy breakdown: solution is in span
        breakdown = true;
        ++j;
        ++total_iters;
        break;
      }
      V.push_back(w / hnext);
      if (fixed_steps == 0 && rel <= config.tol) {
        ++j;
        ++total_iters;
        break;
      }
    }

    // y = argmin ||beta e1 - H y||, then expand through the stored basis.
    if (j > 0) {
      CVector y = H.topLeftCorner(j, j)
                      .triangularView<Eigen::Upper>()
                      .solve(gvec.head(j));
      CVector update = CVector::Zero(n);
      if (mode == PrecondMode::kFlexible) {
        for (int i = 0; i < j; ++i) update.noalias() += y[i] * Z[i];
      } else {
        for (int i = 0; i < j; ++i) update.noalias() += y[i] * V[i];
        if (mode == PrecondMode::kFixedRight) update = (*precond)(update);
      }
      x += update;
    }

    if (config.record_history) {
      // Deviation over the vectors the solution update actually used; the
      // trailing vector of a finished cycle is discarded either way.
      const std::size_t used = std::min<std::size_t>(j, V.size());
      double dev = 0.0;
      for (std::size_t a = 0; a < used; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
          const double target = (a == b) ? 1.0 : 0.0;
          dev = std::max(dev, std::abs(std::abs(V[a].dot(V[b])) - target));
        }
      report.basis_orthogonality = std::max(report.basis_orthogonality, dev);
    }

    if (fixed_steps > 0) break;
    const double true_rel = (rhs - op(x)).norm() / bnorm;
    report.final_residual = true_rel;
    if (true_rel <= config.tol) converged = true;
    if (breakdown && !converged && true_rel > config.tol)
      throw std::runtime_error("gmres: numerical breakdown before convergence");
  }

  report.iterations = total_iters;
  if (fixed_steps == 0) {
    report.final_residual = (rhs - op(x)).norm() / bnorm;
    report.converged = report.final_residual <= config.tol;
  } else {
    report.converged = true;
  }
  return {x, report};
}

}  // namespace

std::pair<CVector, SolveReport> gmres(const LinOp& op, const CVector& rhs,
                                      const KrylovConfig& config,
                                      const LinOp* right_precond) {
  return gmres_driver(op, rhs, config,
                      right_precond ? PrecondMode::kFixedRight : PrecondMode::kNone,
                      right_precond);
}

std::pair<CVector, SolveReport> fgmres(const LinOp& op, const CVector& rhs,
                                       const LinOp& precond,
                                       const KrylovConfig& config) {
  return gmres_driver(op, rhs, config, PrecondMode::kFlexible, &precond);
}

CVector gmres_fixed_steps(const LinOp& op, const CVector& rhs, int steps) {
  if (steps < 1)
    throw std::invalid_argument("gmres_fixed_steps: steps must be >= 1");
  KrylovConfig config;
  config.record_history = false;
  return gmres_driver(op, rhs, config, PrecondMode::kNone, nullptr, steps).first;
}

}  // namespace hps
