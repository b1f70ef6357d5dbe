// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "hps/dissection.hpp"
#include "hps/krylov.hpp"

namespace hps {

struct MgConfig {
  int depth = 2;        // number of hierarchy levels used (>= 2)
  int gamma = 1;        // coarse calls per intermediate level (1 = V-cycle)
  int coarse_iters = 4; // unpreconditioned GMRES steps at the deepest level
  bool exact_coarse = false;  // dense solve at the deepest level; gamma and
                              // coarse_iters are ignored
};

/// The hierarchy recast as the recursive preconditioner
///   MG(M) = F + P S^{-1} R (I - M F),
/// where F applies the level's block-diagonal inverse, P = [-A^{-1}B; I],
/// R selects the trailing block, and S = M_{l+1}.  S is solved by recursion
/// (gamma zero-initialized Richardson corrections per level) until the
/// deepest used level, where a fixed number of unpreconditioned GMRES steps
/// (or the exact dense factorization) takes over.
class MgPreconditioner {
 public:
  MgPreconditioner(const MergeHierarchy& hierarchy, const MgConfig& config);

  const MgConfig& config() const { return config_; }

  /// Preconditioner application at the outermost level.
  CVector apply(const CVector& v) const { return apply_level(v, 1); }

  /// Recursive application for the system at `level` (1-based).
  CVector apply_level(const CVector& v, int level) const;

  /// Retained preconditioner storage: Schur systems below the top level,
  /// per-group factors, and the dense coarse factorization when exact.
  std::size_t memory_bytes() const;

 private:
  const MergeHierarchy* hierarchy_;
  MgConfig config_;
  std::optional<Eigen::PartialPivLU<CMatrix>> exact_lu_;
};

MgPreconditioner build_preconditioner(const MergeHierarchy& hierarchy,
                                      const MgConfig& config);

}  // namespace hps
