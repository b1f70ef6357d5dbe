// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "hps/skeleton.hpp"

namespace hps {

/// Fused two-element impedance map.  Sides of the 1x2 subdomain are indexed
/// [e1 sides minus alpha | e2 sides minus beta], each in left/right/bottom/top
/// order.
struct FusedPair {
  CMatrix iti;     // T_pair, 6(N-1) square
  CVector source;  // H_pair

  /// Position of (element-of-pair, side) in the fused index space; element 0
  /// is e1.  Returns -1 for the eliminated shared sides.
  static int side_position(int element, Side side, Side alpha, Side beta);
};

/// Eliminates the shared face between two elements and returns the subdomain
/// ItI map and source contribution:
///   T_pair = D + C A^{-1} B over the six exterior sides, with
///   A = [[I, T1_aa], [T2_bb, I]] the face's own block (the sign convention
/// of SkeletonSystem).  T1/H1 belong to the element whose side `alpha`
/// touches the face.
FusedPair merge_pair(const CMatrix& T1, const CVector& H1, const CMatrix& T2,
                     const CVector& H2, Side alpha, Side beta, int side_len);

/// One elimination level: the factored block-diagonal part plus the parent
/// system it came from.
struct HierarchyLevel {
  int level = 0;
  int first_face = 0;  // global id of this system's leading face
  LevelPartition partition;
  BlockMatrix M;  // system over faces [first_face, total)
  std::vector<Eigen::PartialPivLU<CMatrix>> group_lu;  // one per merge group
};

/// Nested-dissection factorization of the skeleton system, built level by
/// level: M_{l+1} = D_l - C_l A_l^{-1} B_l with A_l applied through the
/// per-group factorizations.  The deepest retained system can optionally be
/// factorized densely (required for the direct solver and exact coarse
/// solves).
struct MergeHierarchy {
  FaceGraph graph;
  int side_len = 0;
  int depth = 0;                       // number of retained levels
  std::vector<HierarchyLevel> levels;  // levels[0] is the full system
  std::optional<Eigen::PartialPivLU<CMatrix>> coarse_lu;

  int block_size() const { return 2 * side_len; }
  int total_levels() const { return graph.num_levels(); }

  /// Retained factor/block storage in bytes (complex entries of the stored
  /// systems, group factors, and the dense coarse factorization).
  std::size_t storage_bytes() const;
};

/// Builds the hierarchy down to `depth` levels (depth = 0 means all levels).
MergeHierarchy build_hierarchy(const SkeletonSystem& system, int depth = 0,
                               bool factor_coarse = true);

/// Schur elimination of the leading level of `parent`; exposed for tests and
/// used internally by build_hierarchy.  Fills `level` with the factors and
/// returns the reduced system.
BlockMatrix eliminate_level(const BlockMatrix& parent,
                            const LevelPartition& partition,
                            std::vector<Eigen::PartialPivLU<CMatrix>>& group_lu);

/// Exact solve of M g = rhs through forward elimination, the dense coarse
/// solve, and back-substitution.  Requires a full-depth hierarchy with the
/// coarse factorization.
CVector direct_solve(const MergeHierarchy& hierarchy, const CVector& rhs);

}  // namespace hps
