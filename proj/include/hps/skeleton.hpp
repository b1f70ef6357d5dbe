// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "hps/block_matrix.hpp"
#include "hps/mesh.hpp"

namespace hps {

/// One interior face.  e1 is always the left (vertical face) or bottom
/// (horizontal face) element, so e1 exposes its right/top side and e2 its
/// left/bottom side.
struct Face {
  int e1 = -1, e2 = -1;
  Side s1 = Side::kRight, s2 = Side::kLeft;
  int level = 0;  // 1-based elimination level
  int group = 0;  // merge group within the level
};

/// Interior faces of the mesh in elimination order.
///
/// Levels follow the alternating pairwise merge schedule: level 1 merges
/// horizontally adjacent elements through one vertical face, level 2 merges
/// the resulting 2x1 subdomains vertically through two horizontal faces, and
/// so on until a single subdomain remains after 2*log2(n) levels.  Faces
/// eliminated together in one subdomain merge form a group; groups within a
/// level touch disjoint subdomains, which is what makes the leading block of
/// every level's system block-diagonal.
struct FaceGraph {
  int n = 0;
  std::vector<Face> faces;  // global elimination order
  std::vector<std::pair<int, int>> level_range;        // per level [begin, end)
  std::vector<std::vector<std::vector<int>>> groups;   // per level, face ids
  std::vector<std::array<int, 4>> face_of_element;     // [eid][side], -1 on boundary

  int num_levels() const { return static_cast<int>(level_range.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
};

FaceGraph build_face_graph(int n);

/// Sparse global system M g = rhs over the incoming impedance unknowns of all
/// interior faces.
///
/// Unknown layout: face blocks in graph order, each of width 2(N-1); within a
/// face the leading slot holds the data incoming to e2 and the trailing slot
/// the data incoming to e1.  With both elements using their own outward
/// normals, continuity of the solution and its flux reads
///     (Ii u)^(e2)_b = -(Io u)^(e1)_a,   (Ii u)^(e1)_a = -(Io u)^(e2)_b,
/// so expanding Io through the element ItI maps gives face rows with
/// identities on the diagonal and +T couplings:
///     [ I            T^(e1)_{aa} ] [ (Ii u)^(e2)_b ]         [ H^(e1)_a ]
///     [ T^(e2)_{bb}  I           ] [ (Ii u)^(e1)_a ] + ... = -[ H^(e2)_b ]
/// Physical boundary sides carry known data and land on the right-hand side.
struct SkeletonSystem {
  FaceGraph graph;
  int side_len = 0;  // N-1
  BlockMatrix M;
  CVector rhs;

  int block_size() const { return 2 * side_len; }
  Eigen::Index dim() const { return M.dim(); }

  /// Offset of the unknown (incoming data on `side` of element `eid`) in g.
  Eigen::Index slot_offset(int eid, Side side) const;
};

SkeletonSystem assemble_skeleton(const Mesh& mesh, const GllRule& rule,
                                 const std::vector<ElementRecord>& elements);

/// Level-l partition of a face-ordered system: the faces of level l must be
/// the leading block rows/columns.  `a_faces` counts them; `groups` lists the
/// face ids (relative to the system's leading face) whose gathered blocks
/// form the block-diagonal of A.
struct LevelPartition {
  int level = 0;
  int a_faces = 0;
  std::vector<std::vector<int>> groups;  // local face indices
};

/// Partition for eliminating `level` from the system whose leading face is
/// `first_face` in graph order.  Throws when the ordering precondition is
/// violated.
LevelPartition partition_level(const FaceGraph& graph, int first_face,
                               int level);

}  // namespace hps
