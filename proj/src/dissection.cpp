// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/dissection.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace hps {

int FusedPair::side_position(int element, Side side, Side alpha, Side beta) {
  const Side skip = (element == 0) ? alpha : beta;
  if (side == skip) return -1;
  int pos = 0;
  for (int s = 0; s < 4; ++s) {
    if (s == side_index(skip)) continue;
    if (s == side_index(side)) return (element == 0 ? 0 : 3) + pos;
    ++pos;
  }
  return -1;
}

FusedPair merge_pair(const CMatrix& T1, const CVector& H1, const CMatrix& T2,
                     const CVector& H2, Side alpha, Side beta, int side_len) {
  const int m = side_len;
  if (T1.rows() != 4 * m || T2.rows() != 4 * m || T1.cols() != 4 * m ||
      T2.cols() != 4 * m || H1.size() != 4 * m || H2.size() != 4 * m)
    throw std::invalid_argument("merge_pair: operator dimensions mismatch");

  auto blk = [m](const CMatrix& T, Side a, Side b) {
    return T.block(side_index(a) * m, side_index(b) * m, m, m);
  };
  auto exterior = [](Side skip) {
    std::vector<Side> out;
    for (int s = 0; s < 4; ++s)
      if (s != side_index(skip)) out.push_back(static_cast<Side>(s));
    return out;
  };
  const auto ext1 = exterior(alpha);
  const auto ext2 = exterior(beta);

  // Face system in the unknowns x = [(Ii u)^(e2)_beta; (Ii u)^(e1)_alpha],
  // from the transmission conditions x1 = -(Io u)^(e1)_a, x2 = -(Io u)^(e2)_b.
  CMatrix A = CMatrix::Identity(2 * m, 2 * m);
  A.block(0, m, m, m) = blk(T1, alpha, alpha);
  A.block(m, 0, m, m) = blk(T2, beta, beta);

  // Exterior incoming data y = [(Ii u)^(e1)_E1; (Ii u)^(e2)_E2] drives x ...
  CMatrix B = CMatrix::Zero(2 * m, 6 * m);
  for (int k = 0; k < 3; ++k) {
    B.block(0, k * m, m, m) = -blk(T1, alpha, ext1[k]);
    B.block(m, (3 + k) * m, m, m) = -blk(T2, beta, ext2[k]);
  }

  // ... and the exterior outgoing relations read x back through the shared
  // sides: e1's rows need x_2 = (Ii u)^(e1)_alpha, e2's rows need x_1, hence
  // the anti-diagonal coupling.
  CMatrix C = CMatrix::Zero(6 * m, 2 * m);
  CMatrix D = CMatrix::Zero(6 * m, 6 * m);
  CVector h_ext(6 * m), h_face(2 * m);
  for (int k = 0; k < 3; ++k) {
    C.block(k * m, m, m, m) = blk(T1, ext1[k], alpha);
    C.block((3 + k) * m, 0, m, m) = blk(T2, ext2[k], beta);
    for (int l = 0; l < 3; ++l) {
      D.block(k * m, l * m, m, m) = blk(T1, ext1[k], ext1[l]);
      D.block((3 + k) * m, (3 + l) * m, m, m) = blk(T2, ext2[k], ext2[l]);
    }
    h_ext.segment(k * m, m) = H1.segment(side_index(ext1[k]) * m, m);
    h_ext.segment((3 + k) * m, m) = H2.segment(side_index(ext2[k]) * m, m);
  }
  h_face.head(m) = -H1.segment(side_index(alpha) * m, m);
  h_face.tail(m) = -H2.segment(side_index(beta) * m, m);

  Eigen::PartialPivLU<CMatrix> lu(A);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
    throw std::runtime_error("merge_pair: singular face block");

  FusedPair fused;
  fused.iti = D + C * lu.solve(B);
  fused.source = h_ext + C * lu.solve(h_face);
  return fused;
}

namespace {

struct GroupIndex {
  std::vector<int> group_of;  // per leading face
  std::vector<int> pos_of;    // position within its group
};

GroupIndex index_groups(const LevelPartition& partition) {
  GroupIndex gidx;
  gidx.group_of.assign(partition.a_faces, -1);
  gidx.pos_of.assign(partition.a_faces, -1);
  for (std::size_t gi = 0; gi < partition.groups.size(); ++gi) {
    const auto& group = partition.groups[gi];
    for (std::size_t i = 0; i < group.size(); ++i) {
      gidx.group_of[group[i]] = static_cast<int>(gi);
      gidx.pos_of[group[i]] = static_cast<int>(i);
    }
  }
  return gidx;
}

// Per-group LU of the gathered leading blocks; verifies block-diagonality.
std::vector<Eigen::PartialPivLU<CMatrix>> factor_groups(
    const BlockMatrix& parent, const LevelPartition& partition,
    const GroupIndex& gidx) {
  const int bs = parent.block_size();
  const int na = partition.a_faces;
  for (const auto& [key, blk] : parent.entries()) {
    const auto [r, c] = key;
    if (r < na && c < na && gidx.group_of[r] != gidx.group_of[c])
      throw std::logic_error(
          "eliminate_level: leading block couples faces " + std::to_string(r) +
          " and " + std::to_string(c) + " across merge groups");
  }
  std::vector<Eigen::PartialPivLU<CMatrix>> lus;
  lus.reserve(partition.groups.size());
  for (const auto& group : partition.groups) {
    const int gsz = static_cast<int>(group.size());
    CMatrix A = CMatrix::Zero(gsz * bs, gsz * bs);
    for (int i = 0; i < gsz; ++i)
      for (int j = 0; j < gsz; ++j)
        if (const CMatrix* blk = parent.find(group[i], group[j]))
          A.block(i * bs, j * bs, bs, bs) = *blk;
    lus.emplace_back(A);
    if (!(lus.back().matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
      throw std::runtime_error("eliminate_level: singular merge block at face " +
                               std::to_string(group.front()));
  }
  return lus;
}

// x_G = A_G^{-1} h_G for every group, returned per group.
std::vector<CVector> solve_groups(
    const LevelPartition& partition,
    const std::vector<Eigen::PartialPivLU<CMatrix>>& lus, const CVector& lead,
    int bs) {
  std::vector<CVector> x(partition.groups.size());
  for (std::size_t gi = 0; gi < partition.groups.size(); ++gi) {
    const auto& group = partition.groups[gi];
    CVector hg(group.size() * static_cast<std::size_t>(bs));
    for (std::size_t i = 0; i < group.size(); ++i)
      hg.segment(i * bs, bs) = lead.segment(static_cast<Eigen::Index>(group[i]) * bs, bs);
    x[gi] = lus[gi].solve(hg);
  }
  return x;
}

}  // namespace

BlockMatrix eliminate_level(const BlockMatrix& parent,
                            const LevelPartition& partition,
                            std::vector<Eigen::PartialPivLU<CMatrix>>& group_lu) {
  const int bs = parent.block_size();
  const int na = partition.a_faces;
  const int rest = parent.nblocks() - na;

  const GroupIndex gidx = index_groups(partition);
  group_lu = factor_groups(parent, partition, gidx);

  BlockMatrix next(rest, bs);
  std::vector<std::set<int>> bcols(partition.groups.size());
  std::vector<std::set<int>> crows(partition.groups.size());
  for (const auto& [key, blk] : parent.entries()) {
    const auto [r, c] = key;
    if (r >= na && c >= na)
      next.block(r - na, c - na) = blk;
    else if (r < na && c >= na)
      bcols[gidx.group_of[r]].insert(c);
    else if (r >= na && c < na)
      crows[gidx.group_of[c]].insert(r);
  }

  for (std::size_t gi = 0; gi < partition.groups.size(); ++gi) {
    const auto& group = partition.groups[gi];
    const int gsz = static_cast<int>(group.size());
    for (int c : bcols[gi]) {
      CMatrix Bg = CMatrix::Zero(gsz * bs, bs);
      for (int i = 0; i < gsz; ++i)
        if (const CMatrix* blk = parent.find(group[i], c))
          Bg.block(i * bs, 0, bs, bs) = *blk;
      const CMatrix X = group_lu[gi].solve(Bg);
      for (int r : crows[gi]) {
        CMatrix update = CMatrix::Zero(bs, bs);
        bool touched = false;
        for (int i = 0; i < gsz; ++i)
          if (const CMatrix* blk = parent.find(r, group[i])) {
            update.noalias() += *blk * X.block(i * bs, 0, bs, bs);
            touched = true;
          }
        if (touched) next.block(r - na, c - na) -= update;
      }
    }
  }
  return next;
}

MergeHierarchy build_hierarchy(const SkeletonSystem& system, int depth,
                               bool factor_coarse) {
  MergeHierarchy h;
  h.graph = system.graph;
  h.side_len = system.side_len;
  const int total = h.total_levels();
  if (depth == 0) depth = total;
  if (depth < 1 || depth > total)
    throw std::invalid_argument("build_hierarchy: depth out of range");
  h.depth = depth;

  BlockMatrix current = system.M;
  int first_face = 0;
  for (int level = 1; level <= depth; ++level) {
    HierarchyLevel hl;
    hl.level = level;
    hl.first_face = first_face;
    hl.partition = partition_level(h.graph, first_face, level);
    hl.M = std::move(current);
    if (level < depth) {
      current = eliminate_level(hl.M, hl.partition, hl.group_lu);
      first_face += hl.partition.a_faces;
    }
    h.levels.push_back(std::move(hl));
  }
  if (factor_coarse) h.coarse_lu.emplace(h.levels.back().M.to_dense());
  return h;
}

std::size_t MergeHierarchy::storage_bytes() const {
  std::size_t bytes = 0;
  for (const auto& hl : levels) {
    bytes += hl.M.storage_bytes();
    for (const auto& lu : hl.group_lu)
      bytes += sizeof(Complex) * lu.matrixLU().size();
  }
  if (coarse_lu) bytes += sizeof(Complex) * coarse_lu->matrixLU().size();
  return bytes;
}

CVector direct_solve(const MergeHierarchy& hierarchy, const CVector& rhs) {
  if (hierarchy.depth != hierarchy.total_levels() || !hierarchy.coarse_lu)
    throw std::logic_error("direct_solve: hierarchy not built to full depth");
  if (rhs.size() != hierarchy.levels.front().M.dim())
    throw std::invalid_argument("direct_solve: rhs size mismatch");
  const int bs = hierarchy.block_size();

  // Forward: h_{l+1} = h_D - C_l A_l^{-1} h_A, keeping each level's leading
  // part for the back-substitution.
  std::vector<CVector> lead(hierarchy.levels.size());
  CVector current = rhs;
  for (std::size_t li = 0; li + 1 < hierarchy.levels.size(); ++li) {
    const HierarchyLevel& hl = hierarchy.levels[li];
    const int na = hl.partition.a_faces;
    const GroupIndex gidx = index_groups(hl.partition);
    lead[li] = current.head(static_cast<Eigen::Index>(na) * bs);
    CVector tail = current.tail(current.size() - static_cast<Eigen::Index>(na) * bs);
    const auto x = solve_groups(hl.partition, hl.group_lu, lead[li], bs);
    for (const auto& [key, blk] : hl.M.entries()) {
      const auto [r, c] = key;
      if (r < na || c >= na) continue;
      tail.segment(static_cast<Eigen::Index>(r - na) * bs, bs).noalias() -=
          blk * x[gidx.group_of[c]].segment(
                    static_cast<Eigen::Index>(gidx.pos_of[c]) * bs, bs);
    }
    current = std::move(tail);
  }

  // Dense solve of the deepest system, then x_l = A_l^{-1} (h_A - B_l x_next).
  CVector x = hierarchy.coarse_lu->solve(current);
  for (auto li = static_cast<std::ptrdiff_t>(hierarchy.levels.size()) - 2;
       li >= 0; --li) {
    const HierarchyLevel& hl = hierarchy.levels[li];
    const int na = hl.partition.a_faces;
    const GroupIndex gidx = index_groups(hl.partition);
    CVector top = lead[li];
    for (const auto& [key, blk] : hl.M.entries()) {
      const auto [r, c] = key;
      if (r < na && c >= na)
        top.segment(static_cast<Eigen::Index>(r) * bs, bs).noalias() -=
            blk * x.segment(static_cast<Eigen::Index>(c - na) * bs, bs);
    }
    const auto xg = solve_groups(hl.partition, hl.group_lu, top, bs);
    CVector merged(static_cast<Eigen::Index>(na) * bs + x.size());
    for (int f = 0; f < na; ++f)
      merged.segment(static_cast<Eigen::Index>(f) * bs, bs) =
          xg[gidx.group_of[f]].segment(
              static_cast<Eigen::Index>(gidx.pos_of[f]) * bs, bs);
    merged.tail(x.size()) = x;
    x = std::move(merged);
  }
  return x;
}

}  // namespace hps
