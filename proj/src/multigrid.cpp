// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/multigrid.hpp"

#include <stdexcept>

namespace hps {

MgPreconditioner::MgPreconditioner(const MergeHierarchy& hierarchy,
                                   const MgConfig& config)
    : hierarchy_(&hierarchy), config_(config) {
  if (config_.depth < 2)
    throw std::invalid_argument("MgPreconditioner: depth must be >= 2");
  if (config_.depth > hierarchy.depth)
    throw std::invalid_argument(
        "MgPreconditioner: depth exceeds the built hierarchy");
  if (!config_.exact_coarse && config_.gamma < 1)
    throw std::invalid_argument("MgPreconditioner: gamma must be >= 1");
  if (!config_.exact_coarse && config_.coarse_iters < 1)
    throw std::invalid_argument("MgPreconditioner: coarse_iters must be >= 1");

  if (config_.exact_coarse) {
    if (config_.depth == hierarchy.depth && hierarchy.coarse_lu)
      exact_lu_ = *hierarchy.coarse_lu;
    else
      exact_lu_.emplace(hierarchy.levels[config_.depth - 1].M.to_dense());
  }
}

CVector MgPreconditioner::apply_level(const CVector& v, int level) const {
  if (level < 1 || level > config_.depth)
    throw std::invalid_argument("MgPreconditioner: level out of range");
  const HierarchyLevel& hl = hierarchy_->levels[level - 1];
  if (v.size() != hl.M.dim())
    throw std::invalid_argument("MgPreconditioner: vector size mismatch");

  if (level == config_.depth) {
    if (config_.exact_coarse) return exact_lu_->solve(v);
    const auto op = [&hl](const CVector& y) { return hl.M.apply(y); };
    return gmres_fixed_steps(op, v, config_.coarse_iters);
  }

  const int bs = hierarchy_->block_size();
  const int na = hl.partition.a_faces;
  const Eigen::Index lead = static_cast<Eigen::Index>(na) * bs;

  // F v: block-diagonal solve on the level's leading part, zero elsewhere.
  CVector w = CVector::Zero(v.size());
  for (std::size_t gi = 0; gi < hl.partition.groups.size(); ++gi) {
    const auto& group = hl.partition.groups[gi];
    const int gsz = static_cast<int>(group.size());
    CVector hg(static_cast<Eigen::Index>(gsz) * bs);
    for (int i = 0; i < gsz; ++i)
      hg.segment(static_cast<Eigen::Index>(i) * bs, bs) =
          v.segment(static_cast<Eigen::Index>(group[i]) * bs, bs);
    const CVector xg = hl.group_lu[gi].solve(hg);
    for (int i = 0; i < gsz; ++i)
      w.segment(static_cast<Eigen::Index>(group[i]) * bs, bs) =
          xg.segment(static_cast<Eigen::Index>(i) * bs, bs);
  }

  // Restricted residual R (v - M F v).
  const CVector residual = v - hl.M.apply(w);
  const CVector rc = residual.tail(v.size() - lead);

  // Approximate S^{-1} rc by gamma zero-initialized Richardson corrections,
  // each applying the next level's solver (recursion, or the coarse GMRES /
  // exact solve at the deepest used level).
  const HierarchyLevel& next = hierarchy_->levels[level];
  const int gamma = config_.exact_coarse ? 1 : config_.gamma;
  CVector z = CVector::Zero(rc.size());
  for (int step = 0; step < gamma; ++step) {
    const CVector inner_res = (step == 0) ? rc : (rc - next.M.apply(z)).eval();
    z += apply_level(inner_res, level + 1);
  }

  // Prolongation P z = [-A^{-1} (B z); z] added to the smoothed part.
  CVector bz = CVector::Zero(lead);
  for (const auto& [key, blk] : hl.M.entries()) {
    const auto [r, c] = key;
    if (r < na && c >= na)
      bz.segment(static_cast<Eigen::Index>(r) * bs, bs).noalias() +=
          blk * z.segment(static_cast<Eigen::Index>(c - na) * bs, bs);
  }
  CVector out = w;
  for (std::size_t gi = 0; gi < hl.partition.groups.size(); ++gi) {
    const auto& group = hl.partition.groups[gi];
    const int gsz = static_cast<int>(group.size());
    CVector hg(static_cast<Eigen::Index>(gsz) * bs);
    for (int i = 0; i < gsz; ++i)
      hg.segment(static_cast<Eigen::Index>(i) * bs, bs) =
          bz.segment(static_cast<Eigen::Index>(group[i]) * bs, bs);
    const CVector xg = hl.group_lu[gi].solve(hg);
    for (int i = 0; i < gsz; ++i)
      out.segment(static_cast<Eigen::Index>(group[i]) * bs, bs) -=
          xg.segment(static_cast<Eigen::Index>(i) * bs, bs);
  }
  out.tail(z.size()) += z;
  return out;
}

std::size_t MgPreconditioner::memory_bytes() const {
  std::size_t bytes = 0;
  for (int level = 1; level <= config_.depth; ++level) {
    const HierarchyLevel& hl = hierarchy_->levels[level - 1];
    if (level > 1) bytes += hl.M.storage_bytes();
    if (level < config_.depth)
      for (const auto& lu : hl.group_lu)
        bytes += sizeof(Complex) * lu.matrixLU().size();
  }
  if (exact_lu_) bytes += sizeof(Complex) * exact_lu_->matrixLU().size();
  return bytes;
}

MgPreconditioner build_preconditioner(const MergeHierarchy& hierarchy,
                                      const MgConfig& config) {
  return MgPreconditioner(hierarchy, config);
}

}  // namespace hps
