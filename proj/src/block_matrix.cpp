// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/block_matrix.hpp"

#include <stdexcept>

namespace hps {

CMatrix& BlockMatrix::block(int r, int c) {
  if (r < 0 || r >= nblocks_ || c < 0 || c >= nblocks_)
    throw std::out_of_range("BlockMatrix::block: index out of range");
  auto it = blocks_.find({r, c});
  if (it == blocks_.end())
    it = blocks_.emplace(std::make_pair(r, c), CMatrix::Zero(bs_, bs_)).first;
  return it->second;
}

const CMatrix* BlockMatrix::find(int r, int c) const {
  auto it = blocks_.find({r, c});
  return it == blocks_.end() ? nullptr : &it->second;
}

CVector BlockMatrix::apply(const CVector& v) const {
  if (v.size() != dim())
    throw std::invalid_argument("BlockMatrix::apply: size mismatch");
  CVector y = CVector::Zero(dim());
  for (const auto& [key, blk] : blocks_)
    y.segment(key.first * bs_, bs_).noalias() +=
        blk * v.segment(key.second * bs_, bs_);
  return y;
}

CMatrix BlockMatrix::to_dense() const {
  return to_dense_sub(0, nblocks_, 0, nblocks_);
}

CMatrix BlockMatrix::to_dense_sub(int r0, int r1, int c0, int c1) const {
  CMatrix out = CMatrix::Zero((r1 - r0) * static_cast<Eigen::Index>(bs_),
                              (c1 - c0) * static_cast<Eigen::Index>(bs_));
  for (const auto& [key, blk] : blocks_) {
    const auto [r, c] = key;
    if (r < r0 || r >= r1 || c < c0 || c >= c1) continue;
    out.block((r - r0) * bs_, (c - c0) * bs_, bs_, bs_) = blk;
  }
  return out;
}

std::size_t BlockMatrix::storage_bytes() const {
  std::size_t bytes = 0;
  for (const auto& [key, blk] : blocks_)
    bytes += sizeof(Complex) * blk.size();
  return bytes;
}

}  // namespace hps
