// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "hps/types.hpp"

namespace hps {

/// Square block-sparse complex matrix with uniform block size, stored as a
/// map from (block row, block column) to dense blocks.  All skeleton-level
/// elimination happens on whole face blocks, so no scalar sparse format is
/// used.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(int nblocks, int block_size)
      : nblocks_(nblocks), bs_(block_size) {}

  int nblocks() const { return nblocks_; }
  int block_size() const { return bs_; }
  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(nblocks_) * bs_;
  }

  /// Inserts (zero-initialized) or fetches a block.
  CMatrix& block(int r, int c);

  /// Returns nullptr when the block is structurally absent.
  const CMatrix* find(int r, int c) const;

  const std::map<std::pair<int, int>, CMatrix>& entries() const {
    return blocks_;
  }

  CVector apply(const CVector& v) const;
  CMatrix to_dense() const;

  /// Dense copy of the sub-matrix over [r0, r1) x [c0, c1) block ranges.
  CMatrix to_dense_sub(int r0, int r1, int c0, int c1) const;

  std::size_t storage_bytes() const;

 private:
  int nblocks_ = 0;
  int bs_ = 0;
  std::map<std::pair<int, int>, CMatrix> blocks_;
};

}  // namespace hps
