// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "hps/spectral.hpp"
#include "hps/types.hpp"

namespace hps {

/// Element sides in the order used throughout the boundary index layout.
enum class Side : int { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

inline int side_index(Side s) { return static_cast<int>(s); }

/// Node index bookkeeping for one element with the four corners removed.
///
/// The tensor grid follows the project linearization (see kron_apply):
/// node (i, j) -> i*(N+1) + j with i the x-index and j the y-index.  Side
/// lists run in ascending coordinate along the side (left/right by y,
/// bottom/top by x), so two elements sharing a face enumerate the shared
/// nodes in the same order.  `boundary` concatenates left|right|bottom|top.
struct IndexSets {
  int order = 0;
  std::vector<int> left, right, bottom, top;  // full-grid indices, N-1 each
  std::vector<int> boundary;                  // 4(N-1) entries
  std::vector<int> interior;                  // (N-1)^2 entries
  std::vector<int> noncorner;                 // ascending full-grid indices
  std::vector<int> comp_of_full;              // full index -> compressed, -1 at corners

  int total() const { return (order + 1) * (order + 1) - 4; }
  int side_len() const { return order - 1; }
  const std::vector<int>& side(Side s) const;
};

IndexSets build_index_sets(int order);

/// Weak-form Helmholtz operator on the corner-free grid:
///   K_x kron M_y + M_x kron K_y - diag(c) (M_x kron M_y),
/// restricted to non-corner rows and columns.  Only the interior rows are
/// meaningful; boundary rows get replaced by the incoming impedance operator
/// when the element factor is built.  `coeff_full` holds c at all (N+1)^2
/// tensor nodes of the physical element.
CMatrix assemble_local_pde(const ElementOps1D& ops_x, const ElementOps1D& ops_y,
                           const CVector& coeff_full, const IndexSets& sets);

/// Outgoing/incoming impedance operators, 4(N-1) x total.  Each row applies
/// the outward normal derivative on its side (-d/dx, +d/dx, -d/dy, +d/dy for
/// left/right/bottom/top) minus (outgoing) or plus (incoming) i*eta times the
/// boundary trace.
std::pair<CMatrix, CMatrix> build_impedance_operators(const IndexSets& sets,
                                                      const ElementOps1D& ops_x,
                                                      const ElementOps1D& ops_y,
                                                      double eta);

/// Per-element operators: the factored local problem and its
/// impedance-to-impedance map.  Immutable after construction and safe to
/// share between identical elements.
class ElementOperators {
 public:
  ElementOperators(const GllRule& rule, double h, double eta,
                   const CVector& coeff_full);

  int order() const { return sets_.order; }
  double edge_length() const { return h_; }
  double eta() const { return eta_; }
  const IndexSets& sets() const { return sets_; }
  const CVector& coeff() const { return coeff_; }
  const CMatrix& pde() const { return pde_; }
  const CMatrix& impedance_out() const { return imp_out_; }
  const CMatrix& impedance_in() const { return imp_in_; }

  /// The ItI map T, 4(N-1) square over the boundary ordering.
  const CMatrix& iti() const { return iti_; }

  /// (N-1)-square side block T_{ab}.
  CMatrix iti_block(Side a, Side b) const;

  /// H(b~): outgoing impedance response to an interior source vector.
  CVector source_to_outgoing(const CVector& interior_src) const;

  /// Solves L u = b with b(boundary) = g, b(interior) = interior_src.
  CVector solve(const CVector& g, const CVector& interior_src) const;

  /// Applies the factored operator L (impedance rows at the boundary, PDE
  /// rows inside) to a corner-free grid vector.  Test and diagnostic hook.
  CVector apply_operator(const CVector& u) const;

  const RVector& mass_2d() const { return mass2d_; }
  const ElementOps1D& ops_1d() const { return ops_; }

 private:
  double h_;
  double eta_;
  IndexSets sets_;
  ElementOps1D ops_;
  CVector coeff_;
  CMatrix pde_;
  CMatrix op_;  // pde with boundary rows replaced by imp_in_
  CMatrix imp_out_, imp_in_;
  CMatrix iti_;
  RVector mass2d_;  // tensor quadrature weights on the corner-free grid
  Eigen::PartialPivLU<CMatrix> factor_;
};

}  // namespace hps
