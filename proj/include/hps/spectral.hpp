// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hps/types.hpp"

namespace hps {

/// Gauss-Legendre-Lobatto rule of polynomial degree `order` on [-1, 1].
///
/// Nodes are ascending with the endpoints included exactly; `diff` is the
/// Lagrange differentiation matrix at the nodes, built from barycentric
/// weights so it stays accurate at high degree.
struct GllRule {
  int order = 0;    // polynomial degree N; N+1 nodes
  RVector nodes;    // N+1 nodes, nodes[0] = -1, nodes[N] = +1
  RVector weights;  // quadrature weights, sum = 2
  RMatrix diff;     // (N+1) x (N+1) differentiation matrix
};

GllRule gll_rule(int order);

/// One-dimensional operators mapped to an element edge of length h.
struct ElementOps1D {
  int order = 0;
  double h = 2.0;
  RVector mass;   // (h/2) * weights, the diagonal mass matrix
  RMatrix diff;   // (2/h) * D
  RMatrix stiff;  // diff^T * diag(mass) * diff
};

ElementOps1D scale_to_element(const GllRule& rule, double h);

/// Applies (A kron B) to v without forming the product.
///
/// Grid linearization convention, used project-wide: a tensor node (i, j)
/// with i the x-index and j the y-index maps to linear index i*q + j, where
/// q is the number of points in y.  A acts on the x-index, B on the y-index.
CVector kron_apply(const CMatrix& A, const CMatrix& B, const CVector& v);

}  // namespace hps
