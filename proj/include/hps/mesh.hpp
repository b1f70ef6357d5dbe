// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "hps/element.hpp"
#include "hps/problems.hpp"
#include "hps/types.hpp"

namespace hps {

/// Uniform n-by-n mesh of square elements on (0,1)^2, n a power of two.
/// Elements are numbered row-major from the bottom-left: id = ey*n + ex.
struct Mesh {
  int n = 0;
  int order = 0;
  ProblemSpec problem;

  Mesh() = default;
  Mesh(int elements_per_side, int degree, ProblemSpec spec);

  double h() const { return 1.0 / n; }
  int num_elements() const { return n * n; }
  int element_id(int ex, int ey) const { return ey * n + ex; }
  Eigen::Vector2d origin(int eid) const {
    return {h() * (eid % n), h() * (eid / n)};
  }
};

/// One mesh element: placement, shared operators, and the problem-dependent
/// source data used during assembly and recovery.
struct ElementRecord {
  Eigen::Vector2d origin;
  std::shared_ptr<const ElementOperators> ops;
  CVector interior_source;  // b~ = quadrature-weighted source samples
  CVector outgoing_source;  // H(b~)
};

/// Builds the per-element operators, sharing factorizations between elements
/// with identical size and coefficient samples (e.g. constant-coefficient
/// problems collapse to a single factorization).
std::vector<ElementRecord> build_elements(const Mesh& mesh, const GllRule& rule);

/// Incoming impedance data samples for a physical boundary side of an
/// element, taken from the problem's boundary callable at the side's
/// corner-free nodes.
CVector boundary_side_data(const Mesh& mesh, const GllRule& rule, int eid,
                           Side side);

}  // namespace hps
