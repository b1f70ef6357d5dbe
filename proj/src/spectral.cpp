// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace hps {

namespace {

// Legendre values P_{N-1}(x), P_N(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int order, double x) {
  double pm = 1.0;  // P_0
  double p = x;     // P_1
  for (int k = 1; k < order; ++k) {
    const double pn = ((2.0 * k + 1.0) * x * p - k * pm) / (k + 1.0);
    pm = p;
    p = pn;
  }
  return {pm, p};
}

}  // namespace

GllRule gll_rule(int order) {
  if (order < 1) throw std::invalid_argument("gll_rule: order must be >= 1");

  const int np = order + 1;
  GllRule rule;
  rule.order = order;
  rule.nodes.resize(np);
  rule.weights.resize(np);

  // Newton iteration for the roots of (1 - x^2) P_N'(x), written via the
  // identity (1 - x^2) P_N'(x) = N (P_{N-1}(x) - x P_N(x)).  Chebyshev-Lobatto
  // points are close enough for quadratic convergence from the start.
  for (int i = 0; i < np; ++i) {
    double x = -std::cos(M_PI * i / order);
    for (int it = 0; it < 100; ++it) {
      const auto [pm, p] = legendre_pair(order, x);
      const double dx = (x * p - pm) / (np * p);
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    rule.nodes[i] = x;
  }
  // Symmetrize and pin the endpoints so the documented invariants hold exactly.
  for (int i = 0; i <= order / 2; ++i) {
    const double s = 0.5 * (rule.nodes[i] - rule.nodes[order - i]);
    rule.nodes[i] = s;
    rule.nodes[order - i] = -s;
  }
  rule.nodes[0] = -1.0;
  rule.nodes[order] = 1.0;
  if (order % 2 == 0) rule.nodes[order / 2] = 0.0;

  for (int i = 0; i < np; ++i) {
    const auto [pm, p] = legendre_pair(order, rule.nodes[i]);
    (void)pm;
    rule.weights[i] = 2.0 / (order * np * p * p);
  }

  // Barycentric weights; entries are used only through ratios, so normalize
  // by the largest magnitude to keep them well scaled.
  RVector bary(np);
  for (int i = 0; i < np; ++i) {
    double w = 1.0;
    for (int j = 0; j < np; ++j) {
      if (j != i) w *= rule.nodes[i] - rule.nodes[j];
    }
    bary[i] = 1.0 / w;
  }
  bary /= bary.cwiseAbs().maxCoeff();

  rule.diff = RMatrix::Zero(np, np);
  for (int i = 0; i < np; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < np; ++j) {
      if (j == i) continue;
      rule.diff(i, j) = (bary[j] / bary[i]) / (rule.nodes[i] - rule.nodes[j]);
      rowsum += rule.diff(i, j);
    }
    rule.diff(i, i) = -rowsum;  // rows of D annihilate constants
  }
  return rule;
}

ElementOps1D scale_to_element(const GllRule& rule, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("scale_to_element: h must be > 0");
  ElementOps1D ops;
  ops.order = rule.order;
  ops.h = h;
  ops.mass = (0.5 * h) * rule.weights;
  ops.diff = (2.0 / h) * rule.diff;
  ops.stiff = ops.diff.transpose() * ops.mass.asDiagonal() * ops.diff;
  return ops;
}

CVector kron_apply(const CMatrix& A, const CMatrix& B, const CVector& v) {
  const auto p = A.rows();
  const auto q = B.rows();
  if (A.cols() != p || B.cols() != q)
    throw std::invalid_argument("kron_apply: A and B must be square");
  if (v.size() != p * q)
    throw std::invalid_argument("kron_apply: v has wrong length");

  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>;
  RowMajorMap V(v.data(), p, q);  // V(i, j) = v[i*q + j]
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W =
      A * V * B.transpose();
  return Eigen::Map<const CVector>(W.data(), p * q);
}

}  // namespace hps
