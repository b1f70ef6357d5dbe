// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/element.hpp"

#include <stdexcept>

namespace hps {

const std::vector<int>& IndexSets::side(Side s) const {
  switch (s) {
    case Side::kLeft:
      return left;
    case Side::kRight:
      return right;
    case Side::kBottom:
      return bottom;
    default:
      return top;
  }
}

IndexSets build_index_sets(int order) {
  if (order < 2)
    throw std::invalid_argument("build_index_sets: order must be >= 2");
  const int np = order + 1;
  IndexSets sets;
  sets.order = order;

  auto lin = [np](int i, int j) { return i * np + j; };

  for (int j = 1; j < order; ++j) sets.left.push_back(lin(0, j));
  for (int j = 1; j < order; ++j) sets.right.push_back(lin(order, j));
  for (int i = 1; i < order; ++i) sets.bottom.push_back(lin(i, 0));
  for (int i = 1; i < order; ++i) sets.top.push_back(lin(i, order));

  sets.boundary.reserve(4 * (order - 1));
  for (const auto* s : {&sets.left, &sets.right, &sets.bottom, &sets.top})
    sets.boundary.insert(sets.boundary.end(), s->begin(), s->end());

  for (int i = 1; i < order; ++i)
    for (int j = 1; j < order; ++j) sets.interior.push_back(lin(i, j));

  sets.comp_of_full.assign(np * np, -1);
  auto corner = [&](int i, int j) {
    return (i == 0 || i == order) && (j == 0 || j == order);
  };
  int pos = 0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) {
      if (corner(i, j)) continue;
      sets.noncorner.push_back(lin(i, j));
      sets.comp_of_full[lin(i, j)] = pos++;
    }
  return sets;
}

CMatrix assemble_local_pde(const ElementOps1D& ops_x, const ElementOps1D& ops_y,
                           const CVector& coeff_full, const IndexSets& sets) {
  const int np = sets.order + 1;
  if (ops_x.order != sets.order || ops_y.order != sets.order)
    throw std::invalid_argument("assemble_local_pde: rule/order mismatch");
  if (coeff_full.size() != np * np)
    throw std::invalid_argument("assemble_local_pde: coefficient grid mismatch");

  const int total = sets.total();
  CMatrix L = CMatrix::Zero(total, total);
  const auto& comp = sets.comp_of_full;

  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < np; ++j) {
      const int r = comp[i * np + j];
      if (r < 0) continue;
      // (K_x kron M_y) row: couples (i', j) for all i'.
      for (int k = 0; k < np; ++k) {
        const int c = comp[k * np + j];
        if (c < 0) continue;
        L(r, c) += ops_x.stiff(i, k) * ops_y.mass[j];
      }
      // (M_x kron K_y) row: couples (i, j') for all j'.
      for (int k = 0; k < np; ++k) {
        const int c = comp[i * np + k];
        if (c < 0) continue;
        L(r, c) += ops_x.mass[i] * ops_y.stiff(j, k);
      }
      // Zeroth-order term; the minus sign matches -Delta u - c u = s.
      L(r, r) -= coeff_full[i * np + j] * ops_x.mass[i] * ops_y.mass[j];
    }
  }
  return L;
}

std::pair<CMatrix, CMatrix> build_impedance_operators(const IndexSets& sets,
                                                      const ElementOps1D& ops_x,
                                                      const ElementOps1D& ops_y,
                                                      double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("build_impedance_operators: eta must be > 0");
  const int np = sets.order + 1;
  const int nb = static_cast<int>(sets.boundary.size());
  const int total = sets.total();
  const auto& comp = sets.comp_of_full;

  CMatrix deriv = CMatrix::Zero(nb, total);
  CMatrix trace = CMatrix::Zero(nb, total);

  for (int r = 0; r < nb; ++r) {
    const int full = sets.boundary[r];
    const int i = full / np;
    const int j = full % np;
    if (i == 0) {  // left, outward normal -x
      for (int k = 0; k < np; ++k) deriv(r, comp[k * np + j]) = -ops_x.diff(0, k);
    } else if (i == sets.order) {  // right, +x
      for (int k = 0; k < np; ++k) deriv(r, comp[k * np + j]) = ops_x.diff(i, k);
    } else if (j == 0) {  // bottom, -y
      for (int k = 0; k < np; ++k) deriv(r, comp[i * np + k]) = -ops_y.diff(0, k);
    } else {  // top, +y
      for (int k = 0; k < np; ++k) deriv(r, comp[i * np + k]) = ops_y.diff(j, k);
    }
    trace(r, comp[full]) = 1.0;
  }

  CMatrix out = deriv - kI * eta * trace;
  CMatrix in = deriv + kI * eta * trace;
  return {std::move(out), std::move(in)};
}

ElementOperators::ElementOperators(const GllRule& rule, double h, double eta,
                                   const CVector& coeff_full)
    : h_(h), eta_(eta), sets_(build_index_sets(rule.order)), coeff_(coeff_full) {
  ops_ = scale_to_element(rule, h);
  pde_ = assemble_local_pde(ops_, ops_, coeff_full, sets_);
  std::tie(imp_out_, imp_in_) =
      build_impedance_operators(sets_, ops_, ops_, eta);

  // Replace the boundary rows of the weak-form operator by the incoming
  // impedance condition; interior rows are kept verbatim.
  op_ = pde_;
  for (std::size_t r = 0; r < sets_.boundary.size(); ++r)
    op_.row(sets_.comp_of_full[sets_.boundary[r]]) = imp_in_.row(r);

  factor_.compute(op_);
  // Impedance conditions make the local problem invertible away from truly
  // degenerate data, so a vanishing pivot indicates a bug or extreme inputs.
  const double pivot_min = factor_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot_min > 0.0))
    throw std::runtime_error("ElementOperators: singular local operator");

  const int nb = static_cast<int>(sets_.boundary.size());
  CMatrix rhs = CMatrix::Zero(sets_.total(), nb);
  for (int r = 0; r < nb; ++r)
    rhs(sets_.comp_of_full[sets_.boundary[r]], r) = 1.0;
  iti_ = imp_out_ * factor_.solve(rhs);

  const int np = sets_.order + 1;
  mass2d_.resize(sets_.total());
  for (int k = 0; k < sets_.total(); ++k) {
    const int full = sets_.noncorner[k];
    mass2d_[k] = ops_.mass[full / np] * ops_.mass[full % np];
  }
}

CMatrix ElementOperators::iti_block(Side a, Side b) const {
  const int m = sets_.side_len();
  return iti_.block(side_index(a) * m, side_index(b) * m, m, m);
}

CVector ElementOperators::source_to_outgoing(const CVector& interior_src) const {
  if (interior_src.size() != static_cast<Eigen::Index>(sets_.interior.size()))
    throw std::invalid_argument("source_to_outgoing: interior size mismatch");
  CVector b = CVector::Zero(sets_.total());
  for (std::size_t k = 0; k < sets_.interior.size(); ++k)
    b[sets_.comp_of_full[sets_.interior[k]]] = interior_src[k];
  return imp_out_ * factor_.solve(b);
}

CVector ElementOperators::solve(const CVector& g,
                                const CVector& interior_src) const {
  if (g.size() != static_cast<Eigen::Index>(sets_.boundary.size()))
    throw std::invalid_argument("solve: boundary data size mismatch");
  if (interior_src.size() != static_cast<Eigen::Index>(sets_.interior.size()))
    throw std::invalid_argument("solve: interior source size mismatch");
  CVector b = CVector::Zero(sets_.total());
  for (std::size_t r = 0; r < sets_.boundary.size(); ++r)
    b[sets_.comp_of_full[sets_.boundary[r]]] = g[r];
  for (std::size_t k = 0; k < sets_.interior.size(); ++k)
    b[sets_.comp_of_full[sets_.interior[k]]] = interior_src[k];
  return factor_.solve(b);
}

CVector ElementOperators::apply_operator(const CVector& u) const {
  return op_ * u;
}

}  // namespace hps
