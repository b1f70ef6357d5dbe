// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/mesh.hpp"

#include <cstring>
#include <stdexcept>
#include <unordered_map>

namespace hps {

namespace {

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Mesh::Mesh(int elements_per_side, int degree, ProblemSpec spec)
    : n(elements_per_side), order(degree), problem(std::move(spec)) {
  if (!power_of_two(n))
    throw std::invalid_argument("Mesh: elements per side must be a power of two >= 2");
  if (order < 2) throw std::invalid_argument("Mesh: degree must be >= 2");
  if (!(problem.kappa > 0.0) || !(problem.eta > 0.0))
    throw std::invalid_argument("Mesh: kappa and eta must be positive");
}

std::vector<ElementRecord> build_elements(const Mesh& mesh, const GllRule& rule) {
  if (rule.order != mesh.order)
    throw std::invalid_argument("build_elements: rule order mismatch");
  const int np = mesh.order + 1;
  const double h = mesh.h();
  const double k2 = mesh.problem.kappa * mesh.problem.kappa;
  const IndexSets sets = build_index_sets(mesh.order);

  // Operators are a pure function of (h, eta, coefficient samples); elements
  // with identical samples share one factorization.
  struct CacheEntry {
    CVector coeff;
    std::shared_ptr<const ElementOperators> ops;
  };
  std::unordered_map<std::uint64_t, std::vector<CacheEntry>> cache;

  std::vector<ElementRecord> records(mesh.num_elements());
  for (int eid = 0; eid < mesh.num_elements(); ++eid) {
    ElementRecord& rec = records[eid];
    rec.origin = mesh.origin(eid);

    CVector coeff(np * np);
    for (int i = 0; i < np; ++i) {
      const double x = rec.origin.x() + 0.5 * (rule.nodes[i] + 1.0) * h;
      for (int j = 0; j < np; ++j) {
        const double y = rec.origin.y() + 0.5 * (rule.nodes[j] + 1.0) * h;
        coeff[i * np + j] = k2 * (1.0 - mesh.problem.b(x, y));
      }
    }

    std::uint64_t key = fnv1a(coeff.data(), sizeof(Complex) * coeff.size(),
                              14695981039346656037ull);
    key = fnv1a(&h, sizeof(h), key);
    auto& bucket = cache[key];
    for (const auto& entry : bucket) {
      if (entry.coeff.size() == coeff.size() &&
          std::memcmp(entry.coeff.data(), coeff.data(),
                      sizeof(Complex) * coeff.size()) == 0) {
        rec.ops = entry.ops;
        break;
      }
    }
    if (!rec.ops) {
      try {
        rec.ops =
            std::make_shared<ElementOperators>(rule, h, mesh.problem.eta, coeff);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("element " + std::to_string(eid) + ": " +
                                 e.what());
      }
      bucket.push_back({coeff, rec.ops});
    }

    // Interior right-hand side: source samples scaled by the tensor
    // quadrature weights, matching the mass-weighted zeroth-order term.
    const auto& interior = sets.interior;
    rec.interior_source.resize(interior.size());
    bool all_zero = true;
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const int i = interior[k] / np;
      const int j = interior[k] % np;
      const double x = rec.origin.x() + 0.5 * (rule.nodes[i] + 1.0) * h;
      const double y = rec.origin.y() + 0.5 * (rule.nodes[j] + 1.0) * h;
      const Complex s = mesh.problem.source(x, y);
      const int comp = sets.comp_of_full[interior[k]];
      rec.interior_source[k] = s * rec.ops->mass_2d()[comp];
      if (s != Complex(0.0, 0.0)) all_zero = false;
    }
    rec.outgoing_source =
        all_zero ? CVector::Zero(4 * sets.side_len()).eval()
                 : rec.ops->source_to_outgoing(rec.interior_source);
  }
  return records;
}

CVector boundary_side_data(const Mesh& mesh, const GllRule& rule, int eid,
                           Side side) {
  const double h = mesh.h();
  const Eigen::Vector2d o = mesh.origin(eid);
  const int m = mesh.order - 1;
  CVector t(m);

  double nx = 0.0, ny = 0.0;
  for (int k = 0; k < m; ++k) {
    double x = 0.0, y = 0.0;
    const double along = 0.5 * (rule.nodes[k + 1] + 1.0) * h;
    switch (side) {
      case Side::kLeft:
        x = o.x(), y = o.y() + along, nx = -1.0, ny = 0.0;
        break;
      case Side::kRight:
        x = o.x() + h, y = o.y() + along, nx = 1.0, ny = 0.0;
        break;
      case Side::kBottom:
        x = o.x() + along, y = o.y(), nx = 0.0, ny = -1.0;
        break;
      case Side::kTop:
        x = o.x() + along, y = o.y() + h, nx = 0.0, ny = 1.0;
        break;
    }
    t[k] = mesh.problem.boundary_data(x, y, nx, ny);
  }
  return t;
}

}  // namespace hps
