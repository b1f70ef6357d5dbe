// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hps/multigrid.hpp"

using namespace hps;

namespace {

struct Built {
  Mesh mesh;
  std::vector<ElementRecord> elements;
  SkeletonSystem sys;
};

Built build(int n, int order, const ProblemSpec& spec) {
  Built b;
  b.mesh = Mesh(n, order, spec);
  const GllRule rule = gll_rule(order);
  b.elements = build_elements(b.mesh, rule);
  b.sys = assemble_skeleton(b.mesh, rule, b.elements);
  return b;
}

CVector random_cvector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(dist(rng), dist(rng));
  return v;
}

}  // namespace

TEST_CASE("exact coarse solves make the preconditioner an exact inverse") {
  const auto b = build(4, 8, ProblemSpec::bump(12.0));
  const MergeHierarchy h = build_hierarchy(b.sys);
  MgConfig config;
  config.depth = h.total_levels();
  config.exact_coarse = true;
  const MgPreconditioner mg = build_preconditioner(h, config);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector v = random_cvector(b.sys.dim(), rng);
    const CVector round_trip = mg.apply(b.sys.M.apply(v));
    CHECK((round_trip - v).norm() < 1e-10 * v.norm());
  }
}

TEST_CASE("block-diagonal system: the preconditioner is the exact block inverse") {
  // Synthetic two-face system with no coupling: MG must invert each block.
  std::mt19937_64 rng(5);
  const int bs = 6;
  std::normal_distribution<double> dist;
  auto rnd = [&] {
    CMatrix A(bs, bs);
    for (int i = 0; i < bs; ++i)
      for (int j = 0; j < bs; ++j) A(i, j) = Complex(dist(rng), dist(rng));
    return (A + 4.0 * CMatrix::Identity(bs, bs)).eval();
  };

  SkeletonSystem sys;
  sys.graph = build_face_graph(2);
  sys.side_len = bs / 2;
  sys.M = BlockMatrix(4, bs);
  for (int f = 0; f < 4; ++f) sys.M.block(f, f) = rnd();
  sys.rhs = CVector::Zero(sys.M.dim());

  const MergeHierarchy h = build_hierarchy(sys);
  MgConfig config;
  config.depth = 2;
  config.exact_coarse = true;
  const MgPreconditioner mg = build_preconditioner(h, config);
  const CVector v = random_cvector(sys.M.dim(), rng);
  const CVector expected = sys.M.to_dense().partialPivLu().solve(v);
  CHECK((mg.apply(v) - expected).norm() < 1e-11 * expected.norm());
}

TEST_CASE("full-depth exact preconditioner reproduces the direct solver") {
  const auto b = build(4, 6, ProblemSpec::bump(10.0));
  const MergeHierarchy h = build_hierarchy(b.sys);
  MgConfig config;
  config.depth = h.total_levels();
  config.exact_coarse = true;
  const MgPreconditioner mg = build_preconditioner(h, config);
  const CVector direct = direct_solve(h, b.sys.rhs);
  const CVector via_mg = mg.apply(b.sys.rhs);
  CHECK((direct - via_mg).norm() < 1e-11 * direct.norm());
}

TEST_CASE("coarse_iters is irrelevant when the deepest solve is exact") {
  const auto b = build(4, 5, ProblemSpec::bump(8.0));
  const MergeHierarchy h = build_hierarchy(b.sys, 3, false);
  std::mt19937_64 rng(7);
  const CVector v = random_cvector(b.sys.dim(), rng);

  CVector results[2];
  for (int k = 0; k < 2; ++k) {
    MgConfig config;
    config.depth = 3;
    config.gamma = 1;
    config.coarse_iters = k == 0 ? 1 : 6;
    config.exact_coarse = true;
    results[k] = build_preconditioner(h, config).apply(v);
  }
  CHECK((results[0] - results[1]).norm() == 0.0);
}

TEST_CASE("preconditioned FGMRES converges and improves with coarse iterations") {
  const auto b = build(8, 4, ProblemSpec::bump(15.0));
  const MergeHierarchy h = build_hierarchy(b.sys, 0, false);
  const auto op = [&b](const CVector& v) { return b.sys.M.apply(v); };

  KrylovConfig krylov;
  krylov.tol = 1e-8;
  krylov.record_history = false;

  int previous = 1 << 30;
  for (int ci : {2, 4, 6}) {
    MgConfig config;
    config.depth = 3;
    config.gamma = 1;
    config.coarse_iters = ci;
    const MgPreconditioner mg = build_preconditioner(h, config);
    const auto precond = [&mg](const CVector& v) { return mg.apply(v); };
    const auto [x, report] = fgmres(op, b.sys.rhs, precond, krylov);
    CHECK(report.converged);
    CHECK(report.iterations <= previous + 1);
    previous = report.iterations;
  }
}

TEST_CASE("preconditioner memory is monotone in depth and smallest at depth 2") {
  const auto b = build(8, 4, ProblemSpec::bump(12.0));
  const MergeHierarchy h = build_hierarchy(b.sys, 0, false);
  std::size_t previous = 0;
  for (int depth = 2; depth <= h.total_levels(); ++depth) {
    MgConfig config;
    config.depth = depth;
    const std::size_t bytes = build_preconditioner(h, config).memory_bytes();
    CHECK(bytes >= previous);
    previous = bytes;
  }
}

TEST_CASE("standalone block-inverse identity on random partitioned matrices") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist;
  std::uniform_int_distribution<int> split(1, 39);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 40;
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = Complex(dist(rng), dist(rng));
    const int k = split(rng);

    const CMatrix A = M.topLeftCorner(k, k);
    const CMatrix B = M.topRightCorner(k, n - k);
    const CMatrix C = M.bottomLeftCorner(n - k, k);
    const CMatrix D = M.bottomRightCorner(n - k, n - k);
    const Eigen::PartialPivLU<CMatrix> alu(A);
    const CMatrix S = D - C * alu.solve(B);

    // F + P S^{-1} R (I - M F) == M^{-1}.
    CMatrix F = CMatrix::Zero(n, n);
    F.topLeftCorner(k, k) = alu.inverse();
    CMatrix P(n, n - k);
    P.topRows(k) = -alu.solve(B);
    P.bottomRows(n - k) = CMatrix::Identity(n - k, n - k);
    CMatrix R = CMatrix::Zero(n - k, n);
    R.rightCols(n - k) = CMatrix::Identity(n - k, n - k);

    const CMatrix mg =
        F + P * S.partialPivLu().solve(R * (CMatrix::Identity(n, n) - M * F));
    const CMatrix inv = M.partialPivLu().inverse();
    CHECK((mg - inv).norm() < 1e-12 * inv.norm());
  }
}

TEST_CASE("configuration errors are rejected") {
  const auto b = build(4, 4, ProblemSpec::bump(5.0));
  const MergeHierarchy h = build_hierarchy(b.sys, 3, false);
  MgConfig config;
  config.depth = 4;  // deeper than built
  CHECK_THROWS_AS(build_preconditioner(h, config), std::invalid_argument);
  config.depth = 1;
  CHECK_THROWS_AS(build_preconditioner(h, config), std::invalid_argument);
  config.depth = 3;
  config.gamma = 0;
  CHECK_THROWS_AS(build_preconditioner(h, config), std::invalid_argument);
  config.gamma = 1;
  config.coarse_iters = 0;
  CHECK_THROWS_AS(build_preconditioner(h, config), std::invalid_argument);

  MgConfig good;
  good.depth = 3;
  const MgPreconditioner mg = build_preconditioner(h, good);
  CHECK_THROWS_AS(mg.apply_level(CVector::Zero(4), 5), std::invalid_argument);
  CHECK_THROWS_AS(mg.apply_level(CVector::Zero(3), 1), std::invalid_argument);
}
