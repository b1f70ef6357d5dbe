// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hps/krylov.hpp"

using namespace hps;

namespace {

CMatrix random_wellconditioned(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  CMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(dist(rng), dist(rng));
  // Diagonal shift keeps the spectrum away from the origin.
  A += 2.0 * std::sqrt(static_cast<double>(n)) * CMatrix::Identity(n, n);
  return A;
}

CVector random_cvector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(dist(rng), dist(rng));
  return v;
}

LinOp matrix_op(const CMatrix& A) {
  return [&A](const CVector& v) { return (A * v).eval(); };
}

}  // namespace

TEST_CASE("identity operator converges in one iteration") {
  std::mt19937_64 rng(3);
  const CVector rhs = random_cvector(20, rng);
  const LinOp op = [](const CVector& v) { return v; };
  const auto [x, report] = gmres(op, rhs, {});
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  CHECK((x - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("reported residual matches the explicit residual") {
  std::mt19937_64 rng(5);
  const CMatrix A = random_wellconditioned(50, rng);
  const CVector rhs = random_cvector(50, rng);
  KrylovConfig config;
  config.tol = 1e-10;
  const auto [x, report] = gmres(matrix_op(A), rhs, config);
  CHECK(report.converged);
  const double true_res = (rhs - A * x).norm() / rhs.norm();
  CHECK(std::abs(true_res - report.final_residual) <
        1e-8 * std::max(true_res, report.final_residual) + 1e-14);
  CHECK(report.final_residual <= 1e-10);
  // History is per-iteration and ends at (or below) the target.
  CHECK(static_cast<int>(report.residual_history.size()) == report.iterations);
}

TEST_CASE("diagonal operator with k distinct eigenvalues needs at most k steps") {
  const int n = 50;
  CVector diag(n);
  for (int i = 0; i < n; ++i) diag[i] = Complex(1.0 + i % 5, 0.5);
  const LinOp op = [&diag](const CVector& v) {
    return (diag.array() * v.array()).matrix().eval();
  };
  std::mt19937_64 rng(7);
  const CVector rhs = random_cvector(n, rng);
  KrylovConfig config;
  config.tol = 1e-10;
  const auto [x, report] = gmres(op, rhs, config);
  CHECK(report.converged);
  CHECK(report.iterations <= 5);
}

TEST_CASE("arnoldi basis stays near-orthonormal, exactly so when reorthogonalized") {
  std::mt19937_64 rng(9);
  const CMatrix A = random_wellconditioned(80, rng);
  const CVector rhs = random_cvector(80, rng);
  KrylovConfig config;
  config.tol = 1e-10;
  config.record_history = true;
  const auto [x, report] = gmres(matrix_op(A), rhs, config);
  CHECK(report.converged);
  CHECK(report.basis_orthogonality < 1e-5);  // plain modified Gram-Schmidt

  config.reorthogonalize = true;
  const auto [x2, report2] = gmres(matrix_op(A), rhs, config);
  CHECK(report2.converged);
  CHECK(report2.basis_orthogonality < 1e-12);
}

TEST_CASE("restarts still reach the target") {
  std::mt19937_64 rng(11);
  const CMatrix A = random_wellconditioned(60, rng);
  const CVector rhs = random_cvector(60, rng);
  KrylovConfig config;
  config.restart = 7;  // force several cycles
  config.tol = 1e-9;
  config.max_iters = 500;
  const auto [x, report] = gmres(matrix_op(A), rhs, config);
  CHECK(report.converged);
  CHECK((rhs - A * x).norm() <= 1e-9 * rhs.norm() * 1.01);
}

TEST_CASE("non-convergence is reported, never silent") {
  std::mt19937_64 rng(13);
  const CMatrix A = random_wellconditioned(40, rng);
  const CVector rhs = random_cvector(40, rng);
  KrylovConfig config;
  config.max_iters = 3;
  config.tol = 1e-12;
  const auto [x, report] = gmres(matrix_op(A), rhs, config);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 3);
  CHECK(report.final_residual > 1e-12);
}

TEST_CASE("fgmres with the exact inverse converges in one iteration") {
  std::mt19937_64 rng(17);
  const CMatrix A = random_wellconditioned(40, rng);
  const CVector rhs = random_cvector(40, rng);
  const Eigen::PartialPivLU<CMatrix> lu(A);
  const LinOp precond = [&lu](const CVector& v) { return lu.solve(v).eval(); };
  const auto [x, report] = fgmres(matrix_op(A), rhs, precond, {});
  CHECK(report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("fgmres with the identity preconditioner reproduces gmres") {
  std::mt19937_64 rng(19);
  const CMatrix A = random_wellconditioned(50, rng);
  const CVector rhs = random_cvector(50, rng);
  KrylovConfig config;
  config.tol = 1e-9;
  const LinOp identity = [](const CVector& v) { return v; };
  const auto [xg, rg] = gmres(matrix_op(A), rhs, config);
  const auto [xf, rf] = fgmres(matrix_op(A), rhs, identity, config);
  CHECK(rg.iterations == rf.iterations);
  CHECK((xg - xf).norm() < 1e-10 * xg.norm());
}

TEST_CASE("fgmres matches right-preconditioned gmres for a fixed preconditioner") {
  std::mt19937_64 rng(23);
  const CMatrix A = random_wellconditioned(60, rng);
  const CVector rhs = random_cvector(60, rng);
  // A crude but fixed preconditioner: the inverse of the diagonal.
  const CVector dinv = A.diagonal().cwiseInverse();
  const LinOp precond = [&dinv](const CVector& v) {
    return (dinv.array() * v.array()).matrix().eval();
  };
  KrylovConfig config;
  config.tol = 1e-9;
  const auto [xr, rr] = gmres(matrix_op(A), rhs, config, &precond);
  const auto [xf, rf] = fgmres(matrix_op(A), rhs, precond, config);
  CHECK(std::abs(rr.iterations - rf.iterations) <= 1);
  CHECK(rr.converged);
  CHECK(rf.converged);
}

TEST_CASE("fixed-step mode runs exactly the requested iterations") {
  std::mt19937_64 rng(29);
  const CMatrix A = random_wellconditioned(30, rng);
  const CVector rhs = random_cvector(30, rng);
  const CVector x2 = gmres_fixed_steps(matrix_op(A), rhs, 2);
  const CVector x5 = gmres_fixed_steps(matrix_op(A), rhs, 5);
  const double r2 = (rhs - A * x2).norm() / rhs.norm();
  const double r5 = (rhs - A * x5).norm() / rhs.norm();
  CHECK(r5 < r2);  // more steps, smaller residual on a definite problem
  CHECK(r2 < 1.0);
}

TEST_CASE("zero right-hand side returns zero immediately") {
  const LinOp op = [](const CVector& v) { return v; };
  const auto [x, report] = gmres(op, CVector::Zero(10), {});
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("config validation") {
  const LinOp op = [](const CVector& v) { return v; };
  KrylovConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(gmres(op, CVector::Ones(4), bad), std::invalid_argument);
  bad.tol = 1e-8;
  bad.restart = 0;
  CHECK_THROWS_AS(gmres(op, CVector::Ones(4), bad), std::invalid_argument);
  CHECK_THROWS_AS(gmres_fixed_steps(op, CVector::Ones(4), 0),
                  std::invalid_argument);
}
