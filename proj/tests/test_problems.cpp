// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "hps/dissection.hpp"
#include "hps/problems.hpp"

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

GlobalField solve_and_recover(const Built& b) {
  const MergeHierarchy h = build_hierarchy(b.sys);
  const CVector g = direct_solve(h, b.sys.rhs);
  return recover_solution(b.mesh, b.elements, b.sys.graph, g);
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/hps_test_") + name;
}

}  // namespace

TEST_CASE("wavenumber from points per wavelength") {
  CHECK(wavenumber_from_ppw(9.6, 64, 16) ==
        doctest::Approx(2.0 * M_PI * 1024.0 / 9.6).epsilon(1e-14));
  CHECK(wavenumber_from_ppw(9.6, 64, 16) == doctest::Approx(670.2).epsilon(1e-4));
  CHECK(wavenumber_from_ppw(9.6, 16, 8) == doctest::Approx(83.8).epsilon(1e-3));
  CHECK(wavenumber_from_ppw(1e9, 16, 8) < 1e-5);  // ppw -> infinity, kappa -> 0
  CHECK_THROWS_AS(wavenumber_from_ppw(2.0, 16, 8), std::invalid_argument);
}

TEST_CASE("bump coefficient peaks at the center and vanishes at corners") {
  const ProblemSpec spec = ProblemSpec::bump(10.0);
  CHECK(spec.b(0.5, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(spec.b(0.0, 0.0) < 1e-6);
  CHECK(spec.b(1.0, 1.0) < 1e-6);
  CHECK(spec.eta == 10.0);
  // Source carries the plane-wave phase factor.
  const Complex s = spec.source(0.5, 0.5);
  CHECK(std::abs(s + 100.0 * 1.5 * std::exp(kI * 5.0)) < 1e-12);
}

TEST_CASE("direct solve of the plane-wave problem hits the manufactured solution") {
  const auto b = build(4, 16, ProblemSpec::planewave(20.0));
  const GlobalField field = solve_and_recover(b);
  const auto [l2, linf] = discrete_error(field, b.mesh.problem.exact);
  CHECK(l2 < 1e-8);
  CHECK(linf < 1e-7);
}

TEST_CASE("zero data yields a zero field") {
  ProblemSpec spec = ProblemSpec::planewave(4.0);
  spec.source = [](double, double) { return Complex(0.0, 0.0); };
  spec.boundary_data = [](double, double, double, double) {
    return Complex(0.0, 0.0);
  };
  spec.exact = nullptr;
  const auto b = build(2, 4, spec);
  const GlobalField field = solve_and_recover(b);
  for (const auto& values : field.values) CHECK(values.norm() == 0.0);
}

TEST_CASE("recovered field is continuous across faces") {
  const auto b = build(4, 8, ProblemSpec::bump(12.0));
  const GlobalField field = solve_and_recover(b);
  double umax = 0.0;
  for (const auto& values : field.values)
    umax = std::max(umax, values.cwiseAbs().maxCoeff());
  CHECK(field_jump(b.mesh, field) < 1e-7 * umax);
}

TEST_CASE("plane-wave error falls at least two orders per degree doubling") {
  const double kappa = 10.0;
  double previous = 0.0;
  for (int order : {4, 8, 16}) {
    const auto b = build(4, order, ProblemSpec::planewave(kappa));
    const GlobalField field = solve_and_recover(b);
    const auto [l2, linf] = discrete_error(field, b.mesh.problem.exact);
    if (order > 4) CHECK(l2 <= 1e-2 * previous);
    previous = l2;
    if (order == 16) CHECK(l2 <= 1e-8);
  }
}

TEST_CASE("pipeline is linear in sources and boundary data") {
  // Same operator (the bump coefficient) under three data sets: the bump
  // source, synthetic boundary data, and their sum.
  const double kappa = 6.0;
  const ProblemSpec bump = ProblemSpec::bump(kappa);

  ProblemSpec data_only = ProblemSpec::bump(kappa);
  data_only.source = [](double, double) { return Complex(0.0, 0.0); };
  data_only.boundary_data = [kappa](double x, double y, double nx, double ny) {
    return std::exp(kI * kappa * (0.3 * x + 0.7 * y)) * Complex(nx + 0.5, ny);
  };

  ProblemSpec combined = ProblemSpec::bump(kappa);
  combined.source = bump.source;
  combined.boundary_data = data_only.boundary_data;

  const auto ba = build(2, 6, bump);
  const auto bb = build(2, 6, data_only);
  const auto bc = build(2, 6, combined);
  const GlobalField fa = solve_and_recover(ba);
  const GlobalField fb = solve_and_recover(bb);
  const GlobalField fc = solve_and_recover(bc);
  for (int eid = 0; eid < 4; ++eid) {
    const CVector sum = fa.values[eid] + fb.values[eid];
    CHECK((fc.values[eid] - sum).norm() < 1e-10 * std::max(1.0, sum.norm()));
  }
}

TEST_CASE("discrete_error on trivial fields") {
  const auto b = build(2, 4, ProblemSpec::planewave(3.0));
  GlobalField field = solve_and_recover(b);

  // Field identical to the exact samples: zero error.
  const GllRule rule = gll_rule(b.mesh.order);
  const IndexSets sets = build_index_sets(b.mesh.order);
  const int np = b.mesh.order + 1;
  for (int eid = 0; eid < 4; ++eid) {
    const Eigen::Vector2d o = b.mesh.origin(eid);
    for (int k = 0; k < sets.total(); ++k) {
      const int full = sets.noncorner[k];
      const double x = o.x() + 0.5 * (rule.nodes[full / np] + 1.0) * b.mesh.h();
      const double y = o.y() + 0.5 * (rule.nodes[full % np] + 1.0) * b.mesh.h();
      field.values[eid][k] = b.mesh.problem.exact(x, y);
    }
  }
  auto [l2, linf] = discrete_error(field, b.mesh.problem.exact);
  CHECK(l2 == 0.0);
  CHECK(linf == 0.0);

  // Constant offset: the max error is epsilon over the exact sup-norm (= 1).
  const double eps = 1e-3;
  for (auto& values : field.values) values.array() += Complex(eps, 0.0);
  std::tie(l2, linf) = discrete_error(field, b.mesh.problem.exact);
  CHECK(linf == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("binary field dump round-trips bit-exactly") {
  const auto b = build(2, 5, ProblemSpec::bump(4.0));
  const GlobalField field = solve_and_recover(b);
  const std::string path = temp_path("field.bin");
  dump_field(field, path, FieldFormat::kBinary);
  const GlobalField back = read_field_binary(path);
  CHECK(back.n == field.n);
  CHECK(back.order == field.order);
  CHECK(back.kappa == field.kappa);
  for (int eid = 0; eid < 4; ++eid)
    CHECK((back.values[eid] - field.values[eid]).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("csv field dump has one header row plus one row per node") {
  const auto b = build(2, 5, ProblemSpec::bump(4.0));
  const GlobalField field = solve_and_recover(b);
  const std::string path = temp_path("field.csv");
  dump_field(field, path, FieldFormat::kCsv);
  std::ifstream in(path);
  REQUIRE(in.good());
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  const int expected = 4 * ((6 * 6) - 4) + 1;
  CHECK(rows == expected);
  std::remove(path.c_str());
}

TEST_CASE("empty fields and bad files are rejected") {
  GlobalField empty;
  CHECK_THROWS_AS(dump_field(empty, temp_path("x.bin"), FieldFormat::kBinary),
                  std::invalid_argument);
  const std::string path = temp_path("garbage.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a field file";
  }
  CHECK_THROWS_AS(read_field_binary(path), std::runtime_error);
  CHECK_THROWS_AS(read_field_binary(temp_path("missing.bin")), std::runtime_error);
  std::remove(path.c_str());
}
