// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library C interface end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "hps/hps.h"

namespace {

hps_options small_options() {
  hps_options o;
  hps_options_init(&o);
  o.problem = HPS_PROBLEM_PLANEWAVE;
  o.elements = 4;
  o.degree = 8;
  o.ppw = 0.0;
  o.kappa = 12.0;
  o.mode = HPS_MODE_DIRECT;
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("defaults are the desk-scale configuration") {
  hps_options o;
  hps_options_init(&o);
  CHECK(o.problem == HPS_PROBLEM_BUMP);
  CHECK(o.elements == 16);
  CHECK(o.degree == 8);
  CHECK(o.ppw == 9.6);
  CHECK(o.kappa == 0.0);
  CHECK(o.tol == 1e-8);
  CHECK(o.restart == 60);
}

TEST_CASE("create rejects invalid configurations with a message") {
  hps_options o = small_options();
  o.elements = 5;
  hps_run* run = nullptr;
  CHECK(hps_run_create(&o, &run) == HPS_ERROR_INVALID_ARGUMENT);
  CHECK(run == nullptr);
  CHECK(std::strlen(hps_last_error()) > 0);

  o = small_options();
  o.ppw = 9.6;  // both ppw and kappa set
  CHECK(hps_run_create(&o, &run) == HPS_ERROR_INVALID_ARGUMENT);

  o = small_options();
  o.mode = 99;
  CHECK(hps_run_create(&o, &run) == HPS_ERROR_INVALID_ARGUMENT);

  CHECK(hps_run_create(nullptr, &run) == HPS_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("direct solve through the C interface") {
  hps_options o = small_options();
  hps_run* run = nullptr;
  REQUIRE(hps_run_create(&o, &run) == HPS_OK);
  REQUIRE(run != nullptr);
  CHECK(hps_run_execute(run) == HPS_OK);
  CHECK(hps_run_converged(run) == 1);
  CHECK(hps_run_iterations(run) == 0);
  CHECK(hps_run_final_residual(run) < 1e-10);
  CHECK(hps_run_build_seconds(run) >= 0.0);
  CHECK(hps_run_solve_seconds(run) >= 0.0);
  CHECK(hps_run_precond_bytes(run) > 0);
  CHECK(hps_run_l2_error(run) >= 0.0);
  CHECK(hps_run_l2_error(run) < 1e-3);  // N=8 discretization error at kappa=12

  const std::string report = "/tmp/hps_capi_report.json";
  CHECK(hps_run_write_report(run, report.c_str()) == HPS_OK);
  const std::string text = slurp(report);
  CHECK(text.find("hps-report/1") != std::string::npos);
  std::remove(report.c_str());

  const std::string csv = "/tmp/hps_capi_report.csv";
  CHECK(hps_run_write_report(run, csv.c_str()) == HPS_OK);
  CHECK(slurp(csv).rfind("levels,gamma,coarse_iters,", 0) == 0);
  std::remove(csv.c_str());

  CHECK(hps_run_write_report(run, "/tmp/hps_capi_report.txt") ==
        HPS_ERROR_INVALID_ARGUMENT);

  const std::string field = "/tmp/hps_capi_field.bin";
  CHECK(hps_run_dump_field(run, field.c_str()) == HPS_OK);
  std::ifstream in(field, std::ios::binary);
  char magic[8] = {};
  in.read(magic, 8);
  CHECK(std::memcmp(magic, "HPSFLD01", 8) == 0);
  std::remove(field.c_str());

  hps_run_destroy(run);
}

TEST_CASE("mg mode and non-convergence reporting") {
  hps_options o = small_options();
  o.problem = HPS_PROBLEM_BUMP;
  o.mode = HPS_MODE_MG;
  o.levels = 2;
  o.coarse_iters = 4;
  hps_run* run = nullptr;
  REQUIRE(hps_run_create(&o, &run) == HPS_OK);
  CHECK(hps_run_execute(run) == HPS_OK);
  CHECK(hps_run_iterations(run) > 0);
  hps_run_destroy(run);

  o.max_iters = 1;
  REQUIRE(hps_run_create(&o, &run) == HPS_OK);
  CHECK(hps_run_execute(run) == HPS_ERROR_NO_CONVERGENCE);
  CHECK(hps_run_converged(run) == 0);
  CHECK(hps_run_iterations(run) == 1);
  hps_run_destroy(run);
}

TEST_CASE("sweep through the C interface") {
  hps_options o = small_options();
  o.problem = HPS_PROBLEM_BUMP;
  o.mode = HPS_MODE_MG;
  const int levels[] = {2, 3};
  const int gammas[] = {1};
  const int cis[] = {4};
  const std::string path = "/tmp/hps_capi_sweep.csv";
  int ok = 0;
  CHECK(hps_sweep_run(&o, levels, 2, gammas, 1, cis, 1, path.c_str(), &ok) ==
        HPS_OK);
  CHECK(ok == 1);
  const std::string text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  std::remove(path.c_str());

  CHECK(hps_sweep_run(&o, nullptr, 0, gammas, 1, cis, 1, path.c_str(), &ok) ==
        HPS_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("version string is set") {
  CHECK(std::strlen(hps_version()) > 0);
}
