// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver; all solver work happens behind the C API.

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hps/hps.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitError = 3;

std::vector<int> parse_int_list(const std::string& text) {
  // Comma-separated integers with a..b ranges, e.g. "2..8" or "4,5,6".
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("bad range: " + item);
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

struct SweepSpec {
  std::vector<int> levels{0};
  std::vector<int> gammas{1};
  std::vector<int> coarse_iters{4};
};

SweepSpec parse_sweep(const std::string& text) {
  // Semicolon-separated key=list entries: "levels=2..8;gamma=1;ci=4,5,6".
  SweepSpec spec;
  std::stringstream ss(text);
  std::string entry;
  bool have_levels = false;
  while (std::getline(ss, entry, ';')) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep entry needs key=list: " + entry);
    const std::string key = entry.substr(0, eq);
    const auto values = parse_int_list(entry.substr(eq + 1));
    if (key == "levels") {
      spec.levels = values;
      have_levels = true;
    } else if (key == "gamma") {
      spec.gammas = values;
    } else if (key == "ci") {
      spec.coarse_iters = values;
    } else {
      throw std::invalid_argument("unknown sweep key: " + key);
    }
  }
  if (!have_levels)
    throw std::invalid_argument("sweep spec must set levels=...");
  return spec;
}

int status_to_exit(hps_status status) {
  switch (status) {
    case HPS_OK:
      return kExitOk;
    case HPS_ERROR_NO_CONVERGENCE:
      return kExitNoConvergence;
    case HPS_ERROR_INVALID_ARGUMENT:
      return kExitInvalidConfig;
    default:
      return kExitError;
  }
}

int fail(hps_status status) {
  std::fprintf(stderr, "error: %s\n", hps_last_error());
  return status_to_exit(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hps2d: spectral-element Helmholtz solver driven by hierarchical "
      "impedance-map merging"};
  app.set_version_flag("--version", hps_version());

  hps_options options;
  hps_options_init(&options);

  std::string problem = "bump";
  app.add_option("--problem", problem, "Problem instance")
      ->check(CLI::IsMember({"bump", "planewave"}))
      ->capture_default_str();
  app.add_option("--elements", options.elements,
                 "Elements per side (power of two)")
      ->capture_default_str();
  app.add_option("--degree", options.degree, "Polynomial degree")
      ->capture_default_str();

  double ppw = 0.0, kappa = 0.0;
  auto* ppw_opt =
      app.add_option("--ppw", ppw, "Points per wavelength (default 9.6)");
  auto* kappa_opt = app.add_option("--kappa", kappa, "Wavenumber");
  kappa_opt->excludes(ppw_opt);

  std::string mode = "mg";
  app.add_option("--mode", mode, "Solver mode")
      ->check(CLI::IsMember({"direct", "mg", "unpreconditioned", "exact-coarse"}))
      ->capture_default_str();
  app.add_option("--levels", options.levels,
                 "Hierarchy depth used by the preconditioner (0 = full)");
  app.add_option("--gamma", options.gamma, "Coarse calls per level (mg mode)")
      ->capture_default_str();
  app.add_option("--coarse-iters", options.coarse_iters,
                 "Coarse GMRES iterations (mg mode)")
      ->capture_default_str();
  app.add_option("--tol", options.tol, "Relative residual target")
      ->capture_default_str();
  app.add_option("--restart", options.restart, "GMRES restart length")
      ->capture_default_str();
  app.add_option("--max-iters", options.max_iters, "Outer iteration cap")
      ->capture_default_str();

  std::string report_path, field_path, sweep_spec;
  app.add_option("--report", report_path, "Write the run report (.json or .csv)");
  app.add_option("--dump-field", field_path,
                 "Write the solution field (.csv or .bin)");
  app.add_option("--sweep", sweep_spec,
                 "Run a sweep, e.g. \"levels=2..8;gamma=1;ci=4,5,6\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  options.problem = (problem == "bump") ? HPS_PROBLEM_BUMP : HPS_PROBLEM_PLANEWAVE;
  const std::map<std::string, int> modes = {
      {"direct", HPS_MODE_DIRECT},
      {"mg", HPS_MODE_MG},
      {"unpreconditioned", HPS_MODE_UNPRECONDITIONED},
      {"exact-coarse", HPS_MODE_EXACT_COARSE}};
  options.mode = modes.at(mode);
  if (kappa_opt->count() > 0) {
    options.kappa = kappa;
    options.ppw = 0.0;
  } else if (ppw_opt->count() > 0) {
    options.ppw = ppw;
  }

  if (!sweep_spec.empty()) {
    SweepSpec spec;
    try {
      spec = parse_sweep(sweep_spec);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kExitInvalidConfig;
    }
    if (report_path.empty()) {
      std::fprintf(stderr, "error: --sweep requires --report <path>\n");
      return kExitInvalidConfig;
    }
    int all_converged = 0;
    const hps_status status = hps_sweep_run(
        &options, spec.levels.data(), spec.levels.size(), spec.gammas.data(),
        spec.gammas.size(), spec.coarse_iters.data(), spec.coarse_iters.size(),
        report_path.c_str(), &all_converged);
    if (status != HPS_OK) return fail(status);
    std::printf("sweep complete: %zu cells, report written to %s\n",
                spec.levels.size() * spec.gammas.size() * spec.coarse_iters.size(),
                report_path.c_str());
    return kExitOk;
  }

  hps_run* run = nullptr;
  hps_status status = hps_run_create(&options, &run);
  if (status != HPS_OK) return fail(status);

  status = hps_run_execute(run);
  if (status != HPS_OK && status != HPS_ERROR_NO_CONVERGENCE) {
    hps_run_destroy(run);
    return fail(status);
  }

  std::printf("mode=%s converged=%s iterations=%d residual=%.3e\n", mode.c_str(),
              hps_run_converged(run) ? "yes" : "no", hps_run_iterations(run),
              hps_run_final_residual(run));
  std::printf("build=%.3fs solve=%.3fs precond-memory=%.1f MiB\n",
              hps_run_build_seconds(run), hps_run_solve_seconds(run),
              static_cast<double>(hps_run_precond_bytes(run)) / (1024.0 * 1024.0));
  if (hps_run_l2_error(run) >= 0.0)
    std::printf("l2-error=%.3e linf-error=%.3e\n", hps_run_l2_error(run),
                hps_run_linf_error(run));

  int exit_code = status_to_exit(status);
  if (!report_path.empty()) {
    const hps_status s = hps_run_write_report(run, report_path.c_str());
    if (s != HPS_OK) exit_code = fail(s);
  }
  if (!field_path.empty()) {
    const hps_status s = hps_run_dump_field(run, field_path.c_str());
    if (s != HPS_OK) exit_code = fail(s);
  }
  hps_run_destroy(run);
  return exit_code;
}
