// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/hps.h"

#include <exception>
#include <memory>
#include <string>

#include "hps/driver.hpp"

namespace {

thread_local std::string g_last_error;

hps_status fail(hps_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

hps_status capture(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e))
    return fail(HPS_ERROR_INVALID_ARGUMENT, e.what());
  return fail(HPS_ERROR_INTERNAL, e.what());
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

hps::RunConfig to_config(const hps_options& o) {
  hps::RunConfig config;
  switch (o.problem) {
    case HPS_PROBLEM_BUMP:
      config.problem = hps::ProblemKind::kBump;
      break;
    case HPS_PROBLEM_PLANEWAVE:
      config.problem = hps::ProblemKind::kPlanewave;
      break;
    default:
      throw std::invalid_argument("options: unknown problem kind");
  }
  switch (o.mode) {
    case HPS_MODE_DIRECT:
      config.mode = hps::SolveMode::kDirect;
      break;
    case HPS_MODE_MG:
      config.mode = hps::SolveMode::kMg;
      break;
    case HPS_MODE_UNPRECONDITIONED:
      config.mode = hps::SolveMode::kUnpreconditioned;
      break;
    case HPS_MODE_EXACT_COARSE:
      config.mode = hps::SolveMode::kExactCoarse;
      break;
    default:
      throw std::invalid_argument("options: unknown solve mode");
  }
  config.elements = o.elements;
  config.degree = o.degree;
  config.ppw = o.ppw;
  config.kappa = o.kappa;
  config.depth = o.levels;
  config.gamma = o.gamma;
  config.coarse_iters = o.coarse_iters;
  config.tol = o.tol;
  config.restart = o.restart;
  config.max_iters = o.max_iters;
  return config;
}

std::string run_csv(const hps::RunResult& r) {
  hps::SweepCell cell;
  cell.levels = r.depth_used;
  cell.gamma = r.config.gamma;
  cell.coarse_iters = r.config.coarse_iters;
  cell.converged = r.report.converged;
  cell.report = r.report;
  return hps::sweep_csv({cell});
}

}  // namespace

struct hps_run {
  hps::RunConfig config;
  hps::RunResult result;
  bool executed = false;
};

extern "C" {

void hps_options_init(hps_options* options) {
  if (!options) return;
  const hps::RunConfig defaults;
  options->problem = HPS_PROBLEM_BUMP;
  options->elements = defaults.elements;
  options->degree = defaults.degree;
  options->ppw = defaults.ppw;
  options->kappa = 0.0;
  options->mode = HPS_MODE_MG;
  options->levels = 0;
  options->gamma = defaults.gamma;
  options->coarse_iters = defaults.coarse_iters;
  options->tol = defaults.tol;
  options->restart = defaults.restart;
  options->max_iters = defaults.max_iters;
}

hps_status hps_run_create(const hps_options* options, hps_run** out) {
  if (!options || !out) return fail(HPS_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    auto run = std::make_unique<hps_run>();
    run->config = to_config(*options);
    hps::validate_config(run->config);
    *out = run.release();
    return HPS_OK;
  } catch (const std::exception& e) {
    return capture(e);
  }
}

void hps_run_destroy(hps_run* run) { delete run; }

hps_status hps_run_execute(hps_run* run) {
  if (!run) return fail(HPS_ERROR_INVALID_ARGUMENT, "null run");
  try {
    run->result = hps::run_experiment(run->config);
    run->executed = true;
    if (!run->result.report.converged)
      return fail(HPS_ERROR_NO_CONVERGENCE,
                  "solver did not reach the residual target within max-iters");
    return HPS_OK;
  } catch (const std::exception& e) {
    return capture(e);
  }
}

int hps_run_converged(const hps_run* run) {
  return run && run->executed && run->result.report.converged ? 1 : 0;
}

int hps_run_iterations(const hps_run* run) {
  return run && run->executed ? run->result.report.iterations : -1;
}

double hps_run_final_residual(const hps_run* run) {
  return run && run->executed ? run->result.report.final_residual : -1.0;
}

double hps_run_build_seconds(const hps_run* run) {
  return run && run->executed ? run->result.report.wall_build : -1.0;
}

double hps_run_solve_seconds(const hps_run* run) {
  return run && run->executed ? run->result.report.wall_solve : -1.0;
}

uint64_t hps_run_precond_bytes(const hps_run* run) {
  return run && run->executed ? run->result.report.precond_memory : 0;
}

double hps_run_l2_error(const hps_run* run) {
  return run && run->executed ? run->result.l2_error : -1.0;
}

double hps_run_linf_error(const hps_run* run) {
  return run && run->executed ? run->result.linf_error : -1.0;
}

hps_status hps_run_write_report(const hps_run* run, const char* path) {
  if (!run || !path) return fail(HPS_ERROR_INVALID_ARGUMENT, "null argument");
  if (!run->executed)
    return fail(HPS_ERROR_INVALID_ARGUMENT, "run has not been executed");
  try {
    const std::string p = path;
    if (ends_with(p, ".json"))
      hps::write_text_file(p, hps::report_json(run->result));
    else if (ends_with(p, ".csv"))
      hps::write_text_file(p, run_csv(run->result));
    else
      return fail(HPS_ERROR_INVALID_ARGUMENT,
                  "report path must end in .json or .csv");
    return HPS_OK;
  } catch (const std::exception& e) {
    return fail(HPS_ERROR_IO, e.what());
  }
}

hps_status hps_run_dump_field(hps_run* run, const char* path) {
  if (!run || !path) return fail(HPS_ERROR_INVALID_ARGUMENT, "null argument");
  if (!run->executed)
    return fail(HPS_ERROR_INVALID_ARGUMENT, "run has not been executed");
  try {
    if (!run->result.field) {
      // Recovery was skipped during the solve; redo the run with the field.
      hps::RunConfig config = run->config;
      config.want_field = true;
      run->result = hps::run_experiment(config);
    }
    if (!run->result.field)
      return fail(HPS_ERROR_INTERNAL, "no field available");
    const std::string p = path;
    if (ends_with(p, ".csv"))
      hps::dump_field(*run->result.field, p, hps::FieldFormat::kCsv);
    else if (ends_with(p, ".bin"))
      hps::dump_field(*run->result.field, p, hps::FieldFormat::kBinary);
    else
      return fail(HPS_ERROR_INVALID_ARGUMENT,
                  "field path must end in .csv or .bin");
    return HPS_OK;
  } catch (const std::exception& e) {
    return fail(HPS_ERROR_IO, e.what());
  }
}

hps_status hps_sweep_run(const hps_options* base, const int* levels,
                         size_t num_levels, const int* gammas, size_t num_gammas,
                         const int* coarse_iters, size_t num_coarse_iters,
                         const char* path, int* all_converged) {
  if (!base || !levels || !gammas || !coarse_iters || !path)
    return fail(HPS_ERROR_INVALID_ARGUMENT, "null argument");
  if (all_converged) *all_converged = 0;
  try {
    const hps::RunConfig config = to_config(*base);
    hps::SweepAxes axes;
    axes.depths.assign(levels, levels + num_levels);
    axes.gammas.assign(gammas, gammas + num_gammas);
    axes.coarse_iters.assign(coarse_iters, coarse_iters + num_coarse_iters);
    const auto cells = hps::run_sweep(config, axes);

    const std::string p = path;
    if (ends_with(p, ".json"))
      hps::write_text_file(p, hps::sweep_json(config, cells));
    else if (ends_with(p, ".csv"))
      hps::write_text_file(p, hps::sweep_csv(cells));
    else
      return fail(HPS_ERROR_INVALID_ARGUMENT,
                  "sweep path must end in .json or .csv");

    bool ok = true;
    for (const auto& cell : cells) ok = ok && cell.converged;
    if (all_converged) *all_converged = ok ? 1 : 0;
    if (!ok)
      return fail(HPS_ERROR_NO_CONVERGENCE, "one or more sweep cells failed");
    return HPS_OK;
  } catch (const std::exception& e) {
    return capture(e);
  }
}

const char* hps_last_error(void) { return g_last_error.c_str(); }

const char* hps_version(void) { return "0.1.0"; }

}  // extern "C"
