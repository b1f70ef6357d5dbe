// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hps/krylov.hpp"
#include "hps/problems.hpp"

namespace hps {

enum class SolveMode { kDirect, kMg, kUnpreconditioned, kExactCoarse };

std::string to_string(SolveMode mode);
std::string to_string(ProblemKind kind);

/// One experiment configuration.  Exactly one of ppw/kappa must be set
/// (positive); depth = 0 means the full hierarchy.  gamma/coarse_iters/depth
/// apply to preconditioned modes only and are rejected elsewhere when set to
/// non-default values.
struct RunConfig {
  ProblemKind problem = ProblemKind::kBump;
  int elements = 16;  // n, elements per side
  int degree = 8;     // N, polynomial degree
  double ppw = 9.6;   // points per wavelength; 0 = unset
  double kappa = 0.0; // 0 = unset
  SolveMode mode = SolveMode::kMg;
  int depth = 0;
  int gamma = 1;
  int coarse_iters = 4;
  double tol = 1e-8;
  int restart = 60;
  int max_iters = 2000;
  bool want_field = false;
  bool record_history = true;
};

/// Throws std::invalid_argument on contract violations; returns the resolved
/// wavenumber.
double validate_config(const RunConfig& config);

struct RunResult {
  RunConfig config;
  double kappa = 0.0;
  int total_levels = 0;
  int depth_used = 0;
  SolveReport report;
  std::optional<GlobalField> field;
  double l2_error = -1.0;    // filled when the problem has an exact solution
  double linf_error = -1.0;
};

RunResult run_experiment(const RunConfig& config);

struct SweepAxes {
  std::vector<int> depths;
  std::vector<int> gammas;
  std::vector<int> coarse_iters;
};

struct SweepCell {
  int levels = 0;
  int gamma = 0;
  int coarse_iters = 0;
  bool converged = false;
  std::string error;  // nonempty when the cell failed outright
  SolveReport report;
};

/// Runs the depth x gamma x coarse-iteration grid on one problem; mesh,
/// elements, and skeleton are built once, the hierarchy once per depth.
/// Cell failures are recorded and the sweep continues.
std::vector<SweepCell> run_sweep(const RunConfig& base, const SweepAxes& axes);

std::string report_json(const RunResult& result);
std::string sweep_json(const RunConfig& base, const std::vector<SweepCell>& cells);
std::string sweep_csv(const std::vector<SweepCell>& cells);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hps
