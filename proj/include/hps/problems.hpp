// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hps/types.hpp"

namespace hps {

struct Mesh;
struct FaceGraph;
struct ElementRecord;

enum class ProblemKind { kBump, kPlanewave };

/// Problem data for -Delta u - kappa^2 (1 - b) u = s with impedance data t on
/// the boundary of the unit square.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::kBump;
  double kappa = 0.0;
  double eta = 0.0;  // impedance parameter, equal to kappa by default
  std::function<double(double, double)> b;
  std::function<Complex(double, double)> source;
  // t(x, y, nx, ny): incoming impedance data for outward normal (nx, ny).
  std::function<Complex(double, double, double, double)> boundary_data;
  std::function<Complex(double, double)> exact;  // planewave only

  /// Scattering off a Gaussian bump: b = 1.5 exp(-160 r^2) centered in the
  /// domain, volume source -kappa^2 b e^{i kappa x}, zero impedance data.
  static ProblemSpec bump(double kappa);

  /// Manufactured plane wave e^{i kappa (x cos0 + y sin0)}; the impedance
  /// data is the analytic incoming trace, so the discrete solution converges
  /// to the exact field.
  static ProblemSpec planewave(double kappa, double angle = 0.0);
};

/// Wavenumber giving `ppw` points per wavelength on an n-by-n mesh of degree
/// N elements: kappa = 2 pi N n / ppw.
double wavenumber_from_ppw(double ppw, int elements_per_side, int degree);

/// Solution on the corner-free grids of every element.
struct GlobalField {
  int n = 0;
  int order = 0;
  double kappa = 0.0;
  std::vector<CVector> values;  // per element, compressed node order
};

/// Reassembles element solutions (and stitches them into a field) from the
/// skeleton unknowns g.
GlobalField recover_solution(const Mesh& mesh,
                             const std::vector<ElementRecord>& elements,
                             const FaceGraph& graph, const CVector& g);

/// Quadrature-weighted relative L2 error and relative max error against an
/// exact solution.
std::pair<double, double> discrete_error(
    const GlobalField& field, const std::function<Complex(double, double)>& exact);

/// Largest impedance mismatch across interior faces, relative to the outgoing
/// data norm: checks that neighboring elements agree on the shared traces.
double impedance_mismatch(const Mesh& mesh,
                          const std::vector<ElementRecord>& elements,
                          const FaceGraph& graph, const CVector& g,
                          const GlobalField& field);

/// Largest solution jump across interior faces (same physical points seen
/// from the two sides).
double field_jump(const Mesh& mesh, const GlobalField& field);

enum class FieldFormat { kCsv, kBinary };

void dump_field(const GlobalField& field, const std::string& path,
                FieldFormat format);
GlobalField read_field_binary(const std::string& path);

}  // namespace hps
