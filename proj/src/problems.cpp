// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/problems.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "hps/mesh.hpp"
#include "hps/skeleton.hpp"

namespace hps {

ProblemSpec ProblemSpec::bump(double kappa) {
  ProblemSpec spec;
  spec.kind = ProblemKind::kBump;
  spec.kappa = kappa;
  spec.eta = kappa;
  spec.b = [](double x, double y) {
    const double dx = x - 0.5;
    const double dy = y - 0.5;
    return 1.5 * std::exp(-160.0 * (dx * dx + dy * dy));
  };
  spec.source = [kappa, b = spec.b](double x, double y) {
    return -kappa * kappa * b(x, y) * std::exp(kI * kappa * x);
  };
  spec.boundary_data = [](double, double, double, double) {
    return Complex(0.0, 0.0);
  };
  return spec;
}

ProblemSpec ProblemSpec::planewave(double kappa, double angle) {
  ProblemSpec spec;
  spec.kind = ProblemKind::kPlanewave;
  spec.kappa = kappa;
  spec.eta = kappa;
  const double cx = std::cos(angle);
  const double cy = std::sin(angle);
  spec.b = [](double, double) { return 0.0; };
  spec.source = [](double, double) { return Complex(0.0, 0.0); };
  spec.exact = [kappa, cx, cy](double x, double y) {
    return std::exp(kI * kappa * (x * cx + y * cy));
  };
  spec.boundary_data = [kappa, cx, cy, exact = spec.exact](double x, double y,
                                                           double nx, double ny) {
    // d/dn e^{ik d.x} + i eta u with eta = kappa.
    return kI * kappa * (nx * cx + ny * cy + 1.0) * exact(x, y);
  };
  return spec;
}

double wavenumber_from_ppw(double ppw, int elements_per_side, int degree) {
  if (!(ppw > 2.0))
    throw std::invalid_argument("wavenumber_from_ppw: need more than 2 points per wavelength");
  return 2.0 * M_PI * static_cast<double>(degree) * elements_per_side / ppw;
}

GlobalField recover_solution(const Mesh& mesh,
                             const std::vector<ElementRecord>& elements,
                             const FaceGraph& graph, const CVector& g) {
  const GllRule rule = gll_rule(mesh.order);
  const int sl = mesh.order - 1;
  const int bs = 2 * sl;

  GlobalField field;
  field.n = mesh.n;
  field.order = mesh.order;
  field.kappa = mesh.problem.kappa;
  field.values.resize(mesh.num_elements());

  constexpr std::array<Side, 4> kSides = {Side::kLeft, Side::kRight,
                                          Side::kBottom, Side::kTop};
  for (int eid = 0; eid < mesh.num_elements(); ++eid) {
    const ElementRecord& rec = elements[eid];
    CVector gb(4 * sl);
    for (Side s : kSides) {
      const int f = graph.face_of_element[eid][side_index(s)];
      CVector data;
      if (f >= 0) {
        const int slot = (graph.faces[f].e1 == eid) ? 1 : 0;
        data = g.segment(static_cast<Eigen::Index>(f) * bs + slot * sl, sl);
      } else {
        data = boundary_side_data(mesh, rule, eid, s);
      }
      gb.segment(side_index(s) * sl, sl) = data;
    }
    field.values[eid] = rec.ops->solve(gb, rec.interior_source);
  }
  return field;
}

std::pair<double, double> discrete_error(
    const GlobalField& field,
    const std::function<Complex(double, double)>& exact) {
  const GllRule rule = gll_rule(field.order);
  const IndexSets sets = build_index_sets(field.order);
  const double h = 1.0 / field.n;
  const RVector mass = 0.5 * h * rule.weights;
  const int np = field.order + 1;

  double err2 = 0.0, ref2 = 0.0, errmax = 0.0, refmax = 0.0;
  for (int eid = 0; eid < field.n * field.n; ++eid) {
    const double ox = h * (eid % field.n);
    const double oy = h * (eid / field.n);
    for (int k = 0; k < sets.total(); ++k) {
      const int full = sets.noncorner[k];
      const int i = full / np;
      const int j = full % np;
      const double x = ox + 0.5 * (rule.nodes[i] + 1.0) * h;
      const double y = oy + 0.5 * (rule.nodes[j] + 1.0) * h;
      const Complex ref = exact(x, y);
      const double w = mass[i] * mass[j];
      const double diff = std::abs(field.values[eid][k] - ref);
      err2 += w * diff * diff;
      ref2 += w * std::norm(ref);
      errmax = std::max(errmax, diff);
      refmax = std::max(refmax, std::abs(ref));
    }
  }
  if (ref2 == 0.0) return {std::sqrt(err2), errmax};
  return {std::sqrt(err2 / ref2), errmax / refmax};
}

double impedance_mismatch(const Mesh& mesh,
                          const std::vector<ElementRecord>& elements,
                          const FaceGraph& graph, const CVector& g,
                          const GlobalField& field) {
  const int sl = mesh.order - 1;
  const int bs = 2 * sl;
  double worst = 0.0;
  double scale = 0.0;
  for (int f = 0; f < graph.num_faces(); ++f) {
    const Face& face = graph.faces[f];
    // Transmission: the data incoming to e2 (slot 0) is minus the outgoing
    // data of e1 through the shared side, and vice versa.
    const CVector out1 =
        elements[face.e1].ops->impedance_out() * field.values[face.e1];
    const CVector out2 =
        elements[face.e2].ops->impedance_out() * field.values[face.e2];
    const CVector in2 = g.segment(static_cast<Eigen::Index>(f) * bs, sl);
    const CVector in1 = g.segment(static_cast<Eigen::Index>(f) * bs + sl, sl);
    worst = std::max(
        worst, (out1.segment(side_index(face.s1) * sl, sl) + in2).norm());
    worst = std::max(
        worst, (out2.segment(side_index(face.s2) * sl, sl) + in1).norm());
    scale = std::max(scale, out1.norm());
    scale = std::max(scale, out2.norm());
  }
  return scale > 0.0 ? worst / scale : worst;
}

double field_jump(const Mesh& mesh, const GlobalField& field) {
  const IndexSets sets = build_index_sets(mesh.order);
  const FaceGraph graph = build_face_graph(mesh.n);
  const int sl = mesh.order - 1;
  double worst = 0.0;
  for (const Face& face : graph.faces) {
    const auto& side1 = sets.side(face.s1);
    const auto& side2 = sets.side(face.s2);
    for (int k = 0; k < sl; ++k) {
      const Complex a =
          field.values[face.e1][sets.comp_of_full[side1[k]]];
      const Complex b =
          field.values[face.e2][sets.comp_of_full[side2[k]]];
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst;
}

namespace {

constexpr char kFieldMagic[8] = {'H', 'P', 'S', 'F', 'L', 'D', '0', '1'};

void node_coordinates(const GlobalField& field, const GllRule& rule,
                      const IndexSets& sets, int eid, int k, double& x,
                      double& y) {
  const double h = 1.0 / field.n;
  const int np = field.order + 1;
  const int full = sets.noncorner[k];
  x = h * (eid % field.n) + 0.5 * (rule.nodes[full / np] + 1.0) * h;
  y = h * (eid / field.n) + 0.5 * (rule.nodes[full % np] + 1.0) * h;
}

}  // namespace

void dump_field(const GlobalField& field, const std::string& path,
                FieldFormat format) {
  if (field.n < 1 || field.values.empty())
    throw std::invalid_argument("dump_field: empty field");
  const GllRule rule = gll_rule(field.order);
  const IndexSets sets = build_index_sets(field.order);

  if (format == FieldFormat::kCsv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_field: cannot open " + path);
    out.precision(17);
    out << "# n=" << field.n << " N=" << field.order << " kappa=" << field.kappa
        << " columns=element,x,y,re,im\n";
    for (int eid = 0; eid < field.n * field.n; ++eid)
      for (int k = 0; k < sets.total(); ++k) {
        double x, y;
        node_coordinates(field, rule, sets, eid, k, x, y);
        out << eid << ',' << x << ',' << y << ','
            << field.values[eid][k].real() << ','
            << field.values[eid][k].imag() << '\n';
      }
    if (!out) throw std::runtime_error("dump_field: write failed for " + path);
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_field: cannot open " + path);
  out.write(kFieldMagic, sizeof(kFieldMagic));
  const std::uint32_t n = field.n, order = field.order;
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&order), sizeof(order));
  out.write(reinterpret_cast<const char*>(&field.kappa), sizeof(double));
  for (int eid = 0; eid < field.n * field.n; ++eid)
    for (int k = 0; k < sets.total(); ++k) {
      double buf[4];
      node_coordinates(field, rule, sets, eid, k, buf[0], buf[1]);
      buf[2] = field.values[eid][k].real();
      buf[3] = field.values[eid][k].imag();
      out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
    }
  if (!out) throw std::runtime_error("dump_field: write failed for " + path);
}

GlobalField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field_binary: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0)
    throw std::runtime_error("read_field_binary: bad header in " + path);

  GlobalField field;
  std::uint32_t n = 0, order = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&order), sizeof(order));
  in.read(reinterpret_cast<char*>(&field.kappa), sizeof(double));
  field.n = static_cast<int>(n);
  field.order = static_cast<int>(order);
  if (!in || field.n < 1 || field.order < 2)
    throw std::runtime_error("read_field_binary: corrupt header in " + path);

  const int total = (field.order + 1) * (field.order + 1) - 4;
  field.values.assign(field.n * field.n, CVector(total));
  for (auto& values : field.values)
    for (int k = 0; k < total; ++k) {
      double buf[4];
      in.read(reinterpret_cast<char*>(buf), sizeof(buf));
      values[k] = Complex(buf[2], buf[3]);
    }
  if (!in) throw std::runtime_error("read_field_binary: truncated file " + path);
  return field;
}

}  // namespace hps
