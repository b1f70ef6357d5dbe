// hps2d - Hierarchical Poincare-Steklov solver for the 2D Helmholtz equation
// SPDX-License-Identifier: Apache-2.0
#include "hps/skeleton.hpp"

#include <cmath>
#include <stdexcept>

namespace hps {

namespace {

int int_log2(int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  return m;
}

}  // namespace

FaceGraph build_face_graph(int n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("build_face_graph: n must be a power of two >= 2");
  const int m = int_log2(n);

  FaceGraph g;
  g.n = n;
  g.face_of_element.assign(n * n, {-1, -1, -1, -1});
  g.groups.resize(2 * m);

  auto add_face = [&](int level, int group, int e1, int e2, Side s1, Side s2) {
    const int id = static_cast<int>(g.faces.size());
    g.faces.push_back({e1, e2, s1, s2, level, group});
    g.face_of_element[e1][side_index(s1)] = id;
    g.face_of_element[e2][side_index(s2)] = id;
    g.groups[level - 1][group].push_back(id);
  };

  // Levels alternate between vertical-face (x) merges and horizontal-face
  // (y) merges; see FaceGraph's doc comment.  Group enumeration follows the
  // merge layout: row-major for x-merges, column-major for y-merges.
  for (int level = 1; level <= 2 * m; ++level) {
    const int begin = static_cast<int>(g.faces.size());
    if (level % 2 == 1) {
      const int k = (level - 1) / 2;      // subdomains are 2^k square
      const int half = 1 << k;            // faces per merge
      const int cols = n >> (k + 1);      // merge pairs across
      const int rows = n >> k;            // subdomain rows
      g.groups[level - 1].resize(cols * rows);
      int group = 0;
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c, ++group)
          for (int t = 0; t < half; ++t) {
            const int fx = (2 * c + 1) * half;  // vertical grid line
            const int fy = r * half + t;
            add_face(level, group, fy * n + (fx - 1), fy * n + fx,
                     Side::kRight, Side::kLeft);
          }
    } else {
      const int k = level / 2;            // subdomains are 2^k wide, 2^{k-1} tall
      const int wide = 1 << k;
      const int half = 1 << (k - 1);
      const int cols = n >> k;
      const int rows = n >> k;
      g.groups[level - 1].resize(cols * rows);
      int group = 0;
      for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r, ++group)
          for (int t = 0; t < wide; ++t) {
            const int fy = (2 * r + 1) * half;  // horizontal grid line
            const int fx = c * wide + t;
            add_face(level, group, (fy - 1) * n + fx, fy * n + fx,
                     Side::kTop, Side::kBottom);
          }
    }
    g.level_range.emplace_back(begin, static_cast<int>(g.faces.size()));
  }
  return g;
}

Eigen::Index SkeletonSystem::slot_offset(int eid, Side side) const {
  const int f = graph.face_of_element[eid][side_index(side)];
  if (f < 0)
    throw std::invalid_argument("slot_offset: side lies on the physical boundary");
  const int slot = (graph.faces[f].e1 == eid) ? 1 : 0;
  return static_cast<Eigen::Index>(f) * block_size() + slot * side_len;
}

SkeletonSystem assemble_skeleton(const Mesh& mesh, const GllRule& rule,
                                 const std::vector<ElementRecord>& elements) {
  if (static_cast<int>(elements.size()) != mesh.num_elements())
    throw std::invalid_argument("assemble_skeleton: element operators missing");

  SkeletonSystem sys;
  sys.graph = build_face_graph(mesh.n);
  sys.side_len = mesh.order - 1;
  const int bs = sys.block_size();
  const int sl = sys.side_len;
  sys.M = BlockMatrix(sys.graph.num_faces(), bs);
  sys.rhs = CVector::Zero(sys.M.dim());

  constexpr std::array<Side, 4> kSides = {Side::kLeft, Side::kRight,
                                          Side::kBottom, Side::kTop};

  // Each face contributes two row slots: slot 0 states the transmission
  // condition (Ii u)^(e2) = -(Io u)^(e1) through the shared side, slot 1 the
  // mirrored condition.  Expanding the outgoing data through the element ItI
  // maps puts an identity on the face's own unknowns and +T couplings on the
  // elements' other incoming traces; sides on the physical boundary carry
  // known data and move to the right-hand side together with -H.
  for (int f = 0; f < sys.graph.num_faces(); ++f) {
    const Face& face = sys.graph.faces[f];
    for (int slot = 0; slot < 2; ++slot) {
      const int eid = (slot == 0) ? face.e1 : face.e2;
      const Side alpha = (slot == 0) ? face.s1 : face.s2;
      const ElementRecord& rec = elements[eid];

      sys.M.block(f, f)
          .block(slot * sl, slot * sl, sl, sl)
          .setIdentity();

      auto rhs_rows = sys.rhs.segment(static_cast<Eigen::Index>(f) * bs + slot * sl, sl);
      rhs_rows = -rec.outgoing_source.segment(side_index(alpha) * sl, sl);

      for (Side gamma : kSides) {
        const CMatrix tblock = rec.ops->iti_block(alpha, gamma);
        const int fg = sys.graph.face_of_element[eid][side_index(gamma)];
        if (fg >= 0) {
          const int cslot = (sys.graph.faces[fg].e1 == eid) ? 1 : 0;
          sys.M.block(f, fg).block(slot * sl, cslot * sl, sl, sl) += tblock;
        } else {
          rhs_rows -= tblock * boundary_side_data(mesh, rule, eid, gamma);
        }
      }
    }
  }
  return sys;
}

LevelPartition partition_level(const FaceGraph& graph, int first_face,
                               int level) {
  if (level < 1 || level > graph.num_levels())
    throw std::invalid_argument("partition_level: level out of range");
  const auto [begin, end] = graph.level_range[level - 1];
  if (begin != first_face)
    throw std::logic_error(
        "partition_level: level's faces are not leading in this system");

  LevelPartition part;
  part.level = level;
  part.a_faces = end - begin;
  for (const auto& group : graph.groups[level - 1]) {
    std::vector<int> local;
    local.reserve(group.size());
    for (int f : group) local.push_back(f - first_face);
    part.groups.push_back(std::move(local));
  }
  return part;
}

}  // namespace hps
