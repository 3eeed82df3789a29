#include "dihedral/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace dihedral {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-10;

double edge_length(const AnnularMesh& m, int a, int b) { return norm(m.nodes[b] - m.nodes[a]); }

}  // namespace

std::vector<double> obstacle_frame_angles(const ObstacleSpec& obs, const Resolution& res) {
  const int nphi = res.n_phi;
  std::vector<double> angles(nphi);
  if (!obs.has_corners() || res.corner_grading == 1.0) {
    for (int i = 0; i < nphi; ++i) angles[i] = 2.0 * pi * i / nphi;
    return angles;
  }
  // Half-sectors alternate vertex -> edge midpoint and midpoint -> vertex.
  const int per_half = nphi / (2 * obs.order());
  const double half = pi / obs.order();
  for (int i = 0; i < nphi; ++i) {
    const int m = i / per_half, k = i % per_half;
    const double x = static_cast<double>(k) / per_half;
    angles[i] = (m % 2 == 0) ? m * half + half * std::pow(x, res.corner_grading)
                             : (m + 1) * half - half * std::pow(1.0 - x, res.corner_grading);
  }
  return angles;
}

double signed_area(const AnnularMesh& mesh, const Triangle& tri) {
  const Vec2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
  return 0.5 * cross(b - a, c - a);
}

void check_resolution(const ObstacleSpec& obs, const Resolution& res) {
  if (res.n_r < 2) throw ResolutionError("n_r must be >= 2");
  if (res.n_phi < 8 || res.n_phi % (2 * obs.order()) != 0)
    throw ResolutionError("n_phi must be >= 8 and a multiple of 2n = " +
                          std::to_string(2 * obs.order()));
  if (!(res.grading > 0.0) || !(res.corner_grading > 0.0))
    throw ResolutionError("grading exponents must be positive");
}

int compatible_n_phi(int requested, int n) {
  const int step = 2 * n;
  const int rounded = std::max(1, (requested + step / 2) / step) * step;
  return rounded < 8 ? (8 + step - 1) / step * step : rounded;
}

AnnularMesh generate_mesh(const ObstacleSpec& obs, const Placement& p, const Resolution& res) {
  check_resolution(obs, res);

  const Admissibility adm = admissible(obs, p);
  if (!adm.ok) {
    std::ostringstream msg;
    msg << "generate_mesh: placement is not admissible (margin " << adm.margin << " at phi "
        << adm.worst_phi << ")";
    throw MeshError(msg.str());
  }

  AnnularMesh mesh;
  mesh.n_phi = res.n_phi;
  mesh.n_r = res.n_r;
  mesh.source = Configuration{obs, p};

  const int nphi = res.n_phi, nr = res.n_r;
  std::vector<double> s(nr + 1);
  for (int j = 0; j <= nr; ++j) s[j] = std::pow(static_cast<double>(j) / nr, res.grading);
  s[nr] = 1.0;

  mesh.nodes.resize(static_cast<size_t>(nphi) * (nr + 1));
  mesh.inner_angle.resize(nphi);
  const std::vector<double> angles = obstacle_frame_angles(obs, res);
  for (int i = 0; i < nphi; ++i) {
    const double local = angles[i];
    const double phi = p.t + local;
    const double inner = p.lambda * obs.support(local);
    const double outer = disk_exit_radius(p, phi);
    const double gap = outer - inner;
    // Each radial segment must be well separated from round-off.
    if (!(gap > 1e-9 * p.r1)) {
      std::ostringstream msg;
      msg << "generate_mesh: degenerate radial sector " << i << " at phi = " << phi
          << " (gap " << gap << ")";
      throw MeshError(msg.str());
    }
    const double c = std::cos(phi), sn = std::sin(phi);
    mesh.inner_angle[i] = local;
    for (int j = 0; j <= nr; ++j) {
      // Endpoints are placed exactly on the two boundary curves.
      double r = inner + s[j] * gap;
      if (j == nr) r = outer;
      mesh.nodes[mesh.node_index(i, j)] = {r * c, r * sn};
    }
  }

  mesh.triangles.reserve(2 * static_cast<size_t>(nphi) * nr);
  for (int j = 0; j < nr; ++j) {
    for (int i = 0; i < nphi; ++i) {
      const int i1 = (i + 1) % nphi;
      const int p00 = mesh.node_index(i, j), p10 = mesh.node_index(i1, j);
      const int p01 = mesh.node_index(i, j + 1), p11 = mesh.node_index(i1, j + 1);
      const double a = edge_length(mesh, p00, p11);
      const double b = edge_length(mesh, p10, p01);
      bool use_a;
      if (std::abs(a - b) <= 1e-12 * std::max(a, b)) {
        // Tie: the diagonal leaving the even angular index at level j.
        use_a = (i % 2 == 0);
      } else {
        use_a = a < b;
      }
      if (use_a) {
        mesh.triangles.push_back({p00, p01, p11});
        mesh.triangles.push_back({p00, p11, p10});
      } else {
        mesh.triangles.push_back({p00, p01, p10});
        mesh.triangles.push_back({p10, p01, p11});
      }
    }
  }
  for (const Triangle& tri : mesh.triangles) {
    if (!(signed_area(mesh, tri) > 0.0)) {
      const int i = tri[0] % nphi;
      std::ostringstream msg;
      msg << "generate_mesh: inverted element in sector " << i << " at phi = "
          << p.t + angles[i];
      throw MeshError(msg.str());
    }
  }

  mesh.inner_boundary.resize(nphi);
  mesh.outer_boundary.resize(nphi);
  for (int i = 0; i < nphi; ++i) {
    mesh.inner_boundary[i] = mesh.node_index(i, 0);
    mesh.outer_boundary[i] = mesh.node_index(i, nr);
  }
  mesh.h_max = mesh_stats(mesh).h_max;
  return mesh;
}

MeshStats mesh_stats(const AnnularMesh& mesh) {
  MeshStats st;
  st.h_min = std::numeric_limits<double>::infinity();
  st.min_angle = 180.0;
  for (const Triangle& tri : mesh.triangles) {
    std::array<double, 3> len{};
    for (int k = 0; k < 3; ++k) {
      len[k] = edge_length(mesh, tri[(k + 1) % 3], tri[(k + 2) % 3]);  // opposite vertex k
      st.h_max = std::max(st.h_max, len[k]);
      st.h_min = std::min(st.h_min, len[k]);
    }
    bool obtuse = false;
    for (int k = 0; k < 3; ++k) {
      const double a = len[k], b = len[(k + 1) % 3], c = len[(k + 2) % 3];
      const double cosang = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
      const double deg = std::acos(cosang) * 180.0 / pi;
      st.min_angle = std::min(st.min_angle, deg);
      if (cosang < -1e-12) obtuse = true;
    }
    if (obtuse) ++st.obtuse_count;
  }
  if (mesh.triangles.empty()) st.h_min = 0.0;
  return st;
}

namespace {

bool is_simple_loop(const std::vector<int>& loop,
                    const std::map<std::pair<int, int>, int>& edge_use) {
  if (loop.size() < 3) return false;
  std::vector<int> sorted = loop;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (size_t k = 0; k < loop.size(); ++k) {
    const int a = loop[k], b = loop[(k + 1) % loop.size()];
    auto it = edge_use.find({std::min(a, b), std::max(a, b)});
    if (it == edge_use.end() || it->second != 1) return false;
  }
  return true;
}

}  // namespace

MeshReport validate(const AnnularMesh& mesh) {
  MeshReport rep;
  rep.vertices = static_cast<int>(mesh.nodes.size());
  rep.faces = static_cast<int>(mesh.triangles.size());

  std::map<std::pair<int, int>, int> edge_use;
  for (const Triangle& tri : mesh.triangles) {
    if (!(signed_area(mesh, tri) > 0.0)) ++rep.orientation_violations;
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  rep.edges = static_cast<int>(edge_use.size());
  rep.euler_characteristic = rep.vertices - rep.edges + rep.faces;

  // Edges used once must be exactly the edges of the two boundary loops.
  std::map<std::pair<int, int>, int> loop_edges;
  for (const auto* loop : {&mesh.inner_boundary, &mesh.outer_boundary}) {
    for (size_t k = 0; k < loop->size(); ++k) {
      const int a = (*loop)[k], b = (*loop)[(k + 1) % loop->size()];
      ++loop_edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [edge, count] : edge_use) {
    const bool on_loop = loop_edges.count(edge) != 0;
    if (count > 2 || (count == 1) != on_loop) ++rep.boundary_edge_violations;
  }
  if (!is_simple_loop(mesh.inner_boundary, edge_use)) ++rep.loop_violations;
  if (!is_simple_loop(mesh.outer_boundary, edge_use)) ++rep.loop_violations;
  {
    std::vector<int> in = mesh.inner_boundary, out = mesh.outer_boundary;
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    std::vector<int> common;
    std::set_intersection(in.begin(), in.end(), out.begin(), out.end(),
                          std::back_inserter(common));
    if (!common.empty()) ++rep.loop_violations;
  }

  if (mesh.source) {
    const auto& [obs, p] = *mesh.source;
    for (int idx : mesh.inner_boundary) {
      const Vec2 x = mesh.nodes[idx];
      const double phi = std::atan2(x.y, x.x);
      if (std::abs(norm(x) - p.lambda * obs.support(phi - p.t)) > kBoundaryTol)
        ++rep.inner_radius_violations;
    }
    for (int idx : mesh.outer_boundary) {
      if (std::abs(norm(mesh.nodes[idx] - p.disk_center()) - p.r1) > kBoundaryTol)
        ++rep.outer_radius_violations;
    }
  }

  rep.stats = mesh_stats(mesh);

  auto note = [&](int count, const char* what) {
    if (count != 0) rep.messages.push_back(std::to_string(count) + " " + what);
  };
  note(rep.orientation_violations, "triangle(s) with non-positive signed area");
  note(rep.boundary_edge_violations, "edge(s) with inconsistent boundary incidence");
  note(rep.loop_violations, "boundary loop defect(s)");
  note(rep.inner_radius_violations, "inner-loop node(s) off the obstacle boundary");
  note(rep.outer_radius_violations, "outer-loop node(s) off the disk boundary");
  if (rep.euler_characteristic != 0)
    rep.messages.push_back("Euler characteristic " + std::to_string(rep.euler_characteristic) +
                           " (annulus requires 0)");
  return rep;
}

void write_mesh(std::ostream& out, const AnnularMesh& mesh) {
  out.precision(17);
  for (const Vec2& v : mesh.nodes) out << "v " << v.x << ' ' << v.y << '\n';
  for (const Triangle& t : mesh.triangles)
    out << "t " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  for (int idx : mesh.inner_boundary) out << "bi " << idx + 1 << '\n';
  for (int idx : mesh.outer_boundary) out << "bo " << idx + 1 << '\n';
}

AnnularMesh read_mesh(std::istream& in) {
  AnnularMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    bool good = true;
    if (tag == "v") {
      Vec2 v;
      good = static_cast<bool>(ls >> v.x >> v.y);
      mesh.nodes.push_back(v);
    } else if (tag == "t") {
      Triangle t{};
      good = static_cast<bool>(ls >> t[0] >> t[1] >> t[2]);
      for (int& k : t) --k;
      mesh.triangles.push_back(t);
    } else if (tag == "bi" || tag == "bo") {
      int idx = 0;
      good = static_cast<bool>(ls >> idx);
      (tag == "bi" ? mesh.inner_boundary : mesh.outer_boundary).push_back(idx - 1);
    } else {
      good = false;
    }
    if (!good) throw MeshError("read_mesh: malformed line " + std::to_string(lineno));
  }
  const int nv = static_cast<int>(mesh.nodes.size());
  for (const Triangle& t : mesh.triangles)
    for (int k : t)
      if (k < 0 || k >= nv) throw MeshError("read_mesh: triangle index out of range");
  mesh.h_max = mesh_stats(mesh).h_max;
  return mesh;
}

}  // namespace dihedral
