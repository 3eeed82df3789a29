#pragma once

// Structured polar triangulation of the disk minus the placed obstacle.
//
// Node (i, j) sits at angle phi_i = t + 2 pi i / n_phi (the angular grid is
// attached to the obstacle frame) and at a radius interpolating between the
// obstacle boundary (j = 0) and the disk boundary (j = n_r).

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dihedral/geometry.hpp"

namespace dihedral {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A resolution that the obstacle's symmetry does not allow.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Resolution {
  int n_phi = 256;
  int n_r = 64;
  /// Power-law exponent of the radial spacing; > 1 clusters toward the obstacle.
  double grading = 1.5;
  /// Power-law exponent of the angular spacing within each half-sector of a
  /// sharp polygon, clustering toward the vertices. Ignored for smooth
  /// obstacles, whose angular grid is uniform.
  double corner_grading = 1.0;

  Resolution refined() const { return {2 * n_phi, 2 * n_r, grading, corner_grading}; }
};

/// Throws ResolutionError unless n_phi >= 8 is a multiple of 2n, n_r >= 2
/// and the grading exponents are positive.
void check_resolution(const ObstacleSpec& obs, const Resolution& res);

/// Nearest admissible n_phi (a multiple of 2n, at least 8).
int compatible_n_phi(int requested, int n);

using Triangle = std::array<int, 3>;

struct AnnularMesh {
  std::vector<Vec2> nodes;
  /// Counterclockwise node-index triples.
  std::vector<Triangle> triangles;
  /// Closed loop on the obstacle boundary, counterclockwise.
  std::vector<int> inner_boundary;
  /// Closed loop on the disk boundary, counterclockwise.
  std::vector<int> outer_boundary;
  /// Obstacle-frame angle (phi - t) of each inner-boundary node.
  std::vector<double> inner_angle;
  double h_max = 0.0;
  int n_phi = 0;
  int n_r = 0;
  /// Geometry the mesh was generated from, if any.
  std::optional<Configuration> source;

  int node_index(int i, int j) const { return j * n_phi + i; }
};

/// Angular grid positions phi_i - t.
std::vector<double> obstacle_frame_angles(const ObstacleSpec& obs, const Resolution& res);

AnnularMesh generate_mesh(const ObstacleSpec& obs, const Placement& placement,
                          const Resolution& res = {});

struct MeshStats {
  double h_max = 0.0;
  double h_min = 0.0;
  /// Smallest interior angle in degrees.
  double min_angle = 0.0;
  int obtuse_count = 0;
};

MeshStats mesh_stats(const AnnularMesh& mesh);

struct MeshReport {
  int orientation_violations = 0;
  int euler_characteristic = 0;
  int boundary_edge_violations = 0;
  int loop_violations = 0;
  int inner_radius_violations = 0;
  int outer_radius_violations = 0;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  MeshStats stats;
  std::vector<std::string> messages;

  bool ok() const { return messages.empty(); }
};

/// Checks every structural invariant of an annular mesh. Boundary placement
/// is only checked when the mesh carries its source configuration.
MeshReport validate(const AnnularMesh& mesh);

double signed_area(const AnnularMesh& mesh, const Triangle& tri);

/// Plain-text dump: "v x y", "t i j k", "bi idx", "bo idx" with 1-based indices.
void write_mesh(std::ostream& out, const AnnularMesh& mesh);
AnnularMesh read_mesh(std::istream& in);

}  // namespace dihedral
