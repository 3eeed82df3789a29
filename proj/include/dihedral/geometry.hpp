#pragma once

// Exact description of a dihedral-symmetric star-shaped obstacle placed
// inside a disk. The obstacle center sits at the origin; the disk center is
// at (-d, 0). All angles are in radians.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dihedral {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Multiplication by the imaginary unit: counterclockwise quarter turn.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 polar(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

/// Thrown for malformed obstacle or placement parameters.
class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a quantity is requested outside its domain of definition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Family { circle, regular_polygon, smoothed_polygon, ellipse, cosine_star };

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);

/// One-sided values of f'(phi). Away from corners left == right.
struct SupportSlope {
  double left = 0.0;
  double right = 0.0;
  bool corner = false;

  double value() const { return corner ? 0.5 * (left + right) : right; }
};

/// A D_n-symmetric star-shaped obstacle given by its radial support
/// function f(phi). At phi = 0 an outer vertex (maximum of f) lies on the
/// positive x1-axis.
///
/// epsilon is family-dependent: mollifier half-width for smoothed_polygon,
/// amplitude for cosine_star, minor/major axis ratio for ellipse.
class ObstacleSpec {
 public:
  ObstacleSpec(Family family, int n, double circumradius, double epsilon = 0.0);

  static ObstacleSpec circle(double radius) { return {Family::circle, 1, radius}; }
  static ObstacleSpec regular_polygon(int n, double circumradius) {
    return {Family::regular_polygon, n, circumradius};
  }

  Family family() const { return family_; }
  int order() const { return n_; }
  double circumradius() const { return rho2_; }
  double epsilon() const { return eps_; }
  /// Incircle radius: the minimum of f.
  double inradius() const { return rho1_; }
  /// Angular period 2 pi / n.
  double period() const { return 2.0 * std::numbers::pi / n_; }
  bool has_corners() const { return family_ == Family::regular_polygon; }

  /// f(phi).
  double support(double phi) const;
  /// f'(phi); tagged one-sided values at the vertices of sharp polygons.
  SupportSlope slope(double phi) const;
  /// True when phi is a vertex direction of a sharp polygon.
  bool is_corner(double phi) const;

 private:
  // Reduces phi to [0, pi/n] and reports whether a reflection was used.
  double fold(double phi, bool& reflected) const;
  double support_folded(double psi) const;
  double slope_folded(double psi) const;
  double polygon_support(double psi) const;
  double polygon_slope(double psi) const;
  double smoothed_raw(double psi, bool derivative) const;

  Family family_;
  int n_;
  double rho2_;
  double eps_;
  double rho1_ = 0.0;
  double smooth_scale_ = 1.0;
};

/// Configuration parameters: center distance d, rotation t, scale lambda,
/// disk radius r1 and boundary datum M.
struct Placement {
  double d = 0.0;
  double t = 0.0;
  double lambda = 1.0;
  double r1 = 1.0;
  double M = 1.0;

  Vec2 disk_center() const { return {-d, 0.0}; }
};

struct Configuration {
  ObstacleSpec obstacle;
  Placement placement;
};

enum class OrientationClass { OFF, ON, GENERIC };
std::string_view to_string(OrientationClass c);

inline constexpr double kOrientationTolerance = 1e-9;

double radial_support(const ObstacleSpec& obs, double phi);
SupportSlope radial_support_derivative(const ObstacleSpec& obs, double phi);

/// Point of the placed (rotated, scaled) obstacle boundary in direction phi.
Vec2 boundary_point(const ObstacleSpec& obs, const Placement& p, double phi);

/// Outward unit normal of the domain on the obstacle boundary (it points
/// into the obstacle). At sharp corners the normalized average of the two
/// one-sided normals is returned in `normal`.
struct NormalSample {
  Vec2 normal;
  Vec2 left;
  Vec2 right;
  bool corner = false;
};
NormalSample inner_normal(const ObstacleSpec& obs, const Placement& p, double phi);

/// Distance from the obstacle center to the disk boundary along phi.
double disk_exit_radius(const Placement& p, double phi);

OrientationClass classify_orientation(int n, double t, double tol = kOrientationTolerance);

/// Margins below this fraction of r1 are treated as contact.
inline constexpr double kContactTolerance = 1e-12;

struct Admissibility {
  bool ok = false;
  /// min over phi of disk_exit_radius - lambda f(phi - t).
  double margin = 0.0;
  /// Direction where the margin is attained.
  double worst_phi = 0.0;
  /// lambda rho2 + d < r1: the obstacle may rotate freely.
  bool free_rotation_ok = false;
  double free_rotation_margin = 0.0;
};
Admissibility admissible(const ObstacleSpec& obs, const Placement& p);

/// Largest lambda keeping the rotated obstacle inside the disk.
double max_admissible_scale(const ObstacleSpec& obs, const Placement& p);

}  // namespace dihedral
