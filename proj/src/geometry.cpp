#include "dihedral/geometry.hpp"

#include <array>
#include <limits>
#include <vector>

#include "quadrature.hpp"

namespace dihedral {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kCornerTol = 1e-10;

double positive_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

// Compactly supported C2 kernel (1 - (s/w)^2)^3 normalized to unit mass.
double kernel(double s, double w) {
  const double q = 1.0 - (s / w) * (s / w);
  return q <= 0.0 ? 0.0 : 35.0 / (32.0 * w) * q * q * q;
}

double kernel_derivative(double s, double w) {
  const double q = 1.0 - (s / w) * (s / w);
  return q <= 0.0 ? 0.0 : 35.0 / (32.0 * w) * 3.0 * q * q * (-2.0 * s / (w * w));
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::circle: return "circle";
    case Family::regular_polygon: return "regular_polygon";
    case Family::smoothed_polygon: return "smoothed_polygon";
    case Family::ellipse: return "ellipse";
    case Family::cosine_star: return "cosine_star";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::circle, Family::regular_polygon, Family::smoothed_polygon,
                   Family::ellipse, Family::cosine_star}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidSpec("unknown obstacle family '" + std::string(name) + "'");
}

std::string_view to_string(OrientationClass c) {
  switch (c) {
    case OrientationClass::OFF: return "OFF";
    case OrientationClass::ON: return "ON";
    case OrientationClass::GENERIC: return "GENERIC";
  }
  return "GENERIC";
}

ObstacleSpec::ObstacleSpec(Family family, int n, double circumradius, double epsilon)
    : family_(family), n_(n), rho2_(circumradius), eps_(epsilon) {
  if (!(circumradius > 0.0) || !std::isfinite(circumradius))
    throw InvalidSpec("circumradius must be positive and finite");
  switch (family_) {
    case Family::circle:
      if (n_ < 1) throw InvalidSpec("circle: symmetry order must be >= 1");
      rho1_ = rho2_;
      break;
    case Family::regular_polygon:
      if (n_ < 3) throw InvalidSpec("regular_polygon: n must be >= 3");
      rho1_ = rho2_ * std::cos(pi / n_);
      break;
    case Family::smoothed_polygon:
      if (n_ < 3) throw InvalidSpec("smoothed_polygon: n must be >= 3");
      if (!(eps_ > 0.0 && eps_ < pi / n_))
        throw InvalidSpec("smoothed_polygon: epsilon must lie in (0, pi/n)");
      smooth_scale_ = rho2_ / smoothed_raw(0.0, false);
      rho1_ = support_folded(pi / n_);
      break;
    case Family::ellipse:
      if (n_ != 2) throw InvalidSpec("ellipse: symmetry order must be 2");
      if (!(eps_ > 0.0 && eps_ <= 1.0))
        throw InvalidSpec("ellipse: axis ratio epsilon must lie in (0, 1]");
      rho1_ = rho2_ * eps_;
      break;
    case Family::cosine_star:
      if (n_ < 2) throw InvalidSpec("cosine_star: n must be >= 2");
      if (!(eps_ > 0.0 && eps_ < 0.5))
        throw InvalidSpec("cosine_star: epsilon must lie in (0, 1/2)");
      rho1_ = rho2_ * (1.0 - 2.0 * eps_);
      break;
  }
}

double ObstacleSpec::fold(double phi, bool& reflected) const {
  const double half = pi / n_;
  double psi = positive_mod(phi, period());
  reflected = psi > half;
  if (reflected) psi = period() - psi;
  return psi;
}

double ObstacleSpec::polygon_support(double psi) const {
  const double rho1 = rho2_ * std::cos(pi / n_);
  return rho1 / std::cos(psi - pi / n_);
}

double ObstacleSpec::polygon_slope(double psi) const {
  const double rho1 = rho2_ * std::cos(pi / n_);
  const double c = std::cos(psi - pi / n_);
  return rho1 * std::sin(psi - pi / n_) / (c * c);
}

// Convolution of the sharp polygon support with the kernel (or with the
// kernel derivative), split at the vertex so each piece is analytic.
double ObstacleSpec::smoothed_raw(double psi, bool derivative) const {
  const double w = eps_;
  auto integrand = [&](double s) {
    bool refl = false;
    const double f = polygon_support(fold(psi - s, refl));
    return f * (derivative ? kernel_derivative(s, w) : kernel(s, w));
  };
  std::array<double, 3> cuts{-w, w, w};
  int pieces = 1;
  if (psi > -w && psi < w) {
    cuts = {-w, psi, w};
    pieces = 2;
  }
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) total += gauss_legendre(integrand, cuts[k], cuts[k + 1]);
  return total;
}

double ObstacleSpec::support_folded(double psi) const {
  switch (family_) {
    case Family::circle: return rho2_;
    case Family::regular_polygon: return polygon_support(psi);
    case Family::smoothed_polygon: return smooth_scale_ * smoothed_raw(psi, false);
    case Family::ellipse: {
      const double a = rho2_, b = rho2_ * eps_;
      const double c = std::cos(psi), s = std::sin(psi);
      return a * b / std::sqrt(b * b * c * c + a * a * s * s);
    }
    case Family::cosine_star: return rho2_ * (1.0 - eps_ + eps_ * std::cos(n_ * psi));
  }
  return rho2_;
}

double ObstacleSpec::slope_folded(double psi) const {
  switch (family_) {
    case Family::circle: return 0.0;
    case Family::regular_polygon: return polygon_slope(psi);
    case Family::smoothed_polygon: return smooth_scale_ * smoothed_raw(psi, true);
    case Family::ellipse: {
      const double a = rho2_, b = rho2_ * eps_;
      const double c = std::cos(psi), s = std::sin(psi);
      const double q = b * b * c * c + a * a * s * s;
      return -a * b * (a * a - b * b) * s * c / (q * std::sqrt(q));
    }
    case Family::cosine_star: return -rho2_ * eps_ * n_ * std::sin(n_ * psi);
  }
  return 0.0;
}

double ObstacleSpec::support(double phi) const {
  bool reflected = false;
  return support_folded(fold(phi, reflected));
}

bool ObstacleSpec::is_corner(double phi) const {
  if (!has_corners()) return false;
  const double psi = positive_mod(phi, period());
  return psi < kCornerTol || period() - psi < kCornerTol;
}

SupportSlope ObstacleSpec::slope(double phi) const {
  SupportSlope out;
  if (is_corner(phi)) {
    // Just past a vertex the support decreases; just before it increases.
    out.corner = true;
    out.right = polygon_slope(0.0);
    out.left = -out.right;
    return out;
  }
  bool reflected = false;
  const double psi = fold(phi, reflected);
  const double v = slope_folded(psi);
  out.left = out.right = reflected ? -v : v;
  return out;
}

double radial_support(const ObstacleSpec& obs, double phi) { return obs.support(phi); }

SupportSlope radial_support_derivative(const ObstacleSpec& obs, double phi) {
  return obs.slope(phi);
}

Vec2 boundary_point(const ObstacleSpec& obs, const Placement& p, double phi) {
  return polar(p.lambda * obs.support(phi - p.t), phi);
}

namespace {

// Unit normal (into the obstacle) of the curve r = lambda f(phi - t) for a
// given value of f'. Scale lambda cancels after normalization.
Vec2 normal_from_slope(double f, double fp, double phi) {
  const Vec2 e{std::cos(phi), std::sin(phi)};
  const Vec2 v = perp(e) * fp - e * f;
  return v * (1.0 / std::sqrt(f * f + fp * fp));
}

}  // namespace

NormalSample inner_normal(const ObstacleSpec& obs, const Placement& p, double phi) {
  const double f = obs.support(phi - p.t);
  const SupportSlope s = obs.slope(phi - p.t);
  NormalSample out;
  out.left = normal_from_slope(f, s.left, phi);
  out.right = normal_from_slope(f, s.right, phi);
  out.corner = s.corner;
  if (s.corner) {
    const Vec2 avg = out.left + out.right;
    out.normal = avg * (1.0 / norm(avg));
  } else {
    out.normal = out.right;
  }
  return out;
}

double disk_exit_radius(const Placement& p, double phi) {
  if (!(std::abs(p.d) < p.r1))
    throw DomainError("disk_exit_radius: obstacle center must lie inside the disk (d < r1)");
  const double s = std::sin(phi);
  return -p.d * std::cos(phi) + std::sqrt(p.r1 * p.r1 - p.d * p.d * s * s);
}

OrientationClass classify_orientation(int n, double t, double tol) {
  const double period = 2.0 * pi / n;
  const double tau = positive_mod(t, period);
  if (std::min(tau, period - tau) <= tol) return OrientationClass::OFF;
  if (std::abs(tau - 0.5 * period) <= tol) return OrientationClass::ON;
  return OrientationClass::GENERIC;
}

namespace {

// Minimizes a periodic function of phi: dense sampling plus the supplied
// candidate directions, then golden-section refinement around the best one.
template <typename F>
std::pair<double, double> periodic_minimum(F&& fn, const std::vector<double>& candidates) {
  constexpr int samples = 4096;
  const double step = 2.0 * pi / samples;
  double best_phi = 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double phi) {
    const double v = fn(phi);
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  };
  for (int k = 0; k < samples; ++k) consider(k * step);
  for (double c : candidates) consider(c);

  double a = best_phi - step, b = best_phi + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  consider(0.5 * (a + b));
  return {best_phi, best};
}

std::vector<double> special_directions(const ObstacleSpec& obs, const Placement& p) {
  std::vector<double> dirs{0.0, pi};
  for (int k = 0; k < 2 * obs.order(); ++k) dirs.push_back(p.t + k * pi / obs.order());
  return dirs;
}

}  // namespace

Admissibility admissible(const ObstacleSpec& obs, const Placement& p) {
  Admissibility out;
  out.free_rotation_margin = p.r1 - (p.lambda * obs.circumradius() + std::abs(p.d));
  // Contact within rounding counts as touching, not as strictly inside.
  const double contact = kContactTolerance * p.r1;
  out.free_rotation_ok = out.free_rotation_margin > contact;
  if (!(std::abs(p.d) < p.r1)) {
    out.margin = p.r1 - std::abs(p.d);
    out.worst_phi = 0.0;
    out.ok = false;
    return out;
  }
  auto margin = [&](double phi) {
    return disk_exit_radius(p, phi) - p.lambda * obs.support(phi - p.t);
  };
  const auto [phi, m] = periodic_minimum(margin, special_directions(obs, p));
  out.worst_phi = positive_mod(phi, 2.0 * pi);
  out.margin = m;
  out.ok = m > contact;
  return out;
}

double max_admissible_scale(const ObstacleSpec& obs, const Placement& p) {
  if (!(std::abs(p.d) < p.r1)) return 0.0;
  auto ratio = [&](double phi) { return disk_exit_radius(p, phi) / obs.support(phi - p.t); };
  return periodic_minimum(ratio, special_directions(obs, p)).second;
}

}  // namespace dihedral
