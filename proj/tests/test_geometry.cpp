#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dihedral/config.hpp"
#include "dihedral/geometry.hpp"

using namespace dihedral;
using std::numbers::pi;

namespace {

std::vector<ObstacleSpec> all_families() {
  return {ObstacleSpec::circle(0.3),
          ObstacleSpec::regular_polygon(4, 0.285),
          ObstacleSpec::regular_polygon(5, 0.30),
          ObstacleSpec(Family::smoothed_polygon, 4, 0.285, 0.05),
          ObstacleSpec(Family::smoothed_polygon, 6, 0.25, 0.2),
          ObstacleSpec(Family::ellipse, 2, 0.3, 0.6),
          ObstacleSpec(Family::cosine_star, 5, 0.3, 0.2)};
}

}  // namespace

TEST(RadialSupport, FrozenExamples) {
  EXPECT_DOUBLE_EQ(radial_support(ObstacleSpec::circle(0.3), 1.234), 0.3);
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  EXPECT_NEAR(radial_support(square, 0.0), 0.285, 1e-15);
  EXPECT_NEAR(radial_support(square, pi / 4), 0.285 * std::cos(pi / 4), 1e-15);
  EXPECT_NEAR(radial_support(square, pi / 4), 0.201525, 1e-6);
}

TEST(RadialSupport, SymmetryOnRandomAngles) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (const ObstacleSpec& obs : all_families()) {
    for (int k = 0; k < 1000; ++k) {
      const double phi = uni(rng);
      const double f = radial_support(obs, phi);
      EXPECT_NEAR(radial_support(obs, phi + obs.period()), f, 1e-12) << to_string(obs.family());
      EXPECT_NEAR(radial_support(obs, -phi), f, 1e-12) << to_string(obs.family());
      EXPECT_GT(f, 0.0);
    }
  }
}

TEST(RadialSupport, ExtremaAreCircumAndInradius) {
  for (const ObstacleSpec& obs : all_families()) {
    double lo = 1e9, hi = 0.0;
    for (int k = 0; k <= 20000; ++k) {
      const double f = radial_support(obs, 2 * pi * k / 20000);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    EXPECT_NEAR(hi, obs.circumradius(), 1e-9) << to_string(obs.family());
    EXPECT_NEAR(lo, obs.inradius(), 1e-6) << to_string(obs.family());
    EXPECT_NEAR(radial_support(obs, 0.0), obs.circumradius(), 1e-12);
  }
}

TEST(RadialSupport, MonotoneOnEachHalfSector) {
  for (const ObstacleSpec& obs : all_families()) {
    if (obs.family() == Family::circle) continue;
    const double half = pi / obs.order();
    for (int k = 1; k < 1000; ++k) {
      const double phi = half * k / 1000.0;
      EXPECT_LE(radial_support_derivative(obs, phi).value(), 1e-12) << to_string(obs.family());
    }
  }
}

TEST(RadialSupport, ConstructionErrors) {
  EXPECT_THROW(ObstacleSpec::circle(0.0), InvalidSpec);
  EXPECT_THROW(ObstacleSpec::regular_polygon(2, 0.3), InvalidSpec);
  EXPECT_THROW(ObstacleSpec(Family::cosine_star, 4, 0.3, 0.5), InvalidSpec);
  EXPECT_THROW(ObstacleSpec(Family::ellipse, 3, 0.3, 0.5), InvalidSpec);
  EXPECT_THROW(ObstacleSpec(Family::smoothed_polygon, 4, 0.3, 1.0), InvalidSpec);
  EXPECT_THROW(ObstacleSpec::regular_polygon(4, -1.0), InvalidSpec);
}

TEST(RadialSupportDerivative, FrozenExamples) {
  EXPECT_EQ(radial_support_derivative(ObstacleSpec::circle(0.3), 0.7).value(), 0.0);
  const ObstacleSpec star(Family::cosine_star, 5, 0.3, 0.2);
  EXPECT_NEAR(radial_support_derivative(star, pi / 10).value(), -0.3, 1e-14);
  const ObstacleSpec round(Family::ellipse, 2, 0.3, 1.0);
  for (double phi : {0.0, 0.4, 1.3, 2.9}) {
    EXPECT_NEAR(radial_support_derivative(round, phi).value(), 0.0, 1e-14);
    EXPECT_NEAR(radial_support(round, phi), 0.3, 1e-15);
  }
}

TEST(RadialSupportDerivative, MatchesCentralDifferences) {
  for (const ObstacleSpec& obs : all_families()) {
    for (double phi : {0.11, 0.37, 1.9, 4.4}) {
      if (obs.is_corner(phi)) continue;
      const double h = 1e-6;
      const double fd = (radial_support(obs, phi + h) - radial_support(obs, phi - h)) / (2 * h);
      EXPECT_NEAR(radial_support_derivative(obs, phi).value(), fd, 1e-6) << to_string(obs.family());
    }
  }
}

TEST(RadialSupportDerivative, PolygonCornersAreTagged) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  const SupportSlope s = radial_support_derivative(square, pi / 2);
  EXPECT_TRUE(s.corner);
  EXPECT_NEAR(s.left, -s.right, 1e-14);
  EXPECT_GT(s.left, 0.0);
  EXPECT_FALSE(radial_support_derivative(square, 0.3).corner);
  const ObstacleSpec smooth(Family::smoothed_polygon, 4, 0.285, 0.05);
  EXPECT_FALSE(smooth.is_corner(0.0));
}

TEST(InnerNormal, CircleExamples) {
  const ObstacleSpec c = ObstacleSpec::circle(0.3);
  const Placement p{};
  const NormalSample n = inner_normal(c, p, 0.0);
  EXPECT_NEAR(n.normal.x, -1.0, 1e-15);
  EXPECT_NEAR(n.normal.y, 0.0, 1e-15);
  for (double phi : {0.2, 1.7, 3.3}) {
    const Vec2 x = boundary_point(c, p, phi);
    EXPECT_NEAR(dot(x, inner_normal(c, p, phi).normal), -0.3, 1e-14);
  }
}

TEST(InnerNormal, SquareEdgeMidpoint) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  const NormalSample n = inner_normal(square, Placement{}, pi / 4);
  EXPECT_NEAR(n.normal.x, -std::cos(pi / 4), 1e-14);
  EXPECT_NEAR(n.normal.y, -std::sin(pi / 4), 1e-14);
  // Perpendicular to the edge joining the vertices at 0 and pi/2.
  const Vec2 edge = boundary_point(square, Placement{}, pi / 2) - boundary_point(square, Placement{}, 0.0);
  EXPECT_NEAR(dot(edge, n.normal), 0.0, 1e-14);
}

TEST(InnerNormal, UnitLengthAndSupportIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 2 * pi);
  for (const ObstacleSpec& obs : all_families()) {
    const Placement p{0.2, 0.37, 1.3, 1.0, 1.0};
    for (int k = 0; k < 200; ++k) {
      const double phi = uni(rng);
      if (obs.is_corner(phi - p.t)) continue;
      const NormalSample n = inner_normal(obs, p, phi);
      EXPECT_NEAR(norm(n.normal), 1.0, 1e-12);
      const double f = radial_support(obs, phi - p.t);
      const double fp = radial_support_derivative(obs, phi - p.t).value();
      const double lam = p.lambda;
      const double expected = -lam * lam * f * f / std::sqrt(lam * lam * f * f + lam * lam * fp * fp);
      EXPECT_NEAR(dot(boundary_point(obs, p, phi), n.normal), expected, 1e-10);
    }
  }
}

TEST(InnerNormal, CornerCarriesBothOneSidedNormals) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  const NormalSample n = inner_normal(square, Placement{}, 0.0);
  ASSERT_TRUE(n.corner);
  EXPECT_NEAR(norm(n.left), 1.0, 1e-14);
  EXPECT_NEAR(norm(n.right), 1.0, 1e-14);
  EXPECT_NEAR(n.left.y, -n.right.y, 1e-14);
  EXPECT_NEAR(norm(n.normal), 1.0, 1e-14);
  EXPECT_NEAR(n.normal.x, -1.0, 1e-14);
}

TEST(DiskExitRadius, Examples) {
  for (double phi : {0.0, 1.0, 2.5}) EXPECT_NEAR(disk_exit_radius({0.0}, phi), 1.0, 1e-15);
  EXPECT_NEAR(disk_exit_radius({0.5}, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(disk_exit_radius({0.5}, pi / 2), std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(disk_exit_radius({0.5}, pi), 1.5, 1e-15);
  EXPECT_THROW(disk_exit_radius({1.0}, 0.3), DomainError);
}

TEST(DiskExitRadius, PointsLieOnTheCircle) {
  const Placement p{0.63, 0.0, 1.0, 1.4, 1.0};
  for (int k = 0; k < 1000; ++k) {
    const double phi = 2 * pi * k / 1000.0;
    const Vec2 x = polar(disk_exit_radius(p, phi), phi);
    EXPECT_NEAR(norm(x - p.disk_center()), p.r1, 1e-12);
  }
}

TEST(ClassifyOrientation, Examples) {
  EXPECT_EQ(classify_orientation(4, pi / 2), OrientationClass::OFF);
  EXPECT_EQ(classify_orientation(4, 0.0), OrientationClass::OFF);
  EXPECT_EQ(classify_orientation(4, pi / 4), OrientationClass::ON);
  EXPECT_EQ(classify_orientation(5, pi / 5), OrientationClass::ON);
  EXPECT_EQ(classify_orientation(4, pi / 8), OrientationClass::GENERIC);
  EXPECT_EQ(classify_orientation(4, -1e-12), OrientationClass::OFF);
  EXPECT_EQ(classify_orientation(4, 2 * pi - 1e-12), OrientationClass::OFF);
}

TEST(Admissible, Examples) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  const Admissibility touch = admissible(square, {0.78, pi / 4});
  EXPECT_NEAR(touch.margin, 0.0, 5e-3);
  const Admissibility circ = admissible(ObstacleSpec::circle(0.3), {0.7});
  EXPECT_NEAR(circ.margin, 0.0, 1e-9);
  EXPECT_FALSE(circ.ok);
  EXPECT_NEAR(circ.worst_phi, 0.0, 1e-6);
  const Admissibility tiny = admissible(square, {0.0, 0.0, 1e-6});
  EXPECT_NEAR(tiny.margin, 1.0, 1e-6);
  EXPECT_TRUE(tiny.ok);
}

TEST(Admissible, OffTouchesBeforeOn) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  // OFF points a vertex at the near boundary, so it is the first to touch.
  EXPECT_FALSE(admissible(square, {0.72, 0.0}).ok);
  EXPECT_TRUE(admissible(square, {0.72, pi / 4}).ok);
  EXPECT_TRUE(admissible(square, {0.5, 0.0}).free_rotation_ok);
  EXPECT_FALSE(admissible(square, {0.72, pi / 4}).free_rotation_ok);
}

TEST(Admissible, MaxScaleTouches) {
  const ObstacleSpec square = ObstacleSpec::regular_polygon(4, 0.285);
  const Placement p{0.3, 0.2};
  const double lp = max_admissible_scale(square, p);
  Placement inside = p, outside = p;
  inside.lambda = lp * (1 - 1e-6);
  outside.lambda = lp * (1 + 1e-6);
  EXPECT_TRUE(admissible(square, inside).ok);
  EXPECT_FALSE(admissible(square, outside).ok);
}

TEST(Config, RoundTripAndDefaults) {
  const Configuration c = parse_configuration(
      R"({"family":"regular_polygon","n":4,"circumradius":0.285,"epsilon":0.0,"d":0.5,"t":0.0,"lambda":1.0,"r1":1.0,"M":1.0})");
  EXPECT_EQ(c.obstacle.family(), Family::regular_polygon);
  EXPECT_EQ(c.obstacle.order(), 4);
  EXPECT_DOUBLE_EQ(c.placement.d, 0.5);
  const Configuration back = parse_configuration(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  const Configuration bare = parse_configuration(R"({"family":"circle","circumradius":0.3})");
  EXPECT_DOUBLE_EQ(bare.placement.lambda, 1.0);
  EXPECT_DOUBLE_EQ(bare.placement.M, 1.0);
  EXPECT_THROW(parse_configuration(R"({"family":"hexagon","circumradius":0.3})"), InvalidSpec);
  EXPECT_THROW(parse_configuration(R"({"family":"circle","circumradius":0.3,"lambda":-1})"), InvalidSpec);
  EXPECT_THROW(parse_configuration("not json"), InvalidSpec);
}
