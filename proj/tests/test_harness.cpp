#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dihedral/acceptance.hpp"
#include "dihedral/oracles.hpp"
#include "dihedral/sweep.hpp"

using namespace dihedral;
using std::numbers::pi;

namespace {

const ObstacleSpec kSquare = ObstacleSpec::regular_polygon(4, kSquareCircumradius);
const ObstacleSpec kPentagon = ObstacleSpec::regular_polygon(5, kPentagonCircumradius);
const ObstacleSpec kCircle = ObstacleSpec::circle(kCircleRadius);

SweepOptions energy_only(Resolution r = {256, 64}) { return {r, false, 0}; }

std::vector<double> energies(const std::vector<SweepRow>& rows) {
  std::vector<double> e;
  for (const SweepRow& r : rows) e.push_back(r.energy.value());
  return e;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  write_csv(s, rows);
  return s.str();
}

}  // namespace

TEST(AnnulusOracle, ReferenceTableValues) {
  EXPECT_NEAR(annulus_exact_energy(0.3, 1.0, 0.0, 1.0), 5.21871, 5e-6);
  EXPECT_NEAR(annulus_exact_energy(0.3, 1.0, 0.5, 1.0), 7.24692, 5e-6);
  EXPECT_NEAR(annulus_exact_energy(0.3, 1.0, 0.6, 1.0), 9.71217, 5e-6);
  EXPECT_NEAR(std::acosh(1.4), 0.8670147, 1e-7);
  EXPECT_NEAR(2 * pi / 0.8670147, 7.24692, 5e-6);
}

TEST(AnnulusOracle, ConcentricLimitAndScaling) {
  EXPECT_NEAR(annulus_exact_energy(0.3, 1.0, 0.0, 1.0), 2 * pi / std::log(1.0 / 0.3), 1e-12);
  EXPECT_NEAR(annulus_exact_energy(0.3, 1.0, 0.2, 3.0), 9.0 * annulus_exact_energy(0.3, 1.0, 0.2, 1.0), 1e-12);
  // Only the ratio of the radii and d / r1 matter.
  EXPECT_NEAR(annulus_exact_energy(0.6, 2.0, 0.4, 1.0), annulus_exact_energy(0.3, 1.0, 0.2, 1.0), 1e-12);
}

TEST(AnnulusOracle, TangencyIsAnError) {
  EXPECT_THROW(annulus_exact_energy(0.3, 1.0, 0.7, 1.0), DomainError);
  EXPECT_THROW(annulus_exact_energy(0.3, 1.0, 0.9, 1.0), DomainError);
  EXPECT_THROW(annulus_exact_energy(0.0, 1.0, 0.1, 1.0), InvalidSpec);
}

TEST(SweepRotation, SquareMatchesTableOrdering) {
  const std::vector<double> t{0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};
  const auto rows = sweep_rotation(kSquare, {0.5}, t, energy_only());
  ASSERT_EQ(rows.size(), 5u);
  const auto e = energies(rows);
  EXPECT_GT(e[0], e[1]);
  EXPECT_GT(e[1], e[2]);
  EXPECT_LT(e[2], e[3]);
  EXPECT_LT(e[3], e[4]);
  const double table[] = {5.57787, 5.57389, 5.56991, 5.57386, 5.57787};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(e[k], table[k], 0.05 * table[k]);
  EXPECT_EQ(rows[0].orientation, OrientationClass::OFF);
  EXPECT_EQ(rows[1].orientation, OrientationClass::GENERIC);
  EXPECT_EQ(rows[2].orientation, OrientationClass::ON);
  EXPECT_EQ(rows[4].orientation, OrientationClass::OFF);
  const SweepExtremes ex = extremes(rows);
  EXPECT_EQ(*ex.argmin, 2u);
  EXPECT_TRUE(*ex.argmax == 0u || *ex.argmax == 4u);
}

TEST(SweepRotation, PentagonOrdering) {
  const std::vector<double> t{0.0, pi / 10, pi / 5, 3 * pi / 10, 2 * pi / 5};
  const auto e = energies(sweep_rotation(kPentagon, {0.5}, t, energy_only({260, 64})));
  EXPECT_GT(e[0], e[1]);
  EXPECT_GT(e[1], e[2]);
  EXPECT_LT(e[2], e[3]);
  EXPECT_LT(e[3], e[4]);
  const double table[] = {6.30518, 6.30239};
  EXPECT_NEAR(e[0], table[0], 0.05 * table[0]);
}

TEST(SweepRotation, CircleIsRotationInvariant) {
  const auto e = energies(sweep_rotation(kCircle, {0.5}, {0.0, 0.1, 0.37, 1.0, 2.0}, energy_only({128, 32})));
  for (double x : e) EXPECT_NEAR(x, e[0], 1e-8 * e[0]);
}

TEST(SweepRotation, InadmissibleBeforeAnySolve) {
  EXPECT_THROW(sweep_rotation(kSquare, {0.75}, {0.0, pi / 4}, energy_only()), DomainError);
}

TEST(SweepRows, IncompatibleResolutionIsAnErrorNotNa) {
  EXPECT_THROW(sweep_rotation(kPentagon, {0.5}, {0.0, 0.1}, energy_only({256, 16})), ResolutionError);
  EXPECT_THROW(sweep_translation(kPentagon, {}, {0.0, 0.9}, energy_only({256, 16})), ResolutionError);
  EXPECT_THROW(sweep_scale(kPentagon, {}, {1.0}, energy_only({256, 16})), ResolutionError);
  EXPECT_THROW(sweep_boundary_data(kPentagon, {0.5}, {1.0}, energy_only({256, 16})), ResolutionError);
}

TEST(SweepTranslation, CircleMatchesTable) {
  const std::vector<double> d{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const double table[] = {5.21871, 5.2671, 5.4221, 5.7192, 6.24655, 7.24692, 9.71217};
  const auto e = energies(sweep_translation(kCircle, {}, d, energy_only()));
  for (size_t k = 0; k < d.size(); ++k) EXPECT_NEAR(e[k], table[k], 0.01 * table[k]);
}

TEST(SweepTranslation, SquareIncreasesAndReportsNa) {
  const auto rows = sweep_translation(kSquare, {}, {0.0, 0.4, 0.5, 0.7, 0.75, 0.9}, energy_only({128, 32}));
  ASSERT_EQ(rows.size(), 6u);
  const auto e = energies({rows.begin(), rows.begin() + 4});
  EXPECT_LT(e[0], e[1]);
  EXPECT_LT(e[1], e[2]);
  EXPECT_LT(e[2], e[3]);
  for (size_t k : {4u, 5u}) {
    EXPECT_FALSE(rows[k].ok());
    EXPECT_FALSE(rows[k].energy.has_value());
    EXPECT_EQ(rows[k].status.rfind("NA:phi=", 0), 0u);
    EXPECT_LE(rows[k].margin, 0.0);
  }
  for (size_t k = 0; k < 4; ++k) EXPECT_GT(rows[k].margin, 0.0);
}

TEST(SweepTranslation, MinimumAtConcentricPosition) {
  const ObstacleSpec star(Family::cosine_star, 3, 0.3, 0.2);
  const auto e = energies(sweep_translation(star, {0.0, 0.4}, {0.0, 0.05, 0.2, 0.4}, energy_only({132, 32})));
  EXPECT_EQ(std::min_element(e.begin(), e.end()) - e.begin(), 0);
}

TEST(SweepScale, SquareTableColumn) {
  const auto rows = sweep_scale(kSquare, {}, {0.5, 1.0, 1.5, 2.0}, energy_only());
  const auto e = energies(rows);
  const double table[] = {2.96043, 4.37408, 6.07416, 8.40577};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(e[k], table[k], 0.01 * table[k]);
  for (int k = 1; k < 4; ++k) EXPECT_GT(e[k], e[k - 1]);
}

TEST(SweepScale, PentagonIncreases) {
  const auto e = energies(sweep_scale(kPentagon, {0.4, pi / 10}, {0.5, 1.0, 1.5, 2.0}, energy_only({260, 64})));
  for (int k = 1; k < 4; ++k) EXPECT_GT(e[k], e[k - 1]);
}

TEST(SweepScale, ConcentricCircleClosedForm) {
  const auto rows = sweep_scale(kCircle, {}, {0.5, 1.0, 1.5}, energy_only());
  for (const SweepRow& r : rows) {
    const double exact = 2 * pi / std::log(1.0 / (0.3 * r.lambda));
    EXPECT_NEAR(*r.energy, exact, 0.01 * exact);
  }
}

TEST(SweepScale, PastTheLargestScaleIsNa) {
  const double lp = max_admissible_scale(kSquare, {0.3});
  const auto rows = sweep_scale(kSquare, {0.3}, {0.5 * lp, 1.2 * lp}, energy_only({64, 16}));
  EXPECT_TRUE(rows[0].ok());
  EXPECT_FALSE(rows[1].ok());
}

TEST(SweepBoundaryData, QuadraticScaling) {
  const auto rows = sweep_boundary_data(kSquare, {0.5, 0.3}, {1.0, 2.0, -1.0, 0.0, 10.0}, energy_only({128, 32}));
  const auto e = energies(rows);
  EXPECT_NEAR(e[1] / e[0], 4.0, 1e-8);
  EXPECT_NEAR(e[2] / e[0], 1.0, 1e-8);
  EXPECT_EQ(e[3], 0.0);
  EXPECT_NEAR(e[4] / e[0], 100.0, 1e-6);
}

TEST(SweepRows, DerivativesAreFilled) {
  const auto rows = sweep_translation(kSquare, {0.0, 0.3}, {0.2}, {{64, 16}, true, 1});
  ASSERT_TRUE(rows[0].dE_rotation && rows[0].dE_translation_x1 && rows[0].dE_scaling);
  EXPECT_GT(*rows[0].dE_translation_x1, 0.0);
  EXPECT_GT(*rows[0].dE_scaling, 0.0);
  EXPECT_LT(*rows[0].dE_rotation, 0.0);
}

TEST(Csv, HeaderAndNaRow) {
  EXPECT_EQ(csv_header(),
            "d,theta,lambda,M,energy,energy_boundary,dE_rotation,dE_translation_x1,dE_scaling,"
            "orientation,margin,status");
  const auto rows = sweep_translation(kCircle, {}, {0.8}, energy_only({64, 16}));
  const std::string text = to_csv(rows);
  EXPECT_NE(text.find("0.8,0,1,1,,,,,,OFF,"), std::string::npos) << text;
  EXPECT_NE(text.find(",NA:phi="), std::string::npos);
}

TEST(Csv, IdenticalAcrossWorkerCounts) {
  const std::vector<double> t = rotation_grid(kSquare, 7);
  const std::string one = to_csv(sweep_rotation(kSquare, {0.5}, t, {{64, 16}, true, 1}));
  const std::string three = to_csv(sweep_rotation(kSquare, {0.5}, t, {{64, 16}, true, 3}));
  const std::string again = to_csv(sweep_rotation(kSquare, {0.5}, t, {{64, 16}, true, 3}));
  EXPECT_EQ(one, three);
  EXPECT_EQ(three, again);
}

TEST(RotationGrid, SpansOnePeriod) {
  const auto g = rotation_grid(kSquare, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_NEAR(g[2], pi / 4, 1e-15);
  EXPECT_NEAR(g[4], pi / 2, 1e-15);
  EXPECT_THROW(rotation_grid(kSquare, 1), std::invalid_argument);
}

TEST(SweepWorkers, ExplicitAndEnvironment) {
  EXPECT_EQ(sweep_workers(3), 3);
  setenv(kWorkersVariable, "2", 1);
  EXPECT_EQ(sweep_workers(), 2);
  setenv(kWorkersVariable, "junk", 1);
  EXPECT_GE(sweep_workers(), 1);
  unsetenv(kWorkersVariable);
}

TEST(Convergence, SecondOrderAgainstClosedForm) {
  const auto rows = convergence_study(0.3, 0.5, 1.0, 1.0, default_convergence_levels());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].order.has_value());
  for (size_t k = 1; k < rows.size(); ++k) {
    EXPECT_GE(*rows[k].order, 1.6);
    EXPECT_LE(*rows[k].order, 2.4);
    EXPECT_LT(rows[k].error, rows[k - 1].error);
  }
}

TEST(Acceptance, ReportFormatting) {
  CriterionResult r;
  r.id = 9;
  r.title = "boundary data scaling";
  r.passed = true;
  r.detail = "x";
  EXPECT_EQ(format_result(r).rfind("criterion 9: PASS  boundary data scaling | x", 0), 0u);
  EXPECT_THROW(run_criterion(12), std::invalid_argument);
}

TEST(Acceptance, CheapCriteriaPass) {
  for (int id : {6, 9}) EXPECT_TRUE(run_criterion(id).passed) << format_result(run_criterion(id));
}
