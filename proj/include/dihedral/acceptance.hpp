#pragma once

// Numbered acceptance checks against closed forms, the reference tables and
// the qualitative theorems. Each check reports its measured quantities.

#include <functional>
#include <string>
#include <vector>

#include "dihedral/sweep.hpp"

namespace dihedral {

// Calibrated reference geometry.
inline constexpr double kSquareCircumradius = 0.285;
inline constexpr double kPentagonCircumradius = 0.30;
inline constexpr double kCircleRadius = 0.3;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Measured values and the thresholds they were held to.
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  Resolution resolution{256, 64, 1.5, 1.0};
  int workers = 0;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

/// Runs the listed criteria (all when empty), calling report after each.
std::vector<CriterionResult> run_acceptance(
    const std::vector<int>& ids = {}, const AcceptanceOptions& opts = {},
    const std::function<void(const CriterionResult&)>& report = {});

/// "criterion N: PASS|FAIL  title | detail (Xs)"
std::string format_result(const CriterionResult& r);

}  // namespace dihedral
