#pragma once

// Parameter sweeps over rotation, offset, scale and boundary datum, with CSV
// output. Grid points are solved concurrently and emitted in grid order.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dihedral/shape_calculus.hpp"

namespace dihedral {

/// Environment variable holding the worker count for sweeps.
inline constexpr const char* kWorkersVariable = "DIHEDRAL_WORKERS";

struct SweepRow {
  double d = 0.0;
  double t = 0.0;
  double lambda = 1.0;
  double M = 1.0;
  std::optional<double> energy;
  std::optional<double> energy_boundary;
  std::optional<double> dE_rotation;
  std::optional<double> dE_translation_x1;
  std::optional<double> dE_scaling;
  OrientationClass orientation = OrientationClass::GENERIC;
  double margin = 0.0;
  /// "ok", or "NA:phi=<angle>" when the grid point is inadmissible.
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct SweepOptions {
  Resolution resolution{};
  bool derivatives = true;
  /// 0 reads the worker variable, falling back to the hardware thread count.
  int workers = 0;
};

int sweep_workers(int requested = 0);

/// Evaluates one configuration. Inadmissible placements give an NA row.
SweepRow evaluate_configuration(const ObstacleSpec& obs, const Placement& p,
                                const SweepOptions& opts = {});

// Each sweep varies one field of the base placement over the grid.

/// Throws DomainError before any solve unless lambda rho2 + d < r1.
std::vector<SweepRow> sweep_rotation(const ObstacleSpec& obs, const Placement& base,
                                     const std::vector<double>& t_grid, const SweepOptions& opts = {});
std::vector<SweepRow> sweep_translation(const ObstacleSpec& obs, const Placement& base,
                                        const std::vector<double>& d_grid,
                                        const SweepOptions& opts = {});
std::vector<SweepRow> sweep_scale(const ObstacleSpec& obs, const Placement& base,
                                  const std::vector<double>& lambda_grid,
                                  const SweepOptions& opts = {});
/// Rows share one mesh and one assembled system.
std::vector<SweepRow> sweep_boundary_data(const ObstacleSpec& obs, const Placement& p,
                                          const std::vector<double>& M_grid,
                                          const SweepOptions& opts = {});

/// Uniform grid of count points over [0, 2 pi / n], both ends included.
std::vector<double> rotation_grid(const ObstacleSpec& obs, int count);

struct SweepExtremes {
  std::optional<size_t> argmin;
  std::optional<size_t> argmax;
};
SweepExtremes extremes(const std::vector<SweepRow>& rows);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string csv_header();

struct ConvergenceRow {
  Resolution resolution;
  double h_max = 0.0;
  double energy = 0.0;
  double exact = 0.0;
  double error = 0.0;
  /// Observed order against the previous level; absent on the first.
  std::optional<double> order;
};

/// Circle obstacle of radius r0 at offset d against the eccentric annulus
/// closed form, on the given resolutions.
std::vector<ConvergenceRow> convergence_study(double r0, double d, double r1, double M,
                                              const std::vector<Resolution>& levels);
std::vector<Resolution> default_convergence_levels();

}  // namespace dihedral
