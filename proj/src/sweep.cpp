#include "dihedral/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>

#include "dihedral/oracles.hpp"

namespace dihedral {

int sweep_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersVariable)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Runs task(i) for i in [0, count) on a pool; results land by index so the
// order of completion never shows in the output.
template <typename Task>
std::vector<SweepRow> run_indexed(size_t count, int workers, Task task) {
  std::vector<SweepRow> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t n = std::min<size_t>(count, static_cast<size_t>(std::max(1, workers)));
  std::vector<std::thread> pool;
  for (size_t w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string na_status(double phi) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "NA:phi=%.6f", phi);
  return buf;
}

SweepRow row_skeleton(const ObstacleSpec& obs, const Placement& p) {
  SweepRow row;
  row.d = p.d;
  row.t = p.t;
  row.lambda = p.lambda;
  row.M = p.M;
  row.orientation = classify_orientation(obs.order(), p.t);
  return row;
}

void fill_solution(SweepRow& row, const FieldSolution& sol, const AnnularMesh& mesh,
                   bool derivatives) {
  row.energy = sol.energy_volume;
  row.energy_boundary = sol.energy_boundary;
  if (derivatives) {
    const ParameterDerivatives der = parameter_derivatives(sol, mesh);
    row.dE_rotation = der.rotation;
    row.dE_translation_x1 = der.translation;
    row.dE_scaling = der.scaling;
  }
}

}  // namespace

SweepRow evaluate_configuration(const ObstacleSpec& obs, const Placement& p,
                                const SweepOptions& opts) {
  check_resolution(obs, opts.resolution);
  SweepRow row = row_skeleton(obs, p);
  if (!(p.d < p.r1)) {
    row.margin = p.r1 - p.d;
    row.status = na_status(0.0);
    return row;
  }
  const Admissibility adm = admissible(obs, p);
  row.margin = adm.margin;
  if (!adm.ok) {
    row.status = na_status(adm.worst_phi);
    return row;
  }
  ConfigurationSolve cs;
  try {
    cs = solve_configuration(obs, p, opts.resolution);
  } catch (const MeshError&) {
    // Admissible but too close to touching for the structured mesh.
    row.status = na_status(adm.worst_phi);
    return row;
  }
  fill_solution(row, cs.solution, cs.mesh, opts.derivatives);
  return row;
}

std::vector<SweepRow> sweep_rotation(const ObstacleSpec& obs, const Placement& base,
                                     const std::vector<double>& t_grid, const SweepOptions& opts) {
  check_resolution(obs, opts.resolution);
  const Admissibility adm = admissible(obs, base);
  if (!adm.free_rotation_ok)
    throw DomainError("sweep_rotation: lambda rho2 + d must stay below r1 for a free rotation");
  return run_indexed(t_grid.size(), sweep_workers(opts.workers), [&](size_t i) {
    Placement p = base;
    p.t = t_grid[i];
    return evaluate_configuration(obs, p, opts);
  });
}

std::vector<SweepRow> sweep_translation(const ObstacleSpec& obs, const Placement& base,
                                        const std::vector<double>& d_grid,
                                        const SweepOptions& opts) {
  return run_indexed(d_grid.size(), sweep_workers(opts.workers), [&](size_t i) {
    Placement p = base;
    p.d = d_grid[i];
    return evaluate_configuration(obs, p, opts);
  });
}

std::vector<SweepRow> sweep_scale(const ObstacleSpec& obs, const Placement& base,
                                  const std::vector<double>& lambda_grid,
                                  const SweepOptions& opts) {
  return run_indexed(lambda_grid.size(), sweep_workers(opts.workers), [&](size_t i) {
    Placement p = base;
    p.lambda = lambda_grid[i];
    return evaluate_configuration(obs, p, opts);
  });
}

std::vector<SweepRow> sweep_boundary_data(const ObstacleSpec& obs, const Placement& p,
                                          const std::vector<double>& M_grid,
                                          const SweepOptions& opts) {
  check_resolution(obs, opts.resolution);
  const Admissibility adm = admissible(obs, p);
  if (!adm.ok) {
    std::vector<SweepRow> rows;
    for (double M : M_grid) {
      Placement q = p;
      q.M = M;
      SweepRow row = row_skeleton(obs, q);
      row.margin = adm.margin;
      row.status = na_status(adm.worst_phi);
      rows.push_back(row);
    }
    return rows;
  }
  const AnnularMesh mesh = generate_mesh(obs, p, opts.resolution);
  const StiffnessSystem system = assemble(mesh);
  return run_indexed(M_grid.size(), sweep_workers(opts.workers), [&](size_t i) {
    Placement q = p;
    q.M = M_grid[i];
    SweepRow row = row_skeleton(obs, q);
    row.margin = adm.margin;
    fill_solution(row, solve_dirichlet(system, q.M), mesh, opts.derivatives);
    return row;
  });
}

std::vector<double> rotation_grid(const ObstacleSpec& obs, int count) {
  if (count < 2) throw std::invalid_argument("rotation_grid: need at least two points");
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) grid[k] = k * obs.period() / (count - 1);
  return grid;
}

SweepExtremes extremes(const std::vector<SweepRow>& rows) {
  SweepExtremes ex;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].energy) continue;
    if (!ex.argmin || *rows[i].energy < *rows[*ex.argmin].energy) ex.argmin = i;
    if (!ex.argmax || *rows[i].energy > *rows[*ex.argmax].energy) ex.argmax = i;
  }
  return ex;
}

std::string csv_header() {
  return "d,theta,lambda,M,energy,energy_boundary,dE_rotation,dE_translation_x1,dE_scaling,"
         "orientation,margin,status";
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << csv_header() << '\n';
  for (const SweepRow& r : rows) {
    out << num(r.d) << ',' << num(r.t) << ',' << num(r.lambda) << ',' << num(r.M) << ','
        << num(r.energy) << ',' << num(r.energy_boundary) << ',' << num(r.dE_rotation) << ','
        << num(r.dE_translation_x1) << ',' << num(r.dE_scaling) << ',' << to_string(r.orientation)
        << ',' << num(r.margin) << ',' << r.status << '\n';
  }
}

std::vector<Resolution> default_convergence_levels() {
  return {{64, 16, 1.5, 1.0}, {128, 32, 1.5, 1.0}, {256, 64, 1.5, 1.0}, {512, 128, 1.5, 1.0}};
}

std::vector<ConvergenceRow> convergence_study(double r0, double d, double r1, double M,
                                              const std::vector<Resolution>& levels) {
  const ObstacleSpec circle = ObstacleSpec::circle(r0);
  const Placement p{d, 0.0, 1.0, r1, M};
  const double exact = annulus_exact_energy(r0, r1, d, M);
  std::vector<ConvergenceRow> rows;
  for (const Resolution& res : levels) {
    check_resolution(circle, res);
    const ConfigurationSolve cs = solve_configuration(circle, p, res);
    ConvergenceRow row;
    row.resolution = res;
    row.h_max = cs.mesh.h_max;
    row.energy = cs.solution.energy_volume;
    row.exact = exact;
    row.error = std::abs(row.energy - exact);
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.order = std::log(prev.error / row.error) / std::log(prev.h_max / row.h_max);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dihedral
