#include "dihedral/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include "dihedral/oracles.hpp"

namespace dihedral {

namespace {

using std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[2048];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

CriterionResult titled(int id, const char* title) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  return r;
}

ObstacleSpec square() { return ObstacleSpec::regular_polygon(4, kSquareCircumradius); }
ObstacleSpec pentagon() { return ObstacleSpec::regular_polygon(5, kPentagonCircumradius); }
ObstacleSpec circle() { return ObstacleSpec::circle(kCircleRadius); }

SweepOptions sweep_options(const AcceptanceOptions& o, const Resolution& res, bool derivatives) {
  return {res, derivatives, o.workers};
}

// Pentagon resolutions must be multiples of 2n.
Resolution fit_to_order(Resolution res, int n) {
  res.n_phi = compatible_n_phi(res.n_phi, n);
  return res;
}

double energy_of(const SweepRow& row) {
  if (!row.energy) throw std::runtime_error("grid point " + row.status + " has no energy");
  return *row.energy;
}

std::vector<double> energies(const std::vector<SweepRow>& rows) {
  std::vector<double> e;
  for (const SweepRow& r : rows) e.push_back(energy_of(r));
  return e;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v, const char* f = "%.6f") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(f, v[i]);
  return s;
}

// Eccentric annulus against the closed form and the reference table.
CriterionResult annulus_oracle(const AcceptanceOptions& o) {
  CriterionResult r = titled(1, "eccentric annulus oracle");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> d_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const std::vector<double> table{5.21871, 5.2671, 5.4221, 5.7192, 6.24655, 7.24692, 9.71217};
  const Placement base{0.0, 0.0, 1.0, 1.0, 1.0};
  const Resolution coarse = o.resolution;
  const Resolution fine = coarse.refined();
  const auto e1 = energies(sweep_translation(circle(), base, d_grid, sweep_options(o, coarse, false)));
  const auto e2 = energies(sweep_translation(circle(), base, d_grid, sweep_options(o, fine, false)));
  double worst1 = 0.0, worst2 = 0.0, worst_table = 0.0, worst_oracle_table = 0.0;
  for (size_t i = 0; i < d_grid.size(); ++i) {
    const double exact = annulus_exact_energy(kCircleRadius, 1.0, d_grid[i], 1.0);
    worst1 = std::max(worst1, std::abs(e1[i] - exact) / exact);
    worst2 = std::max(worst2, std::abs(e2[i] - exact) / exact);
    worst_table = std::max(worst_table, std::abs(e1[i] - table[i]) / table[i]);
    worst_oracle_table = std::max(worst_oracle_table, std::abs(exact - table[i]) / table[i]);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = worst1 < 1e-2 && worst2 < 2.5e-3 && worst_table < 1e-2 && worst_oracle_table < 1e-2 &&
             r.seconds < 60.0;
  r.detail = fmt("max rel err %.2e at %dx%d (<1e-2), %.2e at %dx%d (<2.5e-3), vs table %.2e (<1e-2), "
                 "closed form vs table %.2e, runtime %.1fs (<60s); E = %s",
                 worst1, coarse.n_phi, coarse.n_r, worst2, fine.n_phi, fine.n_r, worst_table,
                 worst_oracle_table, r.seconds, list(e1, "%.5f").c_str());
  return r;
}

CriterionResult square_rotation(const AcceptanceOptions& o) {
  CriterionResult r = titled(2, "square rotation extremals");
  const std::vector<double> t{0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};
  const std::vector<double> table{5.57787, 5.57389, 5.56991, 5.57386, 5.57787};
  const auto e = energies(sweep_rotation(square(), {0.5, 0.0, 1.0, 1.0, 1.0}, t,
                                         sweep_options(o, o.resolution, false)));
  const bool order = e[0] > e[1] && e[1] > e[2] && e[2] < e[3] && e[3] < e[4];
  const double period_gap = std::abs(e[0] - e[4]) / e[0];
  double worst_table = 0.0;
  for (size_t i = 0; i < e.size(); ++i)
    worst_table = std::max(worst_table, std::abs(e[i] - table[i]) / table[i]);
  const double spread = (e[0] - e[2]) / e[0];
  const double table_spread = (table[0] - table[2]) / table[0];
  // Same order of magnitude: within a factor of ten either way.
  const double ratio = spread / table_spread;
  r.passed = order && period_gap < 1e-6 && worst_table < 5e-2 && ratio >= 0.1 && ratio <= 10.0;
  r.detail = fmt("E = %s; ordering %s; |E(0)-E(pi/2)|/E(0) = %.1e (<1e-6); max rel diff to table %.2e "
                 "(<5e-2); OFF-ON spread %.3f%% vs table %.3f%% (ratio %.2f, within [0.1, 10])",
                 list(e).c_str(), order ? "ok" : "violated", period_gap, worst_table, 100 * spread,
                 100 * table_spread, ratio);
  return r;
}

CriterionResult pentagon_rotation(const AcceptanceOptions& o) {
  CriterionResult r = titled(3, "pentagon ordering (odd order evidence)");
  const std::vector<double> t{0.0, pi / 10, pi / 5, 3 * pi / 10, 2 * pi / 5};
  const auto e = energies(sweep_rotation(pentagon(), {0.5, 0.0, 1.0, 1.0, 1.0}, t,
                                         sweep_options(o, fit_to_order(o.resolution, 5), false)));
  const bool order = e[0] > e[1] && e[1] > e[2];
  const bool mirror = e[2] < e[3] && e[3] < e[4];
  r.passed = order;
  r.detail = fmt("E = %s; E(0) > E(pi/10) > E(pi/5): %s; mirrored half %s; reported as evidence for the "
                 "odd-order conjecture",
                 list(e).c_str(), order ? "holds" : "fails", mirror ? "increasing" : "not increasing");
  return r;
}

CriterionResult critical_points(const AcceptanceOptions& o) {
  CriterionResult r = titled(4, "rotation critical points");
  bool ok = true;
  std::string detail;
  for (const ObstacleSpec& obs : {square(), pentagon()}) {
    const int n = obs.order();
    const Resolution res = fit_to_order(o.resolution, n);
    const std::vector<double> t{0.0, pi / n, 2 * pi / n};
    const auto rows = sweep_rotation(obs, {0.5, 0.0, 1.0, 1.0, 1.0}, t, sweep_options(o, res, true));
    const AnnularMesh mesh = generate_mesh(obs, {0.5, 0.0, 1.0, 1.0, 1.0}, res);
    double worst = 0.0, tol = 0.0;
    for (const SweepRow& row : rows) {
      const double bound = derivative_zero_tolerance(mesh, energy_of(row));
      tol = bound;
      worst = std::max(worst, std::abs(*row.dE_rotation));
      if (!(std::abs(*row.dE_rotation) <= bound)) ok = false;
    }
    detail += fmt("n=%d max|dE/dt| at kpi/n %.2e (tol 5h^2E = %.2e); ", n, worst, tol);
  }
  std::vector<double> interior;
  for (int k = 1; k <= 5; ++k) interior.push_back(k * (pi / 4) / 6);
  const auto rows =
      sweep_rotation(square(), {0.5, 0.0, 1.0, 1.0, 1.0}, interior, sweep_options(o, o.resolution, true));
  std::vector<double> dt;
  for (const SweepRow& row : rows) dt.push_back(*row.dE_rotation);
  const bool negative = std::all_of(dt.begin(), dt.end(), [](double v) { return v < 0.0; });
  r.passed = ok && negative;
  r.detail = detail + fmt("square dE/dt on (0, pi/4): %s (%s)", list(dt, "%.3e").c_str(),
                          negative ? "all negative" : "sign violation");
  return r;
}

CriterionResult finite_differences(const AcceptanceOptions& o) {
  CriterionResult r = titled(5, "shape derivative vs finite differences");
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    ParameterKind kind;
    Placement p;
  };
  const Case cases[] = {{"rotation@t=pi/8", ParameterKind::rotation, {0.5, pi / 8, 1.0, 1.0, 1.0}},
                        {"translation@d=0.4", ParameterKind::translation, {0.4, 0.0, 1.0, 1.0, 1.0}},
                        {"scaling@lambda=1", ParameterKind::scaling, {0.0, 0.0, 1.0, 1.0, 1.0}}};
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const auto a = finite_difference_check(square(), c.p, c.kind, 1e-3, o.resolution);
    const auto b = finite_difference_check(square(), c.p, c.kind, 1e-3, o.resolution.refined());
    const bool pass = a.rel_error < 1e-2 && b.rel_error < a.rel_error;
    ok = ok && pass;
    detail += fmt("%s analytic %.6g fd %.6g rel err %.2e -> %.2e %s; ", c.name, a.analytic,
                  a.central_fd, a.rel_error, b.rel_error, pass ? "ok" : "FAIL");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = ok && r.seconds < 120.0;
  r.detail = detail + fmt("limits <1e-2 and decreasing; runtime %.1fs (<120s)", r.seconds);
  return r;
}

CriterionResult green_identity(const AcceptanceOptions& o) {
  CriterionResult r = titled(6, "Green identity residual");
  const ConfigurationSolve cs = solve_configuration(square(), {0.5, pi / 8, 1.0, 1.0, 1.0}, o.resolution);
  const PerturbationField v = PerturbationField::rotational();
  const ShapeDerivativeSolution w = solve_shape_derivative_bvp(cs.system, cs.solution, cs.mesh, v);
  const double de = eulerian_derivative(cs.solution, cs.mesh, v);
  const double rel = w.residual / std::abs(de);
  r.passed = rel < 1e-2;
  r.detail = fmt("dE = %.6e, boundary route %.6e, flux route %.6e, residual/|dE| = %.2e (<1e-2)", de,
                 w.boundary_route, -w.flux_route, rel);
  return r;
}

CriterionResult translation_monotonicity(const AcceptanceOptions& o) {
  CriterionResult r = titled(7, "translation monotonicity");
  const std::vector<double> d_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  bool ok = true;
  std::string detail;
  for (const ObstacleSpec& obs : {square(), circle()}) {
    const auto e = energies(sweep_translation(obs, {0.0, 0.0, 1.0, 1.0, 1.0}, d_grid,
                                              sweep_options(o, o.resolution, false)));
    const bool inc = strictly_increasing(e);
    const bool min_at_zero = std::min_element(e.begin(), e.end()) == e.begin();
    ok = ok && inc && min_at_zero;
    detail += fmt("%s: E = %s (%s, min at d=0 %s); ", std::string(to_string(obs.family())).c_str(),
                  list(e).c_str(), inc ? "increasing" : "NOT increasing", min_at_zero ? "yes" : "no");
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult scaling_monotonicity(const AcceptanceOptions& o) {
  CriterionResult r = titled(8, "scaling monotonicity");
  const std::vector<double> grid{0.05, 0.25, 0.5, 1.0, 1.5};
  const auto rows = sweep_scale(square(), {0.0, 0.0, 1.0, 1.0, 1.0}, grid,
                                sweep_options(o, o.resolution, true));
  const auto e = energies(rows);
  const std::vector<double> main(e.begin() + 1, e.end());
  std::vector<double> de, de_field;
  for (size_t i = 0; i < rows.size(); ++i) {
    de.push_back(*rows[i].dE_scaling);
    de_field.push_back(*rows[i].dE_scaling * grid[i]);
  }
  const bool inc = strictly_increasing(main);
  const bool ratio = e[1] < 0.7 * e[3];
  const bool positive = std::all_of(de.begin() + 1, de.end(), [](double v) { return v > 0.0; });
  const bool decay = e[0] < e[1];
  r.passed = inc && ratio && positive && decay;
  r.detail = fmt("lambda = 0.05 0.25 0.5 1 1.5: E = %s; increasing on {0.25..1.5} %s; E(0.25)/E(1) = %.3f "
                 "(<0.7); dE/dlambda = %s (%s); E(0.05) < E(0.25) %s; lambda dE/dlambda = %s",
                 list(e).c_str(), inc ? "yes" : "no", e[1] / e[3], list(de, "%.4f").c_str(),
                 positive ? "positive" : "sign violation", decay ? "yes" : "no",
                 list(de_field, "%.4f").c_str());
  return r;
}

CriterionResult boundary_data(const AcceptanceOptions& o) {
  CriterionResult r = titled(9, "boundary data scaling");
  const auto rows = sweep_boundary_data(square(), {0.5, pi / 8, 1.0, 1.0, 1.0}, {1.0, -1.0, 2.0, 10.0},
                                        sweep_options(o, o.resolution, false));
  const auto e = energies(rows);
  const double alphas[] = {-1.0, 2.0, 10.0};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, std::abs(e[k + 1] / (alphas[k] * alphas[k] * e[0]) - 1.0));
  const double sign_gap = std::abs(e[0] - e[1]) / e[0];
  r.passed = worst < 1e-8 && sign_gap <= kSolverTolerance;
  r.detail = fmt("max |E(aM)/(a^2 E(M)) - 1| over a in {-1,2,10} = %.2e (<1e-8); |E(M)-E(-M)|/E = %.1e "
                 "(<=%.0e)",
                 worst, sign_gap, kSolverTolerance);
  return r;
}

CriterionResult qualitative(const AcceptanceOptions& o) {
  CriterionResult r = titled(10, "discrete maximum principle and Hopf signs");
  struct Case {
    ObstacleSpec obs;
    Placement p;
  };
  const Case cases[] = {{square(), {0.5, 0.0, 1.0, 1.0, 1.0}},
                        {square(), {0.5, pi / 8, 1.0, 1.0, 1.0}},
                        {pentagon(), {0.5, pi / 10, 1.0, 1.0, 1.0}},
                        {circle(), {0.5, 0.0, 1.0, 1.0, 1.0}},
                        {ObstacleSpec(Family::cosine_star, 5, 0.3, 0.2), {0.4, 0.3, 1.0, 1.0, 1.0}}};
  bool ok = true;
  double u_min = 1.0, u_max = 0.0, inner_max = -1e300, outer_min = 1e300;
  int checked = 0;
  for (const Case& c : cases) {
    const ConfigurationSolve cs =
        solve_configuration(c.obs, c.p, fit_to_order(o.resolution, c.obs.order()));
    for (double u : cs.solution.u) {
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
    }
    const std::vector<bool> corner = corner_nodes(cs.mesh);
    for (size_t k = 0; k < corner.size(); ++k) {
      if (corner[k]) continue;
      inner_max = std::max(inner_max, cs.solution.inner_flux[k]);
      ++checked;
    }
    for (double q : cs.solution.outer_flux) outer_min = std::min(outer_min, q);
  }
  ok = u_min >= -1e-8 && u_max <= 1.0 + 1e-8 && inner_max < 0.0 && outer_min > 0.0;
  r.passed = ok;
  r.detail = fmt("5 configurations, M=1: u in [%.3e, %.12f] (bounds [-1e-8, 1+1e-8]); max non-corner "
                 "inner flux %.4f (<0) over %d nodes; min outer flux %.4f (>0)",
                 u_min, u_max, inner_max, checked, outer_min);
  return r;
}

CriterionResult symmetry(const AcceptanceOptions& o) {
  CriterionResult r = titled(11, "rotation symmetry suite");
  const ObstacleSpec obs = square();
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> uni(0.0, obs.period());
  std::vector<double> t;
  for (int k = 0; k < 5; ++k) t.push_back(uni(rng));
  std::vector<double> grid;
  for (double tk : t) {
    grid.push_back(tk);
    grid.push_back(tk + obs.period());
    grid.push_back(-tk);
  }
  const auto e = energies(sweep_rotation(obs, {0.5, 0.0, 1.0, 1.0, 1.0}, grid,
                                         sweep_options(o, o.resolution, false)));
  double worst_period = 0.0, worst_even = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double base = e[3 * k];
    worst_period = std::max(worst_period, std::abs(base - e[3 * k + 1]) / base);
    worst_even = std::max(worst_even, std::abs(base - e[3 * k + 2]) / base);
  }
  r.passed = worst_period <= 1e-8 && worst_even <= 1e-8;
  r.detail = fmt("square d=0.5 at t = %s: max |E(t)-E(t+pi/2)|/E = %.1e, max |E(t)-E(-t)|/E = %.1e "
                 "(<=1e-8)",
                 list(t, "%.4f").c_str(), worst_period, worst_even);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = annulus_oracle(opts); break;
      case 2: r = square_rotation(opts); break;
      case 3: r = pentagon_rotation(opts); break;
      case 4: r = critical_points(opts); break;
      case 5: r = finite_differences(opts); break;
      case 6: r = green_identity(opts); break;
      case 7: r = translation_monotonicity(opts); break;
      case 8: r = scaling_monotonicity(opts); break;
      case 9: r = boundary_data(opts); break;
      case 10: r = qualitative(opts); break;
      case 11: r = symmetry(opts); break;
      default: throw std::invalid_argument(fmt("no acceptance criterion %d", id));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "aborted";
    r.passed = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& report) {
  std::vector<int> todo = ids;
  if (todo.empty())
    for (int k = 1; k <= kCriterionCount; ++k) todo.push_back(k);
  std::vector<CriterionResult> out;
  for (int id : todo) {
    out.push_back(run_criterion(id, opts));
    if (report) report(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("criterion %d: %s  %s | ", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str()) + r.detail +
         fmt(" (%.1fs)", r.seconds);
}

}  // namespace dihedral
