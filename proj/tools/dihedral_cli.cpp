// Command-line front end: solves, sweeps, derivative checks and the
// acceptance report. Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "dihedral/acceptance.hpp"
#include "dihedral/config.hpp"
#include "dihedral/oracles.hpp"

using namespace dihedral;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::string out;
  /// 0 picks the multiple of 2n nearest to 256.
  int n_phi = 0;
  int n_r = 64;
  double grading = 1.5;
  int workers = 0;
  std::optional<double> d, t, lambda, M;

  void add_resolution(CLI::App* app) {
    app->add_option("--nphi", n_phi, "Angular nodes, a multiple of 2n (default: nearest to 256)");
    app->add_option("--nr", n_r, "Radial layers")->capture_default_str();
    app->add_option("--grading", grading, "Radial grading exponent toward the obstacle")
        ->capture_default_str();
  }
  void add_config(CLI::App* app) {
    app->add_option("--config", config, "JSON configuration file")->required();
    add_resolution(app);
  }
  void add_overrides(CLI::App* app) {
    app->add_option("--d", d, "Override the offset");
    app->add_option("--t", t, "Override the rotation");
    app->add_option("--lambda", lambda, "Override the scale");
    app->add_option("--M", M, "Override the boundary datum");
  }
  void add_out(CLI::App* app) { app->add_option("--out", out, "CSV output path (stdout if omitted)"); }

  Resolution resolution(int order = 1) const {
    return {n_phi > 0 ? n_phi : compatible_n_phi(256, order), n_r, grading, 1.0};
  }
  SweepOptions sweep(const Configuration& cfg) const {
    return {resolution(cfg.obstacle.order()), true, workers};
  }

  Configuration load() const {
    if (!std::filesystem::exists(config)) throw UsageError("config file not found: " + config);
    Configuration c = load_configuration(config);
    if (d) c.placement.d = *d;
    if (t) c.placement.t = *t;
    if (lambda) c.placement.lambda = *lambda;
    if (M) c.placement.M = *M;
    return c;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  write_csv(s, rows);
  return s.str();
}

void summarize(const std::vector<SweepRow>& rows) {
  const SweepExtremes ex = extremes(rows);
  if (!ex.argmin) return;
  const SweepRow& lo = rows[*ex.argmin];
  const SweepRow& hi = rows[*ex.argmax];
  std::fprintf(stderr, "argmin: d=%.6g t=%.6g lambda=%.6g E=%.8g %s\n", lo.d, lo.t, lo.lambda,
               *lo.energy, std::string(to_string(lo.orientation)).c_str());
  std::fprintf(stderr, "argmax: d=%.6g t=%.6g lambda=%.6g E=%.8g %s\n", hi.d, hi.t, hi.lambda,
               *hi.energy, std::string(to_string(hi.orientation)).c_str());
}

ParameterKind parse_kind(const std::string& k) {
  if (k == "rotation") return ParameterKind::rotation;
  if (k == "translation") return ParameterKind::translation;
  if (k == "scaling") return ParameterKind::scaling;
  throw UsageError("unknown kind '" + k + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet energy of a disk with a dihedral obstacle: solves, sweeps and checks"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--workers", c.workers, "Sweep worker threads (default: $DIHEDRAL_WORKERS or all cores)");

  auto* solve = app.add_subcommand("solve", "Solve one configuration");
  c.add_config(solve);
  c.add_overrides(solve);
  c.add_out(solve);
  std::string mesh_out, solution_out;
  solve->add_option("--mesh-out", mesh_out, "Write the mesh dump");
  solve->add_option("--solution-out", solution_out, "Write nodal values and fluxes");

  auto* rot = app.add_subcommand("sweep-rotation", "Energy over rotation angles");
  c.add_config(rot);
  c.add_overrides(rot);
  c.add_out(rot);
  int tgrid = 0;
  std::vector<double> t_values;
  auto* tgrid_opt = rot->add_option("--tgrid", tgrid, "Number of angles spanning one period");
  auto* tvals_opt = rot->add_option("--values", t_values, "Explicit angles")->delimiter(',');
  tgrid_opt->excludes(tvals_opt);

  auto* tr = app.add_subcommand("sweep-translation", "Energy over offsets d");
  c.add_config(tr);
  c.add_overrides(tr);
  c.add_out(tr);
  std::vector<double> d_values{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  tr->add_option("--values", d_values, "Offsets")->delimiter(',')->capture_default_str();

  auto* sc = app.add_subcommand("sweep-scale", "Energy over scale factors");
  c.add_config(sc);
  c.add_overrides(sc);
  c.add_out(sc);
  std::vector<double> l_values{0.5, 1.0, 1.5, 2.0};
  sc->add_option("--values", l_values, "Scale factors")->delimiter(',')->capture_default_str();

  auto* bd = app.add_subcommand("sweep-boundary-data", "Energy over boundary data M");
  c.add_config(bd);
  c.add_overrides(bd);
  c.add_out(bd);
  std::vector<double> m_values{1.0, -1.0, 2.0, 10.0};
  bd->add_option("--values", m_values, "Boundary data")->delimiter(',')->capture_default_str();

  auto* gc = app.add_subcommand("gradient-check", "Compare a shape derivative with finite differences");
  c.add_config(gc);
  c.add_overrides(gc);
  c.add_out(gc);
  std::string kind = "rotation";
  double step = 1e-3;
  gc->add_option("--kind", kind, "rotation, translation or scaling")
      ->check(CLI::IsMember({"rotation", "translation", "scaling"}))
      ->capture_default_str();
  gc->add_option("--step", step, "Finite-difference step")->capture_default_str();

  auto* orc = app.add_subcommand("oracle", "Closed-form eccentric annulus energy");
  double r0 = 0.3, r1 = 1.0, od = 0.0, oM = 1.0;
  orc->add_option("--r0", r0)->capture_default_str();
  orc->add_option("--r1", r1)->capture_default_str();
  orc->add_option("--d", od)->capture_default_str();
  orc->add_option("--M", oM)->capture_default_str();

  auto* conv = app.add_subcommand("convergence", "Energy error of a circle obstacle under refinement");
  double cr0 = 0.3, cd = 0.5, cr1 = 1.0;
  conv->add_option("--r0", cr0)->capture_default_str();
  conv->add_option("--d", cd)->capture_default_str();
  conv->add_option("--r1", cr1)->capture_default_str();
  c.add_out(conv);

  auto* val = app.add_subcommand("validate-tables", "Run every acceptance check and report");
  std::vector<int> criteria;
  val->add_option("--criteria", criteria, "Subset of criterion numbers")->delimiter(',');
  c.add_resolution(val);
  c.add_out(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      const Configuration cfg = c.load();
      const ConfigurationSolve cs = solve_configuration(cfg.obstacle, cfg.placement, c.resolution(cfg.obstacle.order()));
      SweepRow row = evaluate_configuration(cfg.obstacle, cfg.placement, c.sweep(cfg));
      if (!mesh_out.empty()) {
        std::ofstream f(mesh_out);
        write_mesh(f, cs.mesh);
      }
      if (!solution_out.empty()) {
        std::ofstream f(solution_out);
        write_solution(f, cs.solution, cs.mesh);
      }
      std::fprintf(stderr, "energy %.10g  energy_boundary %.10g  cg iterations %d\n",
                   cs.solution.energy_volume, cs.solution.energy_boundary, cs.solution.iterations);
      emit(c.out, csv({row}));
    } else if (*rot) {
      const Configuration cfg = c.load();
      std::vector<double> grid = t_values;
      if (grid.empty()) grid = rotation_grid(cfg.obstacle, tgrid > 0 ? tgrid : 5);
      const auto rows = sweep_rotation(cfg.obstacle, cfg.placement, grid, c.sweep(cfg));
      summarize(rows);
      emit(c.out, csv(rows));
    } else if (*tr) {
      const Configuration cfg = c.load();
      const auto rows = sweep_translation(cfg.obstacle, cfg.placement, d_values, c.sweep(cfg));
      summarize(rows);
      emit(c.out, csv(rows));
    } else if (*sc) {
      const Configuration cfg = c.load();
      const auto rows = sweep_scale(cfg.obstacle, cfg.placement, l_values, c.sweep(cfg));
      std::fprintf(stderr, "largest admissible scale %.6g\n",
                   max_admissible_scale(cfg.obstacle, cfg.placement));
      summarize(rows);
      emit(c.out, csv(rows));
    } else if (*bd) {
      const Configuration cfg = c.load();
      emit(c.out, csv(sweep_boundary_data(cfg.obstacle, cfg.placement, m_values, c.sweep(cfg))));
    } else if (*gc) {
      const Configuration cfg = c.load();
      const auto r = finite_difference_check(cfg.obstacle, cfg.placement, parse_kind(kind), step,
                                             c.resolution(cfg.obstacle.order()));
      char line[256];
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.6e,%.12g,%.12g\n", r.analytic, r.central_fd,
                    r.rel_error, r.energy_plus, r.energy_minus);
      std::printf("%s analytic %.10g central_fd %.10g rel_error %.3e\n", kind.c_str(), r.analytic,
                  r.central_fd, r.rel_error);
      if (!c.out.empty()) emit(c.out, std::string("analytic,central_fd,rel_error,energy_plus,energy_minus\n") + line);
    } else if (*orc) {
      std::printf("%.6g\n", annulus_exact_energy(r0, r1, od, oM));
    } else if (*conv) {
      const auto rows = convergence_study(cr0, cd, cr1, 1.0, default_convergence_levels());
      std::ostringstream s;
      s << "n_phi,n_r,h_max,energy,exact,error,order\n";
      for (const auto& row : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%d,%d,%.6g,%.12g,%.12g,%.6e,", row.resolution.n_phi,
                      row.resolution.n_r, row.h_max, row.energy, row.exact, row.error);
        s << line;
        if (row.order) {
          std::snprintf(line, sizeof line, "%.4f", *row.order);
          s << line;
        }
        s << '\n';
      }
      emit(c.out, s.str());
    } else if (*val) {
      AcceptanceOptions opts;
      opts.resolution = c.resolution(4);
      opts.workers = c.workers;
      std::ostringstream report;
      int failures = 0;
      run_acceptance(criteria, opts, [&](const CriterionResult& r) {
        const std::string line = format_result(r);
        // Progress on stderr only when the report goes to a file.
        if (!c.out.empty()) std::fprintf(stderr, "%s\n", line.c_str());
        report << line << '\n';
        if (!r.passed) ++failures;
      });
      report << failures << " criteria failed\n";
      emit(c.out, report.str());
      return failures == 0 ? 0 : 2;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const InvalidSpec& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
