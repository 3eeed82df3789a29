#include "dihedral/shape_calculus.hpp"

#include <array>
#include <cmath>
#include <future>

namespace dihedral {

PerturbationField PerturbationField::translational(Vec2 direction) {
  const double len = norm(direction);
  if (!(len > 0.0)) throw std::invalid_argument("translation direction must be nonzero");
  return {0.0, direction * (1.0 / len), 0.0};
}

FieldKind PerturbationField::kind() const {
  const int active = (rotation != 0.0) + (norm(translation) != 0.0) + (scaling != 0.0);
  if (active == 0) return FieldKind::zero;
  if (active > 1) return FieldKind::combined;
  if (rotation != 0.0) return FieldKind::rotation;
  return scaling != 0.0 ? FieldKind::scaling : FieldKind::translation;
}

namespace {

const Configuration& require_source(const AnnularMesh& mesh) {
  if (!mesh.source)
    throw std::invalid_argument("shape derivative needs a mesh generated from a configuration");
  return *mesh.source;
}

}  // namespace

std::vector<double> normal_velocity(const AnnularMesh& mesh, const PerturbationField& field) {
  const auto& [obs, p] = require_source(mesh);
  std::vector<double> vn(mesh.inner_boundary.size());
  for (size_t k = 0; k < vn.size(); ++k) {
    const Vec2 x = mesh.nodes[mesh.inner_boundary[k]];
    const NormalSample n = inner_normal(obs, p, p.t + mesh.inner_angle[k]);
    // At a corner the two adjacent edges each carry half of the node's mass.
    vn[k] = n.corner ? 0.5 * (dot(field(x), n.left) + dot(field(x), n.right))
                     : dot(field(x), n.normal);
  }
  return vn;
}

std::vector<bool> corner_nodes(const AnnularMesh& mesh) {
  const auto& obs = require_source(mesh).obstacle;
  std::vector<bool> out(mesh.inner_boundary.size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = obs.is_corner(mesh.inner_angle[k]);
  return out;
}

namespace {

double boundary_quadrature(const FieldSolution& solution, const AnnularMesh& mesh,
                           const PerturbationField& field) {
  const std::vector<double> vn = normal_velocity(mesh, field);
  const std::vector<double> mass = lumped_boundary_mass(mesh, mesh.inner_boundary);
  double integral = 0.0;
  for (size_t k = 0; k < vn.size(); ++k) {
    const double q = solution.inner_flux[k];
    integral += q * q * vn[k] * mass[k];
  }
  return -integral;
}

// Cutoff (1 - s)^2 with s the relative position along each mesh ray; it
// leaves the disk boundary with zero slope.
double domain_quadrature(const FieldSolution& solution, const AnnularMesh& mesh,
                         const PerturbationField& field) {
  std::vector<Vec2> w(mesh.nodes.size());
  for (int i = 0; i < mesh.n_phi; ++i) {
    const Vec2 base = mesh.nodes[mesh.node_index(i, 0)];
    const double span = norm(mesh.nodes[mesh.node_index(i, mesh.n_r)] - base);
    for (int j = 0; j <= mesh.n_r; ++j) {
      const int v = mesh.node_index(i, j);
      const double s = j == mesh.n_r ? 1.0 : norm(mesh.nodes[v] - base) / span;
      w[v] = field(mesh.nodes[v]) * ((1.0 - s) * (1.0 - s));
    }
  }
  double total = 0.0;
  for (const Triangle& tri : mesh.triangles) {
    const Vec2 a = mesh.nodes[tri[0]], b = mesh.nodes[tri[1]], c = mesh.nodes[tri[2]];
    const double twice_area = cross(b - a, c - a);
    const double inv = 1.0 / twice_area;
    const std::array<Vec2, 3> g{Vec2{b.y - c.y, c.x - b.x} * inv, Vec2{c.y - a.y, a.x - c.x} * inv,
                                Vec2{a.y - b.y, b.x - a.x} * inv};
    Vec2 gu{};
    double dw[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int k = 0; k < 3; ++k) {
      gu = gu + g[k] * solution.u[tri[k]];
      const Vec2 wk = w[tri[k]];
      dw[0][0] += wk.x * g[k].x;
      dw[0][1] += wk.x * g[k].y;
      dw[1][0] += wk.y * g[k].x;
      dw[1][1] += wk.y * g[k].y;
    }
    const double div = dw[0][0] + dw[1][1];
    const double quad = gu.x * (dw[0][0] * gu.x + dw[0][1] * gu.y) +
                        gu.y * (dw[1][0] * gu.x + dw[1][1] * gu.y);
    total += 0.5 * std::abs(twice_area) * (dot(gu, gu) * div - 2.0 * quad);
  }
  return total;
}

}  // namespace

double eulerian_derivative(const FieldSolution& solution, const AnnularMesh& mesh,
                           const PerturbationField& field, DerivativeQuadrature quadrature) {
  if (quadrature == DerivativeQuadrature::automatic)
    quadrature = require_source(mesh).obstacle.has_corners() ? DerivativeQuadrature::domain
                                                             : DerivativeQuadrature::boundary;
  return quadrature == DerivativeQuadrature::domain ? domain_quadrature(solution, mesh, field)
                                                    : boundary_quadrature(solution, mesh, field);
}

ShapeDerivativeSolution solve_shape_derivative_bvp(const StiffnessSystem& system,
                                                   const FieldSolution& solution,
                                                   const AnnularMesh& mesh,
                                                   const PerturbationField& field) {
  const std::vector<double> vn = normal_velocity(mesh, field);
  std::vector<double> inner(vn.size());
  for (size_t k = 0; k < vn.size(); ++k) inner[k] = -solution.inner_flux[k] * vn[k];
  const NodalSolve s =
      solve_boundary_values(system, inner, std::vector<double>(system.outer_boundary.size(), 0.0));

  ShapeDerivativeSolution out;
  out.w = s.u;
  const std::vector<double> w_flux = recovered_flux(system, out.w, BoundarySide::outer);
  for (size_t k = 0; k < w_flux.size(); ++k)
    out.boundary_route += solution.u[system.outer_boundary[k]] * w_flux[k] * system.outer_mass[k];
  for (size_t k = 0; k < vn.size(); ++k) {
    const double q = solution.inner_flux[k];
    out.flux_route += q * q * vn[k] * system.inner_mass[k];
  }
  out.residual = std::abs(out.boundary_route + out.flux_route);
  return out;
}

ConfigurationSolve solve_configuration(const ObstacleSpec& obs, const Placement& p,
                                       const Resolution& res) {
  ConfigurationSolve cs;
  cs.mesh = generate_mesh(obs, p, res);
  cs.system = assemble(cs.mesh);
  cs.solution = solve_dirichlet(cs.system, p.M);
  return cs;
}

ParameterDerivatives parameter_derivatives(const FieldSolution& solution, const AnnularMesh& mesh,
                                           DerivativeQuadrature quadrature) {
  const double lambda = require_source(mesh).placement.lambda;
  ParameterDerivatives d;
  d.rotation = eulerian_derivative(solution, mesh, PerturbationField::rotational(), quadrature);
  d.translation =
      eulerian_derivative(solution, mesh, PerturbationField::translational({1.0, 0.0}), quadrature);
  // Under lambda -> lambda + h a boundary point x moves by h x / lambda.
  d.scaling = eulerian_derivative(solution, mesh, PerturbationField::dilation(), quadrature) / lambda;
  return d;
}

double rotation_derivative(const ObstacleSpec& obs, const Placement& p, const Resolution& res) {
  const ConfigurationSolve cs = solve_configuration(obs, p, res);
  return eulerian_derivative(cs.solution, cs.mesh, PerturbationField::rotational());
}

double translation_derivative(const ObstacleSpec& obs, const Placement& p, Vec2 direction,
                              const Resolution& res) {
  const ConfigurationSolve cs = solve_configuration(obs, p, res);
  return eulerian_derivative(cs.solution, cs.mesh, PerturbationField::translational(direction));
}

double scaling_derivative(const ObstacleSpec& obs, const Placement& p, const Resolution& res) {
  const ConfigurationSolve cs = solve_configuration(obs, p, res);
  return parameter_derivatives(cs.solution, cs.mesh).scaling;
}

double derivative_zero_tolerance(const AnnularMesh& mesh, double energy, double c) {
  return c * mesh.h_max * mesh.h_max * std::abs(energy);
}

FiniteDifferenceCheck finite_difference_check(const ObstacleSpec& obs, const Placement& p,
                                              ParameterKind kind, double step,
                                              const Resolution& res) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_difference_check: step must be positive");
  Placement plus = p, minus = p;
  double h = step;
  switch (kind) {
    case ParameterKind::rotation:
      plus.t += h;
      minus.t -= h;
      break;
    case ParameterKind::translation:
      h = step * p.r1;
      if (p.d - h < 0.0)
        throw DomainError("finite_difference_check: d - step would be negative");
      plus.d += h;
      minus.d -= h;
      break;
    case ParameterKind::scaling:
      if (p.lambda - h <= 0.0)
        throw DomainError("finite_difference_check: lambda - step would be non-positive");
      plus.lambda += h;
      minus.lambda -= h;
      break;
  }
  for (const Placement* q : {&plus, &minus}) {
    const Admissibility a = admissible(obs, *q);
    if (!a.ok) throw DomainError("finite_difference_check: perturbed configuration is inadmissible");
  }

  auto energy_at = [&](const Placement& q) { return solve_configuration(obs, q, res).solution.energy_volume; };
  auto f_plus = std::async(std::launch::async, energy_at, std::cref(plus));
  const double e_minus = energy_at(minus);

  FiniteDifferenceCheck out;
  const ConfigurationSolve base = solve_configuration(obs, p, res);
  const ParameterDerivatives d = parameter_derivatives(base.solution, base.mesh);
  switch (kind) {
    case ParameterKind::rotation: out.analytic = d.rotation; break;
    case ParameterKind::translation: out.analytic = d.translation; break;
    case ParameterKind::scaling: out.analytic = d.scaling; break;
  }
  out.energy_plus = f_plus.get();
  out.energy_minus = e_minus;
  out.central_fd = (out.energy_plus - out.energy_minus) / (2.0 * h);
  const double floor = 1e-12 * std::abs(base.solution.energy_volume);
  out.rel_error = std::abs(out.analytic - out.central_fd) / std::max(std::abs(out.analytic), floor);
  return out;
}

}  // namespace dihedral
