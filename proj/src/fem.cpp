#include "dihedral/fem.hpp"

#include <cmath>
#include <ostream>

namespace dihedral {

namespace {

// Gradients of the three barycentric basis functions and the area.
struct P1Gradients {
  std::array<Vec2, 3> grad;
  double area;
};

P1Gradients p1_gradients(Vec2 a, Vec2 b, Vec2 c) {
  const double twice_area = cross(b - a, c - a);
  if (!(std::abs(twice_area) > 0.0)) throw MeshError("degenerate triangle in assembly");
  const double inv = 1.0 / twice_area;
  P1Gradients g;
  g.grad[0] = Vec2{b.y - c.y, c.x - b.x} * inv;
  g.grad[1] = Vec2{c.y - a.y, a.x - c.x} * inv;
  g.grad[2] = Vec2{a.y - b.y, b.x - a.x} * inv;
  g.area = 0.5 * std::abs(twice_area);
  return g;
}

int max_iterations_for(int dof) {
  return std::max(50, static_cast<int>(10.0 * std::sqrt(static_cast<double>(dof))));
}

}  // namespace

ElementMatrix element_stiffness(Vec2 a, Vec2 b, Vec2 c) {
  const P1Gradients g = p1_gradients(a, b, c);
  ElementMatrix k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k[i][j] = g.area * dot(g.grad[i], g.grad[j]);
  return k;
}

std::vector<double> lumped_boundary_mass(const AnnularMesh& mesh, const std::vector<int>& loop) {
  const size_t n = loop.size();
  std::vector<double> mass(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    const size_t next = (k + 1) % n;
    const double len = norm(mesh.nodes[loop[next]] - mesh.nodes[loop[k]]);
    mass[k] += 0.5 * len;
    mass[next] += 0.5 * len;
  }
  return mass;
}

StiffnessSystem assemble(const AnnularMesh& mesh) {
  const int nv = static_cast<int>(mesh.nodes.size());
  StiffnessSystem sys;
  sys.inner_boundary = mesh.inner_boundary;
  sys.outer_boundary = mesh.outer_boundary;
  sys.inner_mass = lumped_boundary_mass(mesh, mesh.inner_boundary);
  sys.outer_mass = lumped_boundary_mass(mesh, mesh.outer_boundary);

  std::vector<bool> on_boundary(nv, false);
  for (int idx : mesh.inner_boundary) on_boundary[idx] = true;
  for (int idx : mesh.outer_boundary) on_boundary[idx] = true;
  sys.free_index.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (!on_boundary[v]) {
      sys.free_index[v] = static_cast<int>(sys.free_nodes.size());
      sys.free_nodes.push_back(v);
    }
  }

  std::vector<CsrMatrix::Entry> all, reduced;
  all.reserve(9 * mesh.triangles.size());
  reduced.reserve(9 * mesh.triangles.size());
  for (const Triangle& tri : mesh.triangles) {
    const ElementMatrix k =
        element_stiffness(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        all.push_back({tri[a], tri[b], k[a][b]});
        const int fa = sys.free_index[tri[a]], fb = sys.free_index[tri[b]];
        if (fa >= 0 && fb >= 0) reduced.push_back({fa, fb, k[a][b]});
      }
    }
  }
  sys.full = CsrMatrix::from_triplets(nv, nv, std::move(all));
  const int nf = static_cast<int>(sys.free_nodes.size());
  sys.reduced = CsrMatrix::from_triplets(nf, nf, std::move(reduced));
  return sys;
}

std::vector<double> stiffness_residual(const StiffnessSystem& system, const std::vector<double>& u) {
  std::vector<double> r(u.size());
  system.full.multiply(u, r);
  return r;
}

NodalSolve solve_boundary_values(const StiffnessSystem& system,
                                 const std::vector<double>& inner_values,
                                 const std::vector<double>& outer_values) {
  if (inner_values.size() != system.inner_boundary.size() ||
      outer_values.size() != system.outer_boundary.size())
    throw std::invalid_argument("solve_boundary_values: boundary data size mismatch");

  NodalSolve out;
  out.u.assign(system.full.rows, 0.0);
  for (size_t k = 0; k < inner_values.size(); ++k) out.u[system.inner_boundary[k]] = inner_values[k];
  for (size_t k = 0; k < outer_values.size(); ++k) out.u[system.outer_boundary[k]] = outer_values[k];

  // Dirichlet lift: the load on free nodes is -K_fb u_b.
  const std::vector<double> lifted = stiffness_residual(system, out.u);
  const size_t nf = system.free_nodes.size();
  std::vector<double> rhs(nf), x(nf, 0.0);
  for (size_t i = 0; i < nf; ++i) rhs[i] = -lifted[system.free_nodes[i]];

  const CgResult cg = conjugate_gradient(system.reduced, rhs, x, kSolverTolerance,
                                         max_iterations_for(static_cast<int>(nf)));
  for (size_t i = 0; i < nf; ++i) out.u[system.free_nodes[i]] = x[i];
  out.iterations = cg.iterations;
  out.relative_residual = cg.relative_residual;
  return out;
}

std::vector<double> recovered_flux(const StiffnessSystem& system, const std::vector<double>& u,
                                   BoundarySide side) {
  const std::vector<double> r = stiffness_residual(system, u);
  const auto& loop = side == BoundarySide::inner ? system.inner_boundary : system.outer_boundary;
  const auto& mass = side == BoundarySide::inner ? system.inner_mass : system.outer_mass;
  std::vector<double> flux(loop.size());
  for (size_t k = 0; k < loop.size(); ++k) flux[k] = r[loop[k]] / mass[k];
  return flux;
}

FieldSolution solve_dirichlet(const StiffnessSystem& system, double M) {
  const NodalSolve s = solve_boundary_values(
      system, std::vector<double>(system.inner_boundary.size(), 0.0),
      std::vector<double>(system.outer_boundary.size(), M));
  FieldSolution sol;
  sol.u = s.u;
  sol.M = M;
  sol.iterations = s.iterations;
  sol.relative_residual = s.relative_residual;

  const std::vector<double> r = stiffness_residual(system, sol.u);
  double e = 0.0;
  for (size_t v = 0; v < sol.u.size(); ++v) e += sol.u[v] * r[v];
  sol.energy_volume = e;

  sol.inner_flux.resize(system.inner_boundary.size());
  for (size_t k = 0; k < sol.inner_flux.size(); ++k)
    sol.inner_flux[k] = r[system.inner_boundary[k]] / system.inner_mass[k];
  sol.outer_flux.resize(system.outer_boundary.size());
  double outer_integral = 0.0;
  for (size_t k = 0; k < sol.outer_flux.size(); ++k) {
    sol.outer_flux[k] = r[system.outer_boundary[k]] / system.outer_mass[k];
    outer_integral += sol.outer_flux[k] * system.outer_mass[k];
  }
  sol.energy_boundary = M * outer_integral;
  return sol;
}

double energy_volume(const FieldSolution& solution, const AnnularMesh& mesh) {
  double e = 0.0;
  for (const Triangle& tri : mesh.triangles) {
    const P1Gradients g =
        p1_gradients(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    Vec2 grad{};
    for (int a = 0; a < 3; ++a) grad = grad + g.grad[a] * solution.u[tri[a]];
    e += dot(grad, grad) * g.area;
  }
  return e;
}

std::vector<double> boundary_flux(const FieldSolution& solution, const AnnularMesh& mesh,
                                  BoundarySide side) {
  std::vector<double> residual(mesh.nodes.size(), 0.0);
  for (const Triangle& tri : mesh.triangles) {
    const P1Gradients g =
        p1_gradients(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    Vec2 grad{};
    for (int a = 0; a < 3; ++a) grad = grad + g.grad[a] * solution.u[tri[a]];
    for (int a = 0; a < 3; ++a) residual[tri[a]] += g.area * dot(grad, g.grad[a]);
  }
  const auto& loop = side == BoundarySide::inner ? mesh.inner_boundary : mesh.outer_boundary;
  const std::vector<double> mass = lumped_boundary_mass(mesh, loop);
  std::vector<double> flux(loop.size());
  for (size_t k = 0; k < loop.size(); ++k) flux[k] = residual[loop[k]] / mass[k];
  return flux;
}

double energy_boundary(const FieldSolution& solution, const AnnularMesh& mesh) {
  const std::vector<double> flux = boundary_flux(solution, mesh, BoundarySide::outer);
  const std::vector<double> mass = lumped_boundary_mass(mesh, mesh.outer_boundary);
  double integral = 0.0;
  for (size_t k = 0; k < flux.size(); ++k) integral += flux[k] * mass[k];
  return solution.M * integral;
}

void write_solution(std::ostream& out, const FieldSolution& solution, const AnnularMesh& mesh) {
  out.precision(17);
  for (size_t v = 0; v < solution.u.size(); ++v) out << "u " << v + 1 << ' ' << solution.u[v] << '\n';
  for (size_t k = 0; k < solution.inner_flux.size(); ++k)
    out << "flux inner " << mesh.inner_boundary[k] + 1 << ' ' << solution.inner_flux[k] << '\n';
  for (size_t k = 0; k < solution.outer_flux.size(); ++k)
    out << "flux outer " << mesh.outer_boundary[k] + 1 << ' ' << solution.outer_flux[k] << '\n';
}

}  // namespace dihedral
