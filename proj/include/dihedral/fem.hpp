#pragma once

// P1 finite elements for the Laplace problem with u = 0 on the obstacle and
// u = M on the disk boundary.

#include <array>
#include <iosfwd>
#include <vector>

#include "dihedral/mesh.hpp"
#include "dihedral/sparse.hpp"

namespace dihedral {

inline constexpr double kSolverTolerance = 1e-10;

struct StiffnessSystem {
  /// Unconstrained stiffness matrix over all nodes.
  CsrMatrix full;
  /// Restriction to the free (interior) nodes.
  CsrMatrix reduced;
  std::vector<int> free_nodes;
  /// Position in free_nodes, or -1 for boundary nodes.
  std::vector<int> free_index;
  std::vector<int> inner_boundary;
  std::vector<int> outer_boundary;
  /// Half the summed length of the two boundary edges at each loop node.
  std::vector<double> inner_mass;
  std::vector<double> outer_mass;
};

enum class BoundarySide { inner, outer };

struct FieldSolution {
  std::vector<double> u;
  double M = 0.0;
  double energy_volume = 0.0;
  double energy_boundary = 0.0;
  /// du/dn with n the outward normal of the domain, one value per loop node.
  std::vector<double> inner_flux;
  std::vector<double> outer_flux;
  int iterations = 0;
  double relative_residual = 0.0;
};

using ElementMatrix = std::array<std::array<double, 3>, 3>;

/// Exact P1 element stiffness: integral of grad(phi_a) . grad(phi_b).
ElementMatrix element_stiffness(Vec2 a, Vec2 b, Vec2 c);

StiffnessSystem assemble(const AnnularMesh& mesh);

/// Lumped boundary mass of each node of a closed loop.
std::vector<double> lumped_boundary_mass(const AnnularMesh& mesh, const std::vector<int>& loop);

struct NodalSolve {
  std::vector<double> u;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves the homogeneous Laplace problem with the given Dirichlet values on
/// each loop (one value per loop node).
NodalSolve solve_boundary_values(const StiffnessSystem& system,
                                 const std::vector<double>& inner_values,
                                 const std::vector<double>& outer_values);

/// Full residual K u over all nodes.
std::vector<double> stiffness_residual(const StiffnessSystem& system, const std::vector<double>& u);

/// Boundary flux recovered from the residual: (K u)_k / lumped mass_k.
std::vector<double> recovered_flux(const StiffnessSystem& system, const std::vector<double>& u,
                                   BoundarySide side);

FieldSolution solve_dirichlet(const StiffnessSystem& system, double M);

/// Sum over triangles of |grad u|^2 area.
double energy_volume(const FieldSolution& solution, const AnnularMesh& mesh);
/// Flux recomputed from an element-by-element residual on the mesh.
std::vector<double> boundary_flux(const FieldSolution& solution, const AnnularMesh& mesh,
                                  BoundarySide side);
/// M times the trapezoidal integral of the outer flux.
double energy_boundary(const FieldSolution& solution, const AnnularMesh& mesh);

/// "u idx value" and "flux inner|outer idx value" lines, 1-based node indices.
void write_solution(std::ostream& out, const FieldSolution& solution, const AnnularMesh& mesh);

}  // namespace dihedral
