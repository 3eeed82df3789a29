#pragma once

// Eulerian derivatives of the Dirichlet energy under rigid motions and
// dilations of the obstacle.
//
// For a velocity field V supported near the obstacle,
//
//   dE(Omega, V) = - integral over dP of (du/dn)^2 <V, n> ds,
//
// with n the outward normal of the domain. The shape derivative w of u
// solves Laplace's equation with w = -(du/dn)<V, n> on dP and w = 0 on dB,
// and dE = integral over dB of u dw/dn gives an independent route.

#include <vector>

#include "dihedral/fem.hpp"

namespace dihedral {

enum class FieldKind { zero, rotation, translation, scaling, combined };

/// Affine velocity field V(x) = rotation * i x + translation + scaling * x,
/// with x measured from the obstacle center.
struct PerturbationField {
  double rotation = 0.0;
  Vec2 translation{};
  double scaling = 0.0;

  static PerturbationField rotational() { return {1.0, {}, 0.0}; }
  static PerturbationField translational(Vec2 direction);
  static PerturbationField dilation() { return {0.0, {}, 1.0}; }

  Vec2 operator()(Vec2 x) const { return perp(x) * rotation + translation + x * scaling; }
  FieldKind kind() const;

  PerturbationField operator+(const PerturbationField& o) const {
    return {rotation + o.rotation, translation + o.translation, scaling + o.scaling};
  }
  PerturbationField operator*(double s) const {
    return {rotation * s, translation * s, scaling * s};
  }
};

/// <V(x_k), n_k> at every inner-boundary node of a generated mesh. Corner
/// nodes of sharp polygons use the averaged one-sided normal.
std::vector<double> normal_velocity(const AnnularMesh& mesh, const PerturbationField& field);

/// Nodes of the inner loop that sit on a sharp corner.
std::vector<bool> corner_nodes(const AnnularMesh& mesh);

/// How the boundary integral is evaluated.
///  boundary: nodal quadrature of the recovered flux on dP.
///  domain:   the same integral rewritten with the divergence theorem as
///            integral over Omega of |grad u|^2 div W - 2 grad u . (DW) grad u,
///            W = rho V with a cutoff rho equal to 1 on dP and 0 on dB. It only
///            needs grad u in L2, so it stays accurate at re-entrant corners
///            where the pointwise flux is singular.
///  automatic: domain for obstacles with corners, boundary otherwise.
enum class DerivativeQuadrature { automatic, boundary, domain };

double eulerian_derivative(const FieldSolution& solution, const AnnularMesh& mesh,
                           const PerturbationField& field,
                           DerivativeQuadrature quadrature = DerivativeQuadrature::automatic);

struct ShapeDerivativeSolution {
  std::vector<double> w;
  /// Integral over dB of u dw/dn.
  double boundary_route = 0.0;
  /// Integral over dP of (du/dn)^2 <V, n>.
  double flux_route = 0.0;
  /// |boundary_route + flux_route|.
  double residual = 0.0;
};

ShapeDerivativeSolution solve_shape_derivative_bvp(const StiffnessSystem& system,
                                                   const FieldSolution& solution,
                                                   const AnnularMesh& mesh,
                                                   const PerturbationField& field);

/// Mesh, assembled system and solution for one configuration.
struct ConfigurationSolve {
  AnnularMesh mesh;
  StiffnessSystem system;
  FieldSolution solution;
};

ConfigurationSolve solve_configuration(const ObstacleSpec& obs, const Placement& p,
                                       const Resolution& res = {});

/// dE/dt.
double rotation_derivative(const ObstacleSpec& obs, const Placement& p, const Resolution& res = {});
/// Derivative with respect to moving the obstacle along a unit direction.
double translation_derivative(const ObstacleSpec& obs, const Placement& p, Vec2 direction,
                              const Resolution& res = {});
/// dE/dlambda.
double scaling_derivative(const ObstacleSpec& obs, const Placement& p, const Resolution& res = {});

/// Derivatives of E with respect to the configuration parameters, from one solve.
struct ParameterDerivatives {
  double rotation = 0.0;     // dE/dt
  double translation = 0.0;  // dE/dd (obstacle moving along +x1)
  double scaling = 0.0;      // dE/dlambda
};
ParameterDerivatives parameter_derivatives(
    const FieldSolution& solution, const AnnularMesh& mesh,
    DerivativeQuadrature quadrature = DerivativeQuadrature::automatic);

/// Zero-test threshold C h^2 E for derivatives that vanish by symmetry.
double derivative_zero_tolerance(const AnnularMesh& mesh, double energy, double c = 5.0);

enum class ParameterKind { rotation, translation, scaling };

struct FiniteDifferenceCheck {
  double analytic = 0.0;
  double central_fd = 0.0;
  double rel_error = 0.0;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
};

/// Compares the boundary-integral derivative with a central difference of
/// the energy in t, d or lambda. The step is scaled by r1 for d.
FiniteDifferenceCheck finite_difference_check(const ObstacleSpec& obs, const Placement& p,
                                              ParameterKind kind, double step = 1e-3,
                                              const Resolution& res = {});

}  // namespace dihedral
