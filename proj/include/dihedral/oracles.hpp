#pragma once

// Closed-form energies used as references.

namespace dihedral {

/// Dirichlet energy of the eccentric annulus between a circle of radius r0
/// (u = 0) and a circle of radius r1 (u = M) whose centers are d apart:
/// 2 pi M^2 / arccosh((r0^2 + r1^2 - d^2) / (2 r0 r1)).
/// Throws DomainError at or past tangency and InvalidSpec for r0 <= 0.
double annulus_exact_energy(double r0, double r1, double d, double M = 1.0);

/// Derivative of the concentric annulus energy with respect to the inner
/// radius scale lambda: 2 pi M^2 / (lambda ln^2(r1 / (lambda r0))).
double annulus_scaling_derivative(double r0, double r1, double lambda, double M = 1.0);

}  // namespace dihedral
