#include "dihedral/oracles.hpp"

#include <cmath>
#include <numbers>

#include "dihedral/geometry.hpp"

namespace dihedral {

double annulus_exact_energy(double r0, double r1, double d, double M) {
  if (!(r0 > 0.0) || !(r1 > 0.0) || d < 0.0)
    throw InvalidSpec("annulus_exact_energy: need r0 > 0, r1 > 0, d >= 0");
  if (!(r0 + d < r1))
    throw DomainError("annulus_exact_energy: inner circle touches or leaves the disk, energy is infinite");
  const double c = (r0 * r0 + r1 * r1 - d * d) / (2.0 * r0 * r1);
  return 2.0 * std::numbers::pi * M * M / std::acosh(c);
}

double annulus_scaling_derivative(double r0, double r1, double lambda, double M) {
  if (!(r0 > 0.0) || !(lambda > 0.0) || !(lambda * r0 < r1))
    throw DomainError("annulus_scaling_derivative: need 0 < lambda r0 < r1");
  const double l = std::log(r1 / (lambda * r0));
  return 2.0 * std::numbers::pi * M * M / (lambda * l * l);
}

}  // namespace dihedral
