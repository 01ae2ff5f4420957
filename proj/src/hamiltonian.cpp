#include "slotlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "slotlab/errors.hpp"

namespace slotlab {

void HamiltonianSpec::validate() const {
  if (!(mass > 0)) throw ConfigError("HamiltonianSpec: mass must be positive");
  for (auto& [n, c] : coeffs)
    if (n < 0) throw ConfigError("HamiltonianSpec: negative potential power");
}

double HamiltonianSpec::potential(double x) const {
  double v = 0.0;
  for (auto& [n, c] : coeffs) v += c * std::pow(x, n);
  return v;
}

double HamiltonianSpec::dpotential(double x) const {
  double v = 0.0;
  for (auto& [n, c] : coeffs)
    if (n >= 1) v += c * n * std::pow(x, n - 1);
  return v;
}

double HamiltonianSpec::classical(double x, double p) const {
  return p * p / (2.0 * mass) + potential(x);
}

double HamiltonianSpec::second_difference(double x, double h) const {
  return potential(x + h) - 2.0 * potential(x) + potential(x - h);
}

double HamiltonianSpec::max_abs_potential(double a, double b) const {
  double m = 0.0;
  for (int k = 0; k <= 256; ++k)
    m = std::max(m, std::abs(potential(a + (b - a) * k / 256.0)));
  return m;
}

HamiltonianSpec HamiltonianSpec::free_particle(double mass) {
  return HamiltonianSpec{mass, {}};
}

HamiltonianSpec HamiltonianSpec::harmonic(double mass, double omega,
                                          double x_center) {
  double k = 0.5 * mass * omega * omega;
  return HamiltonianSpec{
      mass, {{0, k * x_center * x_center}, {1, -2.0 * k * x_center}, {2, k}}};
}

HamiltonianSpec HamiltonianSpec::quartic(double mass, double lambda, double c2) {
  HamiltonianSpec s{mass, {{4, lambda}}};
  if (c2 != 0.0) s.coeffs.push_back({2, c2});
  return s;
}

}  // namespace slotlab
