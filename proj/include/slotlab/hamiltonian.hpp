#pragma once
#include <vector>

namespace slotlab {

// H = p^2/(2m) + sum_n c_n x^n with a sparse list of (n, c_n) terms.
struct HamiltonianSpec {
  double mass = 1.0;
  std::vector<std::pair<int, double>> coeffs;  // (power, coefficient)

  void validate() const;  // mass > 0, powers >= 0

  double potential(double x) const;
  double dpotential(double x) const;
  double classical(double x, double p) const;
  // exact symmetric second difference V(x+h) - 2V(x) + V(x-h)
  double second_difference(double x, double h) const;
  double max_abs_potential(double a, double b) const;  // coarse scan on [a,b]

  static HamiltonianSpec free_particle(double mass);
  static HamiltonianSpec harmonic(double mass, double omega, double x_center);
  static HamiltonianSpec quartic(double mass, double lambda, double c2 = 0.0);
};

}  // namespace slotlab
