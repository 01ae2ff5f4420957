#pragma once
#include <Eigen/Core>
#include <complex>

namespace slotlab {

// Uniform spatial grid x_k = x_min + k*dx, k = 0..n-1, treated as periodic
// with period L = n*dx by the spectral propagator. The conjugate momentum
// lattice follows FFT ordering.
struct Grid {
  double x_min = 0.0;
  int n = 0;
  double dx = 0.0;

  Grid() = default;
  Grid(double xmin, double xmax, int npts);

  double length() const { return n * dx; }
  double x(int k) const { return x_min + k * dx; }
  double p(int k) const;           // FFT-ordered momentum of bin k
  double p_nyquist() const;        // half-width of the momentum band
  Eigen::VectorXd x_vector() const;
  Eigen::VectorXd p_vector() const;

  bool operator==(const Grid&) const = default;
};

// State vector on a grid, normalized so that sum |amp|^2 dx = 1.
struct WaveFunction {
  Grid grid;
  Eigen::VectorXcd amp;

  double norm() const;
  void normalize();
  double mean_x() const;
  double var_x() const;
};

}  // namespace slotlab
