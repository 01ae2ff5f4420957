#include "slotlab/grid.hpp"

#include <cmath>

#include "slotlab/errors.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

Grid::Grid(double xmin, double xmax, int npts) : x_min(xmin), n(npts) {
  if (npts < 8) throw ConfigError("Grid: need at least 8 points");
  if (!(xmax > xmin)) throw ConfigError("Grid: x_max must exceed x_min");
  dx = (xmax - xmin) / npts;
}

double Grid::p(int k) const {
  int m = (k < n / 2) ? k : k - n;  // FFT frequency ordering
  return 2.0 * M_PI * kHbar * m / length();
}

double Grid::p_nyquist() const { return M_PI * kHbar / dx; }

Eigen::VectorXd Grid::x_vector() const {
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = x(k);
  return v;
}

Eigen::VectorXd Grid::p_vector() const {
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = p(k);
  return v;
}

double WaveFunction::norm() const { return std::sqrt(amp.squaredNorm() * grid.dx); }

void WaveFunction::normalize() {
  double s = norm();
  if (!(s > 0)) throw NumericalGuardError("WaveFunction: zero norm");
  amp /= s;
}

double WaveFunction::mean_x() const {
  double acc = 0.0;
  for (int k = 0; k < grid.n; ++k) acc += std::norm(amp[k]) * grid.x(k);
  return acc * grid.dx;
}

double WaveFunction::var_x() const {
  double mu = mean_x(), acc = 0.0;
  for (int k = 0; k < grid.n; ++k) {
    double d = grid.x(k) - mu;
    acc += std::norm(amp[k]) * d * d;
  }
  return acc * grid.dx;
}

}  // namespace slotlab
