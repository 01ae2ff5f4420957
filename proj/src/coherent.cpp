#include "slotlab/coherent.hpp"

#include <cmath>

#include "slotlab/errors.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

double CoherentSpec::sigma_p() const { return kHbar / (2.0 * sigma_x); }

static void check_spec(const CoherentSpec& s) {
  if (!(s.sigma_x > 0)) throw ConfigError("coherent_state: sigma_x must be positive");
}

WaveFunction coherent_state(const Grid& g, const CoherentSpec& s, bool* clipped) {
  check_spec(s);
  if (std::abs(s.p0) + 3.0 * s.sigma_p() > g.p_nyquist())
    throw ConfigError("coherent_state: momentum outside the grid Nyquist band");
  double lo = g.x_min, hi = g.x_min + g.length();
  bool tight = (s.x0 - 6.0 * s.sigma_x < lo) || (s.x0 + 6.0 * s.sigma_x > hi);
  if (clipped) *clipped = tight;
  // analytic mass outside the window
  double t1 = (lo - s.x0) / (std::sqrt(2.0) * s.sigma_x);
  double t2 = (hi - s.x0) / (std::sqrt(2.0) * s.sigma_x);
  double outside = 0.5 * (std::erfc(t2) + std::erfc(-t1));
  if (outside > 1e-6)
    throw ConfigError("coherent_state: grid holds less than 1-1e-6 of the mass");

  WaveFunction wf{g, Eigen::VectorXcd(g.n)};
  for (int k = 0; k < g.n; ++k) {
    double d = g.x(k) - s.x0;
    wf.amp[k] = std::exp(std::complex<double>(
        -d * d / (4.0 * s.sigma_x * s.sigma_x), s.p0 * d / kHbar));
  }
  wf.normalize();
  return wf;
}

WaveFunction coherent_state_folded(const Grid& g, const CoherentSpec& s) {
  check_spec(s);
  double L = g.length();
  int images = 1 + static_cast<int>(std::ceil(8.0 * s.sigma_x / L));
  WaveFunction wf{g, Eigen::VectorXcd::Zero(g.n)};
  for (int w = -images; w <= images; ++w) {
    for (int k = 0; k < g.n; ++k) {
      double d = g.x(k) - s.x0 + w * L;
      wf.amp[k] += std::exp(std::complex<double>(
          -d * d / (4.0 * s.sigma_x * s.sigma_x), s.p0 * d / kHbar));
    }
  }
  wf.normalize();
  return wf;
}

std::complex<double> coherent_overlap(const CoherentSpec& a, const CoherentSpec& b) {
  check_spec(a);
  check_spec(b);
  if (std::abs(a.sigma_x - b.sigma_x) > 1e-14 * (a.sigma_x + b.sigma_x))
    throw ConfigError("coherent_overlap: closed form requires equal widths");
  double s = a.sigma_x;
  double dx = a.x0 - b.x0, dp = b.p0 - a.p0;
  double mag = -dx * dx / (8.0 * s * s) - s * s * dp * dp / (2.0 * kHbar * kHbar);
  double ph = (a.p0 + b.p0) * dx / (2.0 * kHbar);
  return std::exp(std::complex<double>(mag, ph));
}

}  // namespace slotlab
