#pragma once
#include <complex>

#include "slotlab/grid.hpp"

namespace slotlab {

// Minimum-uncertainty Gaussian |x0 p0>, sigma_x * sigma_p = hbar/2,
// psi(y) = (2 pi sigma_x^2)^(-1/4) exp(-(y-x0)^2/(4 sigma_x^2) + i p0 (y-x0)/hbar)
// so that <p> = +p0.
struct CoherentSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma_x = 1.0;
  double sigma_p() const;
};

// Samples the packet on the grid and renormalizes. Warns (returns flag via
// *clipped) when the grid leaves less than 6 sigma of margin; throws
// ConfigError when more than 1e-6 of the analytic mass falls outside the
// window or the momentum lies outside the Nyquist band.
WaveFunction coherent_state(const Grid& g, const CoherentSpec& s,
                            bool* clipped = nullptr);

// Periodized (folded) variant used by the dense POVM builder; images are
// summed over enough periods that the wrap error is below roundoff.
WaveFunction coherent_state_folded(const Grid& g, const CoherentSpec& s);

// Closed-form overlap <a|b>; requires equal widths (ConfigError otherwise).
std::complex<double> coherent_overlap(const CoherentSpec& a,
                                      const CoherentSpec& b);

}  // namespace slotlab
