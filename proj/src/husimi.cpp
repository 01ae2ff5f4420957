#include "slotlab/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "slotlab/errors.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

AmpBlock coherent_amp_block(const WaveFunction& psi,
                            const std::vector<double>& xs,
                            const std::vector<double>& ps, double sigma_x) {
  if (xs.empty() || ps.empty())
    throw ConfigError("coherent_amp_block: empty node list");
  if (!(sigma_x > 0))
    throw ConfigError("coherent_amp_block: sigma_x must be positive");
  const Grid& g = psi.grid;
  // 10 sigma of Gaussian support keeps the truncation below 1e-11 amplitude
  double lo = *std::min_element(xs.begin(), xs.end()) - 10.0 * sigma_x;
  double hi = *std::max_element(xs.begin(), xs.end()) + 10.0 * sigma_x;
  int k_lo = std::max(0, int(std::ceil((lo - g.x_min) / g.dx)));
  int k_hi = std::min(g.n, int(std::floor((hi - g.x_min) / g.dx)) + 1);
  if (k_lo >= k_hi) {
    AmpBlock empty;
    empty.amp = Eigen::MatrixXcd::Zero(int(xs.size()), int(ps.size()));
    return empty;
  }
  const int w = k_hi - k_lo;
  const int nx = int(xs.size()), np = int(ps.size());

  AmpBlock out;
  out.k_lo = k_lo;
  out.k_hi = k_hi;
  out.gauss.resize(nx, w);
  const double inv4s2 = 1.0 / (4.0 * sigma_x * sigma_x);
  for (int a = 0; a < nx; ++a)
    for (int k = 0; k < w; ++k) {
      double d = g.x(k_lo + k) - xs[a];
      out.gauss(a, k) = std::exp(-d * d * inv4s2);
    }
  out.phase.resize(w, np);
  Eigen::MatrixXcd mod(w, np);
  for (int k = 0; k < w; ++k) {
    double y = g.x(k_lo + k);
    for (int b = 0; b < np; ++b) {
      out.phase(k, b) =
          std::exp(std::complex<double>(0.0, -ps[b] * y / kHbar));
      mod(k, b) = psi.amp[k_lo + k] * out.phase(k, b);
    }
  }
  double scale = g.dx * std::pow(2.0 * M_PI * sigma_x * sigma_x, -0.25);
  out.amp = (out.gauss.cast<std::complex<double>>() * mod) * scale;
  return out;
}

double husimi_point(const WaveFunction& psi, double sigma_x, double x,
                    double p) {
  // Out-of-band probes alias: the sampled overlap wraps p modulo twice the
  // Nyquist momentum and would report a ghost copy of the packet instead of
  // the true (exponentially small) tail. Backward-in-time characteristics
  // of high-energy slots do reach such momenta, so clip instead.
  if (std::abs(p) > psi.grid.p_nyquist()) return 0.0;
  AmpBlock b = coherent_amp_block(psi, {x}, {p}, sigma_x);
  return std::norm(b.amp(0, 0)) / (2.0 * M_PI * kHbar);
}

double HusimiField::riemann_sum() const {
  return values.sum() * lattice.dx * lattice.dp;
}

HusimiField husimi(const WaveFunction& psi, double sigma_x,
                   const PhaseLattice& lattice) {
  if (lattice.nx < 1 || lattice.np < 1)
    throw ConfigError("husimi: empty sample lattice");
  std::vector<double> xs(lattice.nx), ps(lattice.np);
  for (int a = 0; a < lattice.nx; ++a) xs[a] = lattice.x_lo + a * lattice.dx;
  for (int b = 0; b < lattice.np; ++b) ps[b] = lattice.p_lo + b * lattice.dp;
  AmpBlock blk = coherent_amp_block(psi, xs, ps, sigma_x);
  HusimiField out;
  out.lattice = lattice;
  out.values = (blk.amp.array().abs2() / (2.0 * M_PI * kHbar)).matrix();
  out.values = out.values.cwiseMax(0.0);
  return out;
}

double slot_probability(const WaveFunction& psi, const SlotPartition& part,
                        SlotKey key, double sigma_x,
                        const QuadratureRule& rule) {
  SlotNodes nodes = slot_nodes(part, key, rule);
  AmpBlock blk = coherent_amp_block(psi, nodes.x, nodes.p, sigma_x);
  double acc = 0.0;
  for (int a = 0; a < int(nodes.x.size()); ++a)
    for (int b = 0; b < int(nodes.p.size()); ++b)
      acc += nodes.wx[a] * nodes.wp[b] * std::norm(blk.amp(a, b));
  return acc / (2.0 * M_PI * kHbar);
}

SlotWindow grid_slot_window(const Grid& grid, const SlotPartition& part) {
  part.validate();
  double x_lo = grid.x_min, x_hi = grid.x_min + grid.length();
  double pn = grid.p_nyquist();
  SlotWindow w;
  w.i_lo = int(std::floor((x_lo - part.x_origin) / part.delta_x));
  w.i_hi = int(std::floor((x_hi - part.x_origin) / part.delta_x));
  w.j_lo = int(std::floor((-pn - part.p_origin) / part.delta_p));
  w.j_hi = int(std::floor((pn - part.p_origin) / part.delta_p));
  return w;
}

SlotDistribution slot_probabilities(const WaveFunction& psi,
                                    const SlotPartition& part, double sigma_x,
                                    const SlotWindow& window) {
  QuadratureRule rule = quadrature_for(part, sigma_x);
  SlotDistribution out;
  for (int i = window.i_lo; i <= window.i_hi; ++i)
    for (int j = window.j_lo; j <= window.j_hi; ++j)
      out[{i, j}] = slot_probability(psi, part, {i, j}, sigma_x, rule);
  return out;
}

SlotDistribution slot_probabilities(const WaveFunction& psi,
                                    const SlotPartition& part,
                                    double sigma_x) {
  return slot_probabilities(psi, part, sigma_x,
                            grid_slot_window(psi.grid, part));
}

double distribution_mass(const SlotDistribution& d) {
  double acc = 0.0;
  for (const auto& [k, v] : d) acc += v;
  return acc;
}

double coarse_observable_expectation(
    const SlotDistribution& dist, const SlotPartition& part,
    const std::function<double(double, double)>& a) {
  double acc = 0.0;
  for (const auto& [key, prob] : dist) {
    auto [xc, pc] = part.center(key);
    double value = a(xc, pc);
    if (!std::isfinite(value) && prob != 0.0)
      throw NumericalGuardError(
          "coarse_observable_expectation: observable not finite on a "
          "populated slot");
    if (prob != 0.0) acc += value * prob;
  }
  return acc;
}

}  // namespace slotlab
