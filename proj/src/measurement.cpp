#include "slotlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "slotlab/coherent.hpp"
#include "slotlab/errors.hpp"
#include "slotlab/husimi.hpp"
#include "slotlab/propagator.hpp"
#include "slotlab/quadrature.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

WaveFunction apply_slot_projector(const WaveFunction& psi,
                                  const SlotPartition& part, SlotKey key,
                                  double sigma_x, const QuadratureRule* rule_in) {
  QuadratureRule rule = rule_in ? *rule_in : quadrature_for(part, sigma_x);
  SlotNodes nodes = slot_nodes(part, key, rule);
  AmpBlock blk = coherent_amp_block(psi, nodes.x, nodes.p, sigma_x);
  const int nx = int(nodes.x.size()), np = int(nodes.p.size());
  const int w = blk.k_hi - blk.k_lo;
  if (w <= 0)
    throw NumericalGuardError(
        "apply_slot_projector: slot does not overlap the grid");

  // P psi = sum_ab w_ab/(2 pi hbar) psi_ab <psi_ab|psi>; the dropped
  // exp(i p_b x_a) phases of the block cancel against the synthesis ones.
  Eigen::MatrixXcd c(nx, np);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < np; ++b)
      c(a, b) = blk.amp(a, b) * nodes.wx[a] * nodes.wp[b] /
                (2.0 * M_PI * kHbar);
  Eigen::MatrixXcd synth = blk.phase.conjugate() * c.transpose();  // w x nx
  double norm_const = std::pow(2.0 * M_PI * sigma_x * sigma_x, -0.25);
  WaveFunction out{psi.grid, Eigen::VectorXcd::Zero(psi.grid.n)};
  for (int k = 0; k < w; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int a = 0; a < nx; ++a) acc += blk.gauss(a, k) * synth(k, a);
    out.amp[blk.k_lo + k] = norm_const * acc;
  }
  double n2 = out.amp.squaredNorm() * psi.grid.dx;
  if (!(n2 > 0.0))
    throw NumericalGuardError("apply_slot_projector: projected state is zero");
  out.amp /= std::sqrt(n2);
  return out;
}

MeasurementOutcome measure_collapse(const WaveFunction& psi,
                                    const SlotPartition& part, double sigma_x,
                                    std::uint64_t seed,
                                    const MeasurementOptions& opt) {
  part.validate();
  if (!(opt.coverage > 0.0 && opt.coverage < 1.0))
    throw ConfigError("measure_collapse: coverage must lie in (0,1)");
  if (!(opt.node_scale > 0.0))
    throw ConfigError("measure_collapse: node_scale must be positive");
  SlotKey center = part.slot_of(psi.mean_x(), mean_p(psi));
  SlotWindow full = grid_slot_window(psi.grid, part);
  QuadratureRule rule = quadrature_for(part, sigma_x);
  if (opt.node_scale != 1.0) {
    rule.nodes_x = std::max(8, int(std::ceil(rule.nodes_x * opt.node_scale)));
    rule.nodes_p = std::max(8, int(std::ceil(rule.nodes_p * opt.node_scale)));
  }

  SlotDistribution dist;
  double total = 0.0;
  auto add_window = [&](int radius) {
    int i0 = std::max(full.i_lo, center.i - radius);
    int i1 = std::min(full.i_hi, center.i + radius);
    int j0 = std::max(full.j_lo, center.j - radius);
    int j1 = std::min(full.j_hi, center.j + radius);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) {
        SlotKey k{i, j};
        if (dist.count(k)) continue;
        double p = slot_probability(psi, part, k, sigma_x, rule);
        dist[k] = p;
        total += p;
      }
    return i0 == full.i_lo && i1 == full.i_hi && j0 == full.j_lo &&
           j1 == full.j_hi;
  };
  bool exhausted = false;
  for (int radius = 1; !exhausted && total < opt.coverage &&
                       radius <= std::max(1, opt.max_radius);
       radius *= 2)
    exhausted = add_window(radius);
  if (!exhausted && total < opt.coverage) {
    int span = std::max(full.i_hi - full.i_lo, full.j_hi - full.j_lo) + 1;
    add_window(std::max(1, span));
  }
  if (!(total > 0.0))
    throw NumericalGuardError("measure_collapse: all-zero slot distribution");
  if (total < opt.coverage)
    throw NumericalGuardError(
        "measure_collapse: state mass escaped the partition window");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng) * total;
  SlotKey picked = dist.rbegin()->first;
  double cum = 0.0;
  for (const auto& [k, p] : dist) {
    cum += p;
    if (u < cum) {
      picked = k;
      break;
    }
  }

  MeasurementOutcome out;
  out.slot = picked;
  out.coverage = total;
  if (opt.reprepare) {
    auto [xc, pc] = part.center(picked);
    out.state = coherent_state(psi.grid, {xc, pc, sigma_x});
  } else {
    out.state = apply_slot_projector(psi, part, picked, sigma_x, &rule);
  }
  return out;
}

}  // namespace slotlab
