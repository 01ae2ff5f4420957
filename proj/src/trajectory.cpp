#include "slotlab/trajectory.hpp"

#include <cmath>
#include <cstdlib>

#include "slotlab/errors.hpp"
#include "slotlab/husimi.hpp"
#include "slotlab/rng.hpp"

namespace slotlab {

namespace {

PropagatorConfig resolve_prop(const PropagatorConfig& req,
                              const HamiltonianSpec& spec, const Grid& grid) {
  PropagatorConfig cfg = req;
  if (cfg.dt <= 0.0) cfg.dt = auto_dt(spec, grid);
  return cfg;
}

TrajectoryRecord run_impl(const WaveFunction& psi0, const HamiltonianSpec& spec,
                          const SlotPartition& part, double sigma_x,
                          const std::vector<double>& taus, double tau_tag,
                          std::uint64_t seed, const TrajectoryOptions& opt) {
  part.validate();
  spec.validate();
  if (!(sigma_x > 0)) throw ConfigError("trajectory: sigma_x must be > 0");
  for (double t : taus)
    if (!(t >= 0) || !std::isfinite(t))
      throw ConfigError("trajectory: intervals must be finite and >= 0");

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.tau = tau_tag;
  const int n = int(taus.size());
  rec.outcomes.reserve(n + 1);
  PropagatorConfig cfg = resolve_prop(opt.prop, spec, psi0.grid);

  // k = 0: measure the initial state, optionally conditioned on a slot
  MeasurementOutcome out;
  try {
    out = measure_collapse(psi0, part, sigma_x, derive_seed(seed, 0),
                           opt.measurement);
    if (opt.condition_initial) {
      int attempt = 0;
      while (!(out.slot == *opt.condition_initial)) {
        if (++attempt > opt.max_rejection)
          throw NumericalGuardError(
              "trajectory: initial-slot conditioning exhausted its rejection "
              "budget");
        out = measure_collapse(psi0, part, sigma_x,
                               derive_seed(seed, std::uint64_t(n) + 1 + attempt),
                               opt.measurement);
      }
    }
  } catch (const NumericalGuardError&) {
    rec.truncated = true;
    rec.final_state_norm = psi0.norm();
    return rec;
  }
  rec.outcomes.push_back(out.slot);

  WaveFunction psi = out.state;
  for (int k = 1; k <= n; ++k) {
    try {
      psi = evolve(psi, spec, cfg, taus[std::size_t(k) - 1]);
      if (opt.boundary_margin > 0.0 &&
          boundary_mass(psi, opt.boundary_margin) > 1e-3)
        throw NumericalGuardError(
            "trajectory: state reached the grid boundary");
      out = measure_collapse(psi, part, sigma_x, derive_seed(seed, k),
                             opt.measurement);
    } catch (const NumericalGuardError&) {
      rec.truncated = true;
      break;
    }
    rec.outcomes.push_back(out.slot);
    psi = out.state;
  }
  rec.final_state_norm = psi.norm();
  return rec;
}

}  // namespace

TrajectoryRecord repeated_measurement_run(const WaveFunction& psi0,
                                          const HamiltonianSpec& spec,
                                          const SlotPartition& part,
                                          double sigma_x, double tau, int n,
                                          std::uint64_t seed,
                                          const TrajectoryOptions& opt) {
  if (n < 0) throw ConfigError("trajectory: n must be >= 0");
  if (!(tau > 0) && n > 0)
    throw ConfigError("trajectory: tau must be > 0 when n > 0");
  std::vector<double> taus(std::size_t(n), tau);
  return run_impl(psi0, spec, part, sigma_x, taus, tau, seed, opt);
}

TrajectoryRecord repeated_measurement_run(const WaveFunction& psi0,
                                          const HamiltonianSpec& spec,
                                          const SlotPartition& part,
                                          double sigma_x,
                                          const std::vector<double>& taus,
                                          std::uint64_t seed,
                                          const TrajectoryOptions& opt) {
  return run_impl(psi0, spec, part, sigma_x, taus, 0.0, seed, opt);
}

DiscreteTrajectory classical_prediction(SlotKey start,
                                        const HamiltonianSpec& spec,
                                        const SlotPartition& part, double tau,
                                        int n,
                                        const DiscreteTrajectoryOptions& opt) {
  return discrete_characteristics(start, spec, part, tau, n, opt);
}

AgreementReport trajectory_agreement(const std::vector<SlotKey>& run,
                                     const std::vector<SlotKey>& prediction) {
  if (run.size() != prediction.size())
    throw ConfigError("trajectory_agreement: sequence lengths differ");
  AgreementReport rep;
  if (run.empty()) return rep;
  long hits = 0;
  double dist = 0.0;
  for (std::size_t k = 0; k < run.size(); ++k) {
    if (run[k] == prediction[k]) ++hits;
    dist += std::abs(run[k].i - prediction[k].i) +
            std::abs(run[k].j - prediction[k].j);
  }
  rep.fraction = double(hits) / double(run.size());
  rep.mean_index_distance = dist / double(run.size());
  return rep;
}

void MixedChannelSpec::validate() const {
  if (components.empty())
    throw ConfigError("mixed channel: at least one component required");
  double total = 0.0;
  for (const auto& [w, spec] : components) {
    if (!(w >= 0)) throw ConfigError("mixed channel: weights must be >= 0");
    spec.validate();
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("mixed channel: weights must sum to 1");
}

SlotDistribution mixed_unitary_distribution(const WaveFunction& psi0,
                                            const MixedChannelSpec& mix,
                                            const SlotPartition& part,
                                            double sigma_x, double t,
                                            const PropagatorConfig& cfg) {
  mix.validate();
  SlotDistribution dist;
  for (const auto& [w, spec] : mix.components) {
    if (w == 0.0) continue;
    PropagatorConfig c = resolve_prop(cfg, spec, psi0.grid);
    WaveFunction psi = evolve(psi0, spec, c, t);
    SlotDistribution d = slot_probabilities(psi, part, sigma_x);
    for (const auto& [key, p] : d) dist[key] += w * p;
  }
  return dist;
}

}  // namespace slotlab
