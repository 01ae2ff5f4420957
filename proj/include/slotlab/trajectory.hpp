#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slotlab/hamiltonian.hpp"
#include "slotlab/liouville.hpp"
#include "slotlab/measurement.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/propagator.hpp"

// Repeated coarse measurement interleaved with unitary evolution, and the
// classical discrete-characteristic prediction it is scored against. A run
// is a seed-indexed sequence of slot outcomes; agreement is the fraction of
// steps whose sampled slot matches the prediction exactly.

namespace slotlab {

struct TrajectoryOptions {
  MeasurementOptions measurement;
  // prop.dt <= 0 requests auto_dt for the scenario's Hamiltonian
  PropagatorConfig prop{0.0, 1};
  // abort the run when more than 0.1% of the mass sits within this margin
  // of the grid edge (0 disables the check)
  double boundary_margin = 0.0;
  // when set, resample the k=0 outcome until it lands on this slot
  std::optional<SlotKey> condition_initial;
  int max_rejection = 256;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  double tau = 0.0;  // 0 when the run used an explicit interval list
  std::vector<SlotKey> outcomes;  // n+1 entries, k = 0..n
  double final_state_norm = 0.0;
  bool truncated = false;  // guard tripped before all n steps completed
};

// n measurement cycles at fixed interval tau, plus the k = 0 measurement
// of the initial state.
TrajectoryRecord repeated_measurement_run(const WaveFunction& psi0,
                                          const HamiltonianSpec& spec,
                                          const SlotPartition& part,
                                          double sigma_x, double tau, int n,
                                          std::uint64_t seed,
                                          const TrajectoryOptions& opt = {});

// Same protocol with an explicit list of intervals between measurements.
TrajectoryRecord repeated_measurement_run(const WaveFunction& psi0,
                                          const HamiltonianSpec& spec,
                                          const SlotPartition& part,
                                          double sigma_x,
                                          const std::vector<double>& taus,
                                          std::uint64_t seed,
                                          const TrajectoryOptions& opt = {});

// Classical comparator: integrate the discrete characteristics from the
// given start slot and return the slot at each measurement time.
DiscreteTrajectory classical_prediction(SlotKey start,
                                        const HamiltonianSpec& spec,
                                        const SlotPartition& part, double tau,
                                        int n,
                                        const DiscreteTrajectoryOptions& opt = {});

struct AgreementReport {
  double fraction = 0.0;             // exact slot matches / total
  double mean_index_distance = 0.0;  // mean |di| + |dj| over all steps
};

// Step-by-step comparison; throws ConfigError when the lengths differ.
AgreementReport trajectory_agreement(const std::vector<SlotKey>& run,
                                     const std::vector<SlotKey>& prediction);

// Statistical mixture of unitary channels: each component evolves the same
// initial state under its own Hamiltonian and the slot distributions are
// combined with the mixture weights.
struct MixedChannelSpec {
  std::vector<std::pair<double, HamiltonianSpec>> components;
  void validate() const;
};

SlotDistribution mixed_unitary_distribution(const WaveFunction& psi0,
                                            const MixedChannelSpec& mix,
                                            const SlotPartition& part,
                                            double sigma_x, double t,
                                            const PropagatorConfig& cfg = {0.0,
                                                                           1});

}  // namespace slotlab
