#pragma once
#include <cstdint>

#include "slotlab/grid.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/quadrature.hpp"

// Coarse phase-space measurement: sample a slot (i,j) with probability
// p_ij and update the state. The update is the Lueders map
// psi' = P_ij psi / ||P_ij psi||, synthesized from the coherent-state
// expansion of P_ij restricted to the slot; a re-preparation variant
// (fresh packet at the slot center) sits behind a switch for sensitivity
// studies.

namespace slotlab {

struct MeasurementOptions {
  // candidate slots expand around the state's center until this much mass
  // is captured
  double coverage = 0.99;
  int max_radius = 64;
  bool reprepare = false;
  // scales the per-slot quadrature node counts; < 1 trades integral accuracy
  // (still well below slot-probability noise) for speed in long ensembles
  double node_scale = 1.0;
};

struct MeasurementOutcome {
  SlotKey slot;
  WaveFunction state;
  double coverage = 0.0;  // mass captured by the candidate window
};

// Lueders update alone (no sampling). A null rule means the default
// quadrature_for sizing.
WaveFunction apply_slot_projector(const WaveFunction& psi,
                                  const SlotPartition& part, SlotKey key,
                                  double sigma_x,
                                  const QuadratureRule* rule = nullptr);

// Full measurement. Reproducible for a given seed; throws
// NumericalGuardError when the distribution is all zero or the captured
// mass stays below opt.coverage (state left the partition window).
MeasurementOutcome measure_collapse(const WaveFunction& psi,
                                    const SlotPartition& part, double sigma_x,
                                    std::uint64_t seed,
                                    const MeasurementOptions& opt = {});

}  // namespace slotlab
