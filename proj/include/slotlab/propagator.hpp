#pragma once
#include "slotlab/grid.hpp"
#include "slotlab/hamiltonian.hpp"

// Strang split-operator propagator for H = p^2/2m + V(x) on the periodic
// grid: exp(-iV dt/2hbar) exp(-iT dt/hbar) exp(-iV dt/2hbar) per step via
// FFT. Spectrally exact in space, O(dt^2) in time, exactly unitary.

namespace slotlab {

struct PropagatorConfig {
  double dt = 1e-3;          // upper bound on the step; evolve divides t evenly
  int steps_per_output = 1;  // kept for callers that stream snapshots
};

// Conservative grid-wide energy scale E_max = p_nyq^2/2m + max|V|; auto_dt
// derives a safe default step from it.
double energy_scale(const HamiltonianSpec& spec, const Grid& grid);

// Step bound safety*hbar/E_max; always accepted by the evolve guard.
double auto_dt(const HamiltonianSpec& spec, const Grid& grid,
               double safety = 0.4);

// Energy content of the state itself, <T> + <|V|>; evolve's accuracy guard
// requires dt * E_state / hbar < 0.5 so that wide windows with irrelevant
// high-potential corners do not veto workable steps.
double state_energy_scale(const WaveFunction& psi, const HamiltonianSpec& spec);

// Propagates by t >= 0 in n = ceil(t/cfg.dt) equal steps. Throws
// NumericalGuardError when the guard rejects cfg.dt (advise a smaller step).
WaveFunction evolve(const WaveFunction& psi, const HamiltonianSpec& spec,
                    const PropagatorConfig& cfg, double t);

// Momentum moments through the FFT of the state.
double mean_p(const WaveFunction& psi);
double var_p(const WaveFunction& psi);

// Probability within `margin` of either grid edge; scenarios abort when the
// wrap-around risk exceeds 1e-3.
double boundary_mass(const WaveFunction& psi, double margin);

}  // namespace slotlab
