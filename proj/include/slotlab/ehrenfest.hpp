#pragma once
#include <string>
#include <vector>

#include "slotlab/hamiltonian.hpp"
#include "slotlab/operator_lab.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/units.hpp"

// Ehrenfest-time estimates: the closed-form lower bound
//   t_E >= hbar / [ (dp)^2/m + 2 |D2_x V(x_i)/dx^2| (dx)^2 ],
// the drift-rate estimate (1/hbar)|Tr rho [dH, P_ij]| with the quadratic
// fluctuation truncation of dH, the textbook free-packet expression, and
// the physical scenario table (microscopic alpha particle, macroscopic
// object, cloud-chamber measurement rate).

namespace slotlab {

struct EhrenfestReport {
  double t_lower_bound = 0.0;
  double kinetic_term = 0.0;    // (dp)^2/(m hbar), rate
  double potential_term = 0.0;  // 2|D2_x V(x_i)|/hbar, rate
  SlotKey slot;
  std::string label;
};

// Bound at position x_i (slot centers in practice); the momentum index of
// the reported slot is not used by the formula and is stored as 0.
EhrenfestReport ehrenfest_lower_bound(const HamiltonianSpec& spec,
                                      const SlotPartition& part, double x_i,
                                      const std::string& label = "");

// t_E ~ m hbar / sigma_p^2
double textbook_free_ehrenfest(double mass, double sigma_p);

// (1/hbar)|<psi|[delta_h, povm]|psi>| with delta_h from
// operator-lab delta_h_quadratic (or any Hermitian substitute).
double drift_rate(const WaveFunction& rho0, const OperatorMatrix& delta_h,
                  const OperatorMatrix& povm);

// Physical scenario rows, each computed twice: directly in SI and through
// simulation units with a UnitScale round trip (the two agree to 1e-10).
struct ScenarioRow {
  std::string label;
  UnitScale scale;
  double mass_si = 0.0;
  double delta_x_si = 0.0;
  double delta_p_si = 0.0;      // precision (micro) or spread (macro)
  double t_e_seconds = 0.0;     // via UnitScale round trip
  double t_e_seconds_direct = 0.0;  // direct SI evaluation
  double interval_seconds = 0.0;    // collision interval; 0 when n/a
  bool classical_verdict = false;   // interval < t_E where applicable
};
std::vector<ScenarioRow> scenario_table();

}  // namespace slotlab
