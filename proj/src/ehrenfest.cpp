#include "slotlab/ehrenfest.hpp"

#include <cmath>

#include "slotlab/errors.hpp"

namespace slotlab {

EhrenfestReport ehrenfest_lower_bound(const HamiltonianSpec& spec,
                                      const SlotPartition& part, double x_i,
                                      const std::string& label) {
  spec.validate();
  part.validate();
  EhrenfestReport rep;
  rep.label = label;
  rep.slot = {int(std::floor((x_i - part.x_origin) / part.delta_x)), 0};
  rep.kinetic_term =
      part.delta_p * part.delta_p / (spec.mass * kHbar);
  double d2v = spec.second_difference(x_i, part.delta_x);
  rep.potential_term = 2.0 * std::abs(d2v) / kHbar;
  double denom = rep.kinetic_term + rep.potential_term;
  if (!(denom > 0.0))
    throw ConfigError("ehrenfest_lower_bound: zero denominator");
  rep.t_lower_bound = 1.0 / denom;
  return rep;
}

double textbook_free_ehrenfest(double mass, double sigma_p) {
  if (!(mass > 0) || !(sigma_p > 0))
    throw ConfigError("textbook_free_ehrenfest: mass, sigma_p must be > 0");
  return mass * kHbar / (sigma_p * sigma_p);
}

double drift_rate(const WaveFunction& rho0, const OperatorMatrix& delta_h,
                  const OperatorMatrix& povm) {
  if (!(delta_h.grid == rho0.grid) || !(povm.grid == rho0.grid))
    throw ConfigError("drift_rate: grid mismatch");
  Eigen::MatrixXcd comm = delta_h.m * povm.m - povm.m * delta_h.m;
  std::complex<double> tr =
      (rho0.amp.adjoint() * (comm * rho0.amp))(0, 0) * rho0.grid.dx;
  return std::abs(tr) / kHbar;
}

std::vector<ScenarioRow> scenario_table() {
  std::vector<ScenarioRow> rows;

  // alpha particle in a cloud chamber: free-particle bound at the stated
  // measurement precisions
  {
    ScenarioRow r;
    r.label = "micro";
    r.mass_si = 1e-27;
    r.delta_x_si = 1e-10;
    r.delta_p_si = 1e-24;
    r.scale = UnitScale::from_mass_length(r.mass_si, r.delta_x_si);
    r.scale.validate();
    double dp_sim = r.delta_p_si / r.scale.momentum_unit();
    double t_sim = kHbar * 1.0 / (dp_sim * dp_sim);  // m_sim = 1
    r.t_e_seconds = t_sim * r.scale.time_unit;
    r.t_e_seconds_direct = kPhysHbar * r.mass_si / (r.delta_p_si * r.delta_p_si);
    rows.push_back(r);
  }

  // macroscopic object: textbook expression at the de-Broglie-limited spread
  {
    ScenarioRow r;
    r.label = "macro";
    r.mass_si = 1e-3;
    r.delta_x_si = 1e-6;
    r.delta_p_si = 1e-28;
    r.scale = UnitScale::from_mass_length(r.mass_si, r.delta_x_si);
    r.scale.validate();
    double sp_sim = r.delta_p_si / r.scale.momentum_unit();
    double t_sim = textbook_free_ehrenfest(1.0, sp_sim);
    r.t_e_seconds = t_sim * r.scale.time_unit;
    r.t_e_seconds_direct = r.mass_si * kPhysHbar / (r.delta_p_si * r.delta_p_si);
    rows.push_back(r);
  }

  // collision rate in the chamber: tau = 1/(n sigma v), compared against
  // the micro bound
  {
    ScenarioRow r;
    r.label = "cloud-chamber";
    r.mass_si = 1e-27;
    r.delta_x_si = 1e-10;
    r.delta_p_si = 1e-24;
    r.scale = UnitScale::from_mass_length(r.mass_si, r.delta_x_si);
    r.scale.validate();
    double number_density = 1e25;  // 1/m^3
    double cross_section = 1e-18;  // m^2
    double velocity = 1e7;         // m/s
    r.interval_seconds = 1.0 / (number_density * cross_section * velocity);
    double dp_sim = r.delta_p_si / r.scale.momentum_unit();
    r.t_e_seconds = kHbar / (dp_sim * dp_sim) * r.scale.time_unit;
    r.t_e_seconds_direct = kPhysHbar * r.mass_si / (r.delta_p_si * r.delta_p_si);
    r.classical_verdict = r.interval_seconds < r.t_e_seconds;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace slotlab
