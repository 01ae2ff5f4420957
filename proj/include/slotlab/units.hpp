#pragma once

namespace slotlab {

// Everything internal runs in units with hbar = 1.
inline constexpr double kHbar = 1.0;
inline constexpr double kPhysHbar = 1.054571817e-34;  // J s

// Conversion between simulation units and SI. A scale is fixed by choosing
// the SI size of the length, mass and time units; consistency with hbar = 1
// requires mass*length^2/time == kPhysHbar.
struct UnitScale {
  double length_unit = 1.0;  // metres per sim length
  double mass_unit = 1.0;    // kg per sim mass
  double time_unit = 1.0;    // seconds per sim time

  double momentum_unit() const { return mass_unit * length_unit / time_unit; }
  double energy_unit() const;
  double action_unit() const;

  // relative deviation of the implied hbar from kPhysHbar
  double hbar_defect() const;
  void validate() const;  // throws ConfigError if hbar_defect() > 1e-12

  // derive the time unit from mass and length so that hbar_sim = 1 exactly
  static UnitScale from_mass_length(double mass_kg, double length_m);
};

}  // namespace slotlab
