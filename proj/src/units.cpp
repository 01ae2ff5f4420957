#include "slotlab/units.hpp"

#include <cmath>

#include "slotlab/errors.hpp"

namespace slotlab {

double UnitScale::action_unit() const {
  return mass_unit * length_unit * length_unit / time_unit;
}

double UnitScale::energy_unit() const {
  return mass_unit * length_unit * length_unit / (time_unit * time_unit);
}

double UnitScale::hbar_defect() const {
  return std::abs(action_unit() * kHbar - kPhysHbar) / kPhysHbar;
}

void UnitScale::validate() const {
  if (!(length_unit > 0) || !(mass_unit > 0) || !(time_unit > 0))
    throw ConfigError("UnitScale: units must be positive");
  if (hbar_defect() > 1e-12)
    throw ConfigError("UnitScale: mass*length^2/time inconsistent with hbar");
}

UnitScale UnitScale::from_mass_length(double mass_kg, double length_m) {
  if (!(mass_kg > 0) || !(length_m > 0))
    throw ConfigError("UnitScale: mass and length must be positive");
  UnitScale s;
  s.mass_unit = mass_kg;
  s.length_unit = length_m;
  s.time_unit = mass_kg * length_m * length_m * kHbar / kPhysHbar;
  return s;
}

}  // namespace slotlab
