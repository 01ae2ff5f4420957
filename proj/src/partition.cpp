#include "slotlab/partition.hpp"

#include <cmath>

#include "slotlab/errors.hpp"
#include "slotlab/units.hpp"

namespace slotlab {

void SlotPartition::validate() const {
  if (!(delta_x > 0) || !(delta_p > 0))
    throw ConfigError("SlotPartition: slot sides must be positive");
}

double SlotPartition::coarseness() const {
  return delta_x * delta_p / (2.0 * M_PI * kHbar);
}

SlotKey SlotPartition::slot_of(double x, double p) const {
  if (!std::isfinite(x) || !std::isfinite(p))
    throw ConfigError("SlotPartition: non-finite phase-space point");
  return SlotKey{static_cast<int>(std::floor((x - x_origin) / delta_x)),
                 static_cast<int>(std::floor((p - p_origin) / delta_p))};
}

std::pair<double, double> SlotPartition::center(SlotKey k) const {
  return {x_origin + (k.i + 0.5) * delta_x, p_origin + (k.j + 0.5) * delta_p};
}

}  // namespace slotlab
