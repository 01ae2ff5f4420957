#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "slotlab/grid.hpp"
#include "slotlab/hamiltonian.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/propagator.hpp"
#include "slotlab/trajectory.hpp"
#include "slotlab/units.hpp"

// A scenario bundles everything one run needs: units, grid, partition,
// dynamics, initial packet, measurement schedule, and seed. Scenarios come
// from a JSON file or from the built-in presets.

namespace slotlab {

struct Schedule {
  double tau = 0.0;  // fixed measurement interval; ignored when taus set
  int cycles = 0;    // number of measurement cycles after the k = 0 one
  std::vector<double> taus;          // optional explicit interval list
  std::vector<double> output_times;  // non-negative, strictly increasing
};

struct InitialPacket {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma_x = 0.0;
};

struct Scenario {
  std::string name = "scenario";
  UnitScale scale;  // identity unless the file or preset maps to SI
  double grid_half = 0.0;
  int grid_points = 0;
  SlotPartition partition;
  HamiltonianSpec hamiltonian;
  // non-empty means a statistical mixture of unitary channels; the plain
  // hamiltonian field then only seeds defaults
  std::vector<std::pair<double, HamiltonianSpec>> mixture;
  InitialPacket initial;
  PropagatorConfig prop{0.0, 1};  // dt <= 0 requests auto_dt
  Schedule schedule;
  std::uint64_t seed = 1;

  void validate() const;
  Grid make_grid() const;
  WaveFunction make_initial(const Grid& grid) const;
  MixedChannelSpec make_mixture() const;  // single component when pure
  std::vector<double> intervals() const;  // schedule as an explicit list
};

// Built-in presets: micro, macro, cloud-chamber (unit-mapping studies) and
// harmonic, quartic (dynamics studies).
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_names();

// JSON scenario files. Empty or whitespace-only text parses as an empty
// object; missing required fields raise ConfigError naming the field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical JSON form of the configuration (sorted keys, 17 significant
// digits); the manifest hash is computed over this string.
std::string canonical_config(const Scenario& sc);

}  // namespace slotlab
