#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "slotlab/partition.hpp"
#include "slotlab/scenario.hpp"

// Result serialization. Every file is reproducible byte for byte: floats
// are printed at 17 significant digits, JSON objects keep sorted keys, and
// manifests carry a schema version plus a hash of the canonical config.

namespace slotlab {

inline constexpr int kSchemaVersion = 1;

// %.17g, enough digits to round-trip any double exactly.
std::string fp17(double v);

// JSON text with sorted keys and fp17 floats; indent < 0 means compact.
std::string dump_json_17(const nlohmann::json& j, int indent = -1);

std::uint64_t fnv1a64(std::string_view text);

// Slot distribution as CSV with header i,j,x_center,p_center,probability.
std::string distribution_csv(const SlotDistribution& dist,
                             const SlotPartition& part);
SlotDistribution parse_distribution_csv(const std::string& text);

// Time series as CSV; columns[0] conventionally "t".
std::string time_series_csv(const std::vector<std::string>& columns,
                            const std::vector<std::vector<double>>& rows);

// Run manifest: schema version, command, seed, canonical config, its hash,
// and library versions. `extra` entries are merged at the top level.
nlohmann::json make_manifest(const Scenario& sc, const std::string& command,
                             const nlohmann::json& extra = {});

// Rejects manifests whose schema_version major is newer than ours.
nlohmann::json parse_manifest(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// SLOTLAB_<NAME> environment override, empty when unset.
std::string env_override(const std::string& name);

}  // namespace slotlab
