#include "slotlab/io.hpp"

#include <Eigen/Core>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slotlab/errors.hpp"

namespace slotlab {

using nlohmann::json;

std::string fp17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_rec(const json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out.push_back('\n');
    out.append(std::size_t(indent) * std::size_t(d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out.push_back(':');
        if (indent >= 0) out.push_back(' ');
        dump_rec(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out.push_back('[');
      bool first = true;
      for (const auto& v : j) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        dump_rec(v, out, indent, depth + 1);
      }
      newline(depth);
      out.push_back(']');
      return;
    }
    case json::value_t::number_float:
      out += fp17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json_17(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  if (indent >= 0) out.push_back('\n');
  return out;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string distribution_csv(const SlotDistribution& dist,
                             const SlotPartition& part) {
  std::string out = "i,j,x_center,p_center,probability\n";
  for (const auto& [key, prob] : dist) {
    auto [xc, pc] = part.center(key);
    out += std::to_string(key.i) + "," + std::to_string(key.j) + "," +
           fp17(xc) + "," + fp17(pc) + "," + fp17(prob) + "\n";
  }
  return out;
}

SlotDistribution parse_distribution_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("i,j,x_center,p_center,probability", 0) != 0)
    throw ConfigError("distribution CSV: bad header");
  SlotDistribution dist;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SlotKey key{};
    double xc = 0, pc = 0, prob = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &key.i, &key.j, &xc,
                    &pc, &prob) != 5)
      throw ConfigError("distribution CSV: bad row: " + line);
    dist[key] = prob;
  }
  return dist;
}

std::string time_series_csv(const std::vector<std::string>& columns,
                            const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out.push_back(',');
    out += columns[c];
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ConfigError("time series CSV: row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      out += fp17(row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

json make_manifest(const Scenario& sc, const std::string& command,
                   const json& extra) {
  std::string config = canonical_config(sc);
  json m;
  m["schema_version"] = kSchemaVersion;
  m["command"] = command;
  m["name"] = sc.name;
  m["seed"] = sc.seed;
  m["config"] = json::parse(config);
  char hex[19];
  std::snprintf(hex, sizeof hex, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(config)));
  m["config_hash"] = hex;
  m["versions"] = {{"slotlab", "0.1.0"},
                   {"schema", kSchemaVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it)
      m[it.key()] = it.value();
  return m;
}

json parse_manifest(const std::string& text) {
  json m;
  try {
    m = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  auto it = m.find("schema_version");
  if (it == m.end()) throw ConfigError("manifest: missing field: schema_version");
  if (it->get<int>() > kSchemaVersion)
    throw ConfigError("manifest: unsupported schema version " +
                      it->dump());
  return m;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  out.flush();
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string env_override(const std::string& name) {
  const char* v = std::getenv(("SLOTLAB_" + name).c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace slotlab
