#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "synapse/config.hpp"
#include "synapse/critical.hpp"
#include "synapse/dynamics.hpp"
#include "synapse/field_zeros.hpp"

namespace synapse {

using Json = nlohmann::ordered_json;

/// Written by every CLI run. `config` is the resolved scene as canonical YAML,
/// so re-parsing it reproduces the run's inputs exactly.
struct RunReport {
  std::string command;
  std::vector<std::string> argv;
  std::string config;
  Json results = Json::object();
  std::vector<std::string> warnings;
  double wall_time = 0.0;  // s
  int exit_code = 0;
  std::string error;
};

Json to_json(const RunReport& report);

const char* artifact_version();

Json to_json(const Vec3& v);
Json to_json(const PotentialSample& s);
Json to_json(const BarrierResult& r, bool with_path = true);
Json to_json(const CriticalSearchResult& r);
Json to_json(const TransferStats& s);
Json to_json(const FieldZeros& z);
/// Energy in J, Hz (E/h) and K (E/kB).
Json energy_json(double joules);

}  // namespace synapse
