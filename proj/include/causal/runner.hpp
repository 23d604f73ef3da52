#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "causal/embedding.hpp"
#include "causal/pullback.hpp"

namespace causal {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

/// One verification result. `detect` marks negative controls, which pass when
/// the residual exceeds the threshold.
struct CheckRecord {
  std::string name;
  std::string anchor;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int samples = 0;
  double threshold = 0.0;
  bool detect = false;
  bool pass = false;
  std::vector<std::string> errors;
};

struct RunConfig {
  std::string suite = "all";
  Json field = {{"name", "instanton"}};
  Json reduction_field = {{"name", "constant"}};
  Json morphism = {{"name", "lifted_affine"}};
  Json frames = {{"name", "matched"}};
  Json connection = {{"name", "embedded"}};
  Region region{Bispinor::Zero(), 0.5, 100, 42};
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 42;
  int N = 3;
  int threads = 1;
};

struct Report {
  std::vector<CheckRecord> records;
  bool pass = false;
  Json config;
  std::string version = kToolkitVersion;
  double wall_time = 0.0;
};

const std::vector<std::string>& suite_names();
const std::map<std::string, double>& default_tolerances();

/// Validates and fills defaults; throws ConfigError.
RunConfig parse_config(const Json& j);
Json config_to_json(const RunConfig& cfg);

/// Thread count from CAUSAL_THREADS, else 1.
int default_threads();

Report run(const RunConfig& cfg);
Json report_to_json(const Report& r);

// Catalogs addressed by name and parameters; unknown names are ConfigError.
GaugeField field_from_spec(const Json& spec);
SelfDualMorphism self_dual_from_spec(const Json& spec, std::uint64_t seed);
CausalMorphism causal_from_spec(const Json& spec, std::uint64_t seed);
ExtendedCausalMorphism frames_from_spec(const Json& morphism, const Json& frames,
                                        std::uint64_t seed);

}  // namespace causal
