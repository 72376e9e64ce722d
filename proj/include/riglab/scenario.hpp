#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riglab/model.hpp"
#include "riglab/sampler.hpp"
#include "riglab/stats.hpp"

namespace riglab {

/// Invalid scenario configuration; the message starts with the offending
/// field path, e.g. "scenario.model.n: must be >= 1".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Analysis { degree, clustering, alpha_k, regime, theorem1_stats, example2 };

std::string to_string(Analysis a);

struct Tolerances {
  double degree_tv = 0.01;
  double alpha = 0.02;
  double alpha_k = 0.05;
};

/// Keep adding batches of replicates until every degree in [k_lo, k_hi] has
/// been observed on at least min_count vertices, or max_replicates is hit.
struct PoolUntil {
  count_t k_lo;
  count_t k_hi;
  count_t min_count;
  count_t max_replicates;
};

struct ScenarioConfig {
  std::string name = "custom";
  GraphKind kind = GraphKind::active;
  count_t n = 0;
  count_t m = 0;
  count_t s = 1;
  SizeSpec size = size_spec::Degenerate{0};
  count_t replicates = 1;
  std::optional<std::uint64_t> seed;
  std::vector<Analysis> outputs;
  Tolerances tolerances;
  count_t k_lo = 2;
  count_t k_hi = 20;
  std::optional<std::size_t> k_max;
  count_t min_bucket = kDefaultMinBucket;
  double pair_cap = kDefaultPairCap;
  std::optional<PoolUntil> pool_until;
  count_t example2_m = 40;
  double example2_epsilon = 0.1;

  ModelParams model() const;
  bool wants(Analysis a) const;
};

/// Built-in scenarios: example1 .. example5.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Parses {"scenario": {...}}; unknown keys are rejected.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ScenarioConfig& cfg);
nlohmann::ordered_json size_spec_to_json(const SizeSpec& spec);
SizeSpec size_spec_from_json(const nlohmann::json& j, const std::string& path);

struct DegreeRow {
  std::size_t k;
  double empirical;
  std::optional<double> theory;
};

struct AlphaKRow {
  count_t k;
  std::optional<double> empirical;
  std::optional<double> theory;
  count_t bucket_count;
  std::optional<double> se;
};

struct Report {
  nlohmann::ordered_json body;  // pure function of (config, seed)
  double wall_clock_seconds = 0.0;
  bool all_pass = true;
  std::vector<DegreeRow> degree_table;
  std::vector<AlphaKRow> alpha_k_table;

  std::string body_text() const { return body.dump(2); }
  /// body plus a "timing" object.
  nlohmann::ordered_json full() const;
};

/// jobs = 0 uses the hardware concurrency. Replicate r draws from stream r;
/// results are folded in replicate order, so the body does not depend on jobs.
Report run_scenario(const ScenarioConfig& cfg, unsigned jobs = 0);

/// Writes degree.csv and alpha_k.csv (when present) into dir.
void write_csv_tables(const Report& report, const std::filesystem::path& dir);

/// Graph of replicate 0 (stream 0) for the configured model.
Graph generate_graph(const ScenarioConfig& cfg);

}  // namespace riglab
