#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "riglab/scenario.hpp"

namespace riglab {
namespace {

using nlohmann::json;

ScenarioConfig parse(const std::string& text) { return parse_scenario(json::parse(text)); }

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmallPassive = R"({"scenario": {
  "name": "small-passive",
  "model": {"kind": "passive", "n": 3000, "m": 3000, "s": 1,
            "size_dist": {"type": "degenerate", "x": 4}},
  "replicates": 4, "seed": 11,
  "outputs": ["degree", "clustering", "alpha_k", "regime"],
  "k_range": [3, 9], "min_bucket": 5
}})";

TEST(ParseScenario, FullModel) {
  const auto c = parse(kSmallPassive);
  EXPECT_EQ(c.name, "small-passive");
  EXPECT_EQ(c.kind, GraphKind::passive);
  EXPECT_EQ(c.n, 3000u);
  EXPECT_EQ(c.replicates, 4u);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.k_lo, 3u);
  EXPECT_EQ(c.min_bucket, 5u);
  EXPECT_TRUE(c.wants(Analysis::regime));
  EXPECT_FALSE(c.wants(Analysis::example2));
  EXPECT_DOUBLE_EQ(c.tolerances.degree_tv, 0.01);
}

TEST(ParseScenario, PresetWithOverrides) {
  const auto c = parse(R"({"scenario": {"preset": "example4",
      "model": {"n": 5000}, "tolerances": {"alpha": 0.05}}})");
  EXPECT_EQ(c.name, "example4");
  EXPECT_EQ(c.n, 5000u);
  EXPECT_EQ(c.m, 100000u);
  EXPECT_DOUBLE_EQ(c.tolerances.alpha, 0.05);
  EXPECT_FALSE(c.seed.has_value());
}

TEST(ParseScenario, AllPresetsLoad) {
  for (const auto& name : preset_names()) {
    EXPECT_NO_THROW(parse(R"({"scenario": {"preset": ")" + name + R"("}})")) << name;
  }
}

TEST(ParseScenario, UnknownKeysCarryPath) {
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4",
      "tolerances": {"degre_tv": 0.1}}})"),
            "scenario.tolerances.degre_tv: unknown key");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4"}, "extra": 1})"),
            "$.extra: unknown key");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4",
      "model": {"size_dist": {"type": "degenerate", "x": 2, "y": 1}}}})"),
            "scenario.model.size_dist.y: unknown key");
}

TEST(ParseScenario, InvalidValuesCarryPath) {
  EXPECT_EQ(config_error(R"({"scenario": {"outputs": ["degree"]}})"),
            "scenario.model: required unless a preset is given");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4", "replicates": 0}})"),
            "scenario.replicates: must be >= 1");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4",
      "outputs": ["degree", "triangles"]}})"),
            "scenario.outputs[1]: unknown analysis 'triangles'");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4",
      "tolerances": {"alpha": 0}}})"),
            "scenario.tolerances.alpha: must be > 0");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4", "model": {"n": -3}}})"),
            "scenario.model.n: must be nonnegative");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "nine"}})"),
            "scenario.preset: unknown preset 'nine'");
  EXPECT_EQ(config_error(R"({"scenario": {"preset": "example4",
      "model": {"size_dist": {"type": "degenerate", "x": 200000}}}})"),
            "scenario.model: degenerate size exceeds m");
  EXPECT_NE(config_error(R"({"scenario": {"preset": "example4",
      "model": {"kind": "bipartite"}}})").find("scenario.model.kind"),
            std::string::npos);
}

TEST(ParseScenario, EchoLoadsBack) {
  auto c = parse(kSmallPassive);
  c.pool_until = PoolUntil{3, 6, 10, 20};
  const json echo = json::parse(to_json(c).dump());
  const auto back = parse_scenario(json{{"scenario", echo}});
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
}

TEST(ParseScenario, SizeSpecRoundTrip) {
  const std::vector<SizeSpec> specs{size_spec::Degenerate{3}, size_spec::Table{{0.5, 0.5}},
                                    size_spec::TruncatedPowerLaw{2.5, 1, 9},
                                    size_spec::Binomial{7, 0.25}};
  for (const auto& spec : specs) {
    const auto j = json::parse(size_spec_to_json(spec).dump());
    EXPECT_EQ(size_spec_to_json(size_spec_from_json(j, "x")).dump(),
              size_spec_to_json(spec).dump());
  }
}

TEST(RunScenario, IndependentOfJobs) {
  const auto c = parse(kSmallPassive);
  const auto one = run_scenario(c, 1);
  const auto three = run_scenario(c, 3);
  EXPECT_EQ(one.body_text(), three.body_text());
  EXPECT_EQ(run_scenario(c, 2).body_text(), one.body_text());
}

TEST(RunScenario, SeedChangesBody) {
  auto c = parse(kSmallPassive);
  const auto a = run_scenario(c, 1);
  c.seed = 12;
  EXPECT_NE(run_scenario(c, 1).body_text(), a.body_text());
}

TEST(RunScenario, PassiveReportContents) {
  const auto r = run_scenario(parse(kSmallPassive), 2);
  const auto& b = r.body;
  EXPECT_EQ(b["replicates_run"], 4);
  EXPECT_EQ(b["metadata"]["asymptotic_prediction"], true);
  EXPECT_EQ(b["metadata"]["passive_s_ge_2_no_theory"], false);
  EXPECT_EQ(b["analyses"]["degree"]["theory_law"], "compound_poisson");
  EXPECT_NEAR(b["analyses"]["degree"]["lambda"].get<double>(), 4.0, 1e-12);
  EXPECT_NEAR(b["analyses"]["clustering"]["theory"].get<double>(),
              (1728.0 / 3000.0 + 24.0) / (144.0 + 24.0),
              1e-12);
  bool saw_six = false;
  for (const auto& row : b["analyses"]["alpha_k"]["rows"]) {
    if (row["k"] == 6) {
      saw_six = true;
      EXPECT_NEAR(row["theory"].get<double>(), 0.4, 1e-12);
      EXPECT_NEAR(row["empirical"].get<double>(), 0.4, 0.05);
    }
    if (row["k"] == 4) EXPECT_TRUE(row["theory"].is_null());
  }
  EXPECT_TRUE(saw_six);
  EXPECT_EQ(b["analyses"]["regime"]["case"], "balanced");
  EXPECT_FALSE(r.full()["timing"]["wall_clock_seconds"].is_null());
  EXPECT_FALSE(b.contains("timing"));
}

TEST(RunScenario, PassiveThresholdAboveOneHasNoTheory) {
  auto c = parse(kSmallPassive);
  c.s = 2;
  c.replicates = 1;
  const auto r = run_scenario(c, 1);
  EXPECT_EQ(r.body["metadata"]["passive_s_ge_2_no_theory"], true);
  EXPECT_TRUE(r.body["analyses"]["degree"]["pass"].is_null());
  EXPECT_TRUE(r.body["analyses"]["clustering"]["theory"].is_null());
  EXPECT_TRUE(r.all_pass);
}

TEST(RunScenario, ResourceCapSurfacesPerReplicate) {
  auto c = parse(kSmallPassive);
  c.pair_cap = 10.0;
  c.replicates = 2;
  const auto r = run_scenario(c, 1);
  EXPECT_FALSE(r.all_pass);
  EXPECT_EQ(r.body["replicate_errors"].size(), 2u);
  EXPECT_EQ(r.body["replicate_errors"][1]["replicate"], 1);
}

TEST(RunScenario, PoolingStopsWhenBucketsFill) {
  auto c = parse(kSmallPassive);
  c.replicates = 1;
  c.pool_until = PoolUntil{6, 6, 1000, 40};
  const auto r = run_scenario(c, 1);
  const auto reps = r.body["replicates_run"].get<count_t>();
  EXPECT_GT(reps, 1u);
  EXPECT_LE(reps, 40u);
  const double vertices = r.body["analyses"]["degree"]["vertices"].get<double>();
  double at_six = 0.0;
  for (const auto& row : r.degree_table) {
    if (row.k == 6) at_six = row.empirical * vertices;
  }
  EXPECT_GE(std::llround(at_six), 1000);
}

TEST(RunScenario, ActiveUniformPairs) {
  const auto c = parse(R"({"scenario": {"preset": "example4",
      "model": {"n": 20000, "m": 20000}, "seed": 5}})");
  const auto r = run_scenario(c, 1);
  const auto& deg = r.body["analyses"]["degree"];
  EXPECT_EQ(deg["theory_law"], "mixed_poisson");
  EXPECT_LT(deg["tv_theory"].get<double>(), 0.02);
  EXPECT_NEAR(r.body["analyses"]["clustering"]["theory"].get<double>(), 0.5, 1e-15);
  EXPECT_EQ(r.body["metadata"]["clamped_probability"], false);
}

TEST(RunScenario, DiagnosticsPreset) {
  auto c = preset("example2");
  c.seed = 3;
  const auto r = run_scenario(c, 1);
  const auto& e = r.body["analyses"]["example2"];
  EXPECT_NEAR(e["ratio_prime"].get<double>(), 43680.0 / 116280.0, 1e-15);
  EXPECT_EQ(e["pass"], true);
  const auto& t = r.body["analyses"]["theorem1_stats"];
  EXPECT_NEAR(t["lambda_bar"].get<double>(), 1220 * 10626.0 * 10626.0 / 137846528820.0,
              1e-9);
  EXPECT_TRUE(r.all_pass);
}

TEST(CsvTables, WritesHeadersAndRows) {
  const auto r = run_scenario(parse(kSmallPassive), 1);
  const auto dir = std::filesystem::temp_directory_path() / "riglab_csv_test";
  std::filesystem::remove_all(dir);
  write_csv_tables(r, dir);
  std::ifstream deg(dir / "degree.csv");
  std::string header;
  std::getline(deg, header);
  EXPECT_EQ(header, "k,empirical,theory,abs_diff");
  std::ifstream ak(dir / "alpha_k.csv");
  std::getline(ak, header);
  EXPECT_EQ(header, "k,empirical,theory,bucket_count,se");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(ak, row)) ++rows;
  EXPECT_EQ(rows, 7u);
  std::filesystem::remove_all(dir);
}

TEST(GenerateGraph, MatchesReplicateZero) {
  auto c = parse(kSmallPassive);
  const auto a = generate_graph(c);
  const auto b = generate_graph(c);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.vertex_count(), 3000u);
}

}  // namespace
}  // namespace riglab
