#include "riglab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "riglab/oracle.hpp"
#include "riglab/theory.hpp"

namespace riglab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

/// Typed view of one JSON object that rejects keys outside `allowed`.
class Fields {
 public:
  Fields(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
      if (!ok.count(item.key())) fail(at(item.key()), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }
  /// null counts as absent, so a report's scenario echo loads back.
  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& raw(const char* key) const { return j_.at(key); }

  std::optional<count_t> count(const char* key) const {
    if (!has(key)) return std::nullopt;
    return as_count(j_.at(key), at(key));
  }

  std::optional<double> number(const char* key) const {
    if (!has(key)) return std::nullopt;
    const auto& v = j_.at(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "must be finite");
    return d;
  }

  std::optional<std::string> text(const char* key) const {
    if (!has(key)) return std::nullopt;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  static count_t as_count(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<count_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(path, "must be nonnegative");
      return static_cast<count_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d < 0x1p63 && std::floor(d) == d) {
        return static_cast<count_t>(d);
      }
      fail(path, "expected a nonnegative integer");
    }
    fail(path, "expected a nonnegative integer");
  }

 private:
  const json& j_;
  std::string path_;
};

Analysis parse_analysis(const std::string& text, const std::string& path) {
  for (Analysis a : {Analysis::degree, Analysis::clustering, Analysis::alpha_k,
                     Analysis::regime, Analysis::theorem1_stats,
                     Analysis::example2}) {
    if (to_string(a) == text) return a;
  }
  fail(path, "unknown analysis '" + text + "'");
}

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<bool> within(std::optional<double> a, std::optional<double> b,
                           double tol) {
  if (!a || !b) return std::nullopt;
  return std::abs(*a - *b) <= tol;
}

struct ReplicateResult {
  std::vector<count_t> degree_counts;
  std::optional<ClusteringReport> clustering;
  std::vector<count_t> sizes;
  std::optional<std::string> error;
};

struct RunPlan {
  bool graph = false;
  bool clustering = false;
  bool sizes = false;
};

ReplicateResult run_replicate(const ScenarioConfig& cfg,
                              const ModelParams& params, std::uint64_t seed,
                              count_t r, const RunPlan& plan) {
  ReplicateResult res;
  RngStream rng(seed, r);
  const Incidence inc = sample_incidence(params, rng);
  if (plan.sizes && r == 0) res.sizes = inc.set_sizes();
  if (!plan.graph) return res;
  try {
    const Graph g = params.kind == GraphKind::active
                        ? build_active(inc, params.s, cfg.pair_cap)
                        : build_passive(inc, params.s, cfg.pair_cap);
    res.degree_counts = degree_counts(g);
    if (plan.clustering) res.clustering = clustering_report(g, cfg.min_bucket);
  } catch (const ResourceLimitError& e) {
    res.error = e.what();
  }
  return res;
}

/// Runs replicates [first, first + count) on `jobs` workers and stores each
/// result at its replicate index.
void run_batch(const ScenarioConfig& cfg, const ModelParams& params,
               std::uint64_t seed, const RunPlan& plan, count_t first,
               count_t count, unsigned jobs,
               std::vector<ReplicateResult>& results) {
  results.resize(first + count);
  std::atomic<count_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const count_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[first + i] = run_replicate(cfg, params, seed, first + i, plan);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<count_t>(std::max(1u, jobs), count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

std::vector<count_t> pooled_degree_counts(
    const std::vector<ReplicateResult>& results) {
  std::vector<count_t> total(1, 0);
  for (const auto& r : results) {
    if (r.degree_counts.size() > total.size()) {
      total.resize(r.degree_counts.size(), 0);
    }
    for (std::size_t k = 0; k < r.degree_counts.size(); ++k) {
      total[k] += r.degree_counts[k];
    }
  }
  return total;
}

bool pool_satisfied(const PoolUntil& pool, const std::vector<count_t>& counts) {
  for (count_t k = pool.k_lo; k <= pool.k_hi; ++k) {
    const count_t c = k < counts.size() ? counts[k] : 0;
    if (c < pool.min_count) return false;
  }
  return true;
}

ordered_json fit_json(const std::map<double, double>& points) {
  std::size_t usable = 0;
  for (const auto& [k, v] : points) usable += (k > 0.0 && v > 0.0);
  if (usable < 3) return nullptr;
  const auto fit = loglog_slope(points);
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
}

}  // namespace

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::degree: return "degree";
    case Analysis::clustering: return "clustering";
    case Analysis::alpha_k: return "alpha_k";
    case Analysis::regime: return "regime";
    case Analysis::theorem1_stats: return "theorem1_stats";
    case Analysis::example2: return "example2";
  }
  return "unknown";
}

ModelParams ScenarioConfig::model() const {
  ModelParams p{n, m, s, make_size_dist(size, m), kind};
  p.validate();
  return p;
}

bool ScenarioConfig::wants(Analysis a) const {
  return std::find(outputs.begin(), outputs.end(), a) != outputs.end();
}

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example4", "example5"};
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "example1") {
    // Uniform active model near the Poisson limit, mean 15^2 * 2e4 / C(2000,2).
    c.kind = GraphKind::active;
    c.n = 20000;
    c.m = 2000;
    c.s = 2;
    c.size = size_spec::Degenerate{6};
    c.outputs = {Analysis::degree, Analysis::clustering};
  } else if (name == "example2") {
    // s = m/2, x = 0.6 m with n chosen so that (n-1) p* is close to 1.
    c.kind = GraphKind::active;
    c.n = 1221;
    c.m = 40;
    c.s = 20;
    c.size = size_spec::Degenerate{24};
    c.outputs = {Analysis::example2, Analysis::theorem1_stats};
    c.example2_m = 40;
    c.example2_epsilon = 0.1;
  } else if (name == "example3") {
    c.kind = GraphKind::active;
    c.n = 200000;
    c.m = 200000;
    c.s = 1;
    c.size = size_spec::TruncatedPowerLaw{4.5, 1, 200};
    c.outputs = {Analysis::degree, Analysis::clustering, Analysis::alpha_k};
    c.replicates = 50;
    c.k_lo = 4;
    c.k_hi = 20;
    c.pool_until = PoolUntil{4, 20, 500, 3000};
  } else if (name == "example4") {
    c.kind = GraphKind::active;
    c.n = 100000;
    c.m = 100000;
    c.s = 1;
    c.size = size_spec::Degenerate{2};
    c.outputs = {Analysis::degree, Analysis::clustering, Analysis::alpha_k};
    c.k_lo = 2;
    c.k_hi = 10;
  } else if (name == "example5") {
    c.kind = GraphKind::passive;
    c.n = 100000;
    c.m = 100000;
    c.s = 1;
    c.size = size_spec::Degenerate{4};
    c.outputs = {Analysis::degree, Analysis::clustering, Analysis::alpha_k,
                 Analysis::regime};
    c.k_lo = 3;
    c.k_hi = 12;
    c.pool_until = PoolUntil{6, 6, 300, 50};
  } else {
    throw ConfigError("scenario.preset: unknown preset '" + name + "'");
  }
  return c;
}

ordered_json size_spec_to_json(const SizeSpec& spec) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, size_spec::Degenerate>) {
          return {{"type", "degenerate"}, {"x", v.x}};
        } else if constexpr (std::is_same_v<T, size_spec::Table>) {
          return {{"type", "table"}, {"weights", v.weights}};
        } else if constexpr (std::is_same_v<T, size_spec::TruncatedPowerLaw>) {
          return {{"type", "power_law"},
                  {"gamma", v.gamma},
                  {"x_min", v.x_min},
                  {"x_max", v.x_max}};
        } else {
          return {{"type", "binomial"}, {"trials", v.trials}, {"p", v.p}};
        }
      },
      spec);
}

SizeSpec size_spec_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    fail(path + ".type", "expected one of degenerate|table|power_law|binomial");
  }
  const auto type = j.at("type").get<std::string>();
  auto need = [&](const auto& value, const char* key) {
    if (!value) fail(path + "." + key, "required");
    return *value;
  };
  if (type == "degenerate") {
    Fields f(j, path, {"type", "x"});
    return size_spec::Degenerate{need(f.count("x"), "x")};
  }
  if (type == "table") {
    Fields f(j, path, {"type", "weights"});
    if (!f.has("weights") || !f.raw("weights").is_array()) {
      fail(f.at("weights"), "expected an array of numbers");
    }
    std::vector<double> w;
    const auto& arr = f.raw("weights");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) {
        fail(f.at("weights") + "[" + std::to_string(i) + "]", "expected a number");
      }
      w.push_back(arr[i].get<double>());
    }
    return size_spec::Table{std::move(w)};
  }
  if (type == "power_law") {
    Fields f(j, path, {"type", "gamma", "x_min", "x_max"});
    return size_spec::TruncatedPowerLaw{need(f.number("gamma"), "gamma"),
                                        need(f.count("x_min"), "x_min"),
                                        need(f.count("x_max"), "x_max")};
  }
  if (type == "binomial") {
    Fields f(j, path, {"type", "trials", "p"});
    return size_spec::Binomial{need(f.count("trials"), "trials"),
                               need(f.number("p"), "p")};
  }
  fail(path + ".type", "unknown size distribution '" + type + "'");
}

ScenarioConfig parse_scenario(const json& doc) {
  Fields top(doc, "$", {"scenario"});
  if (!top.has("scenario")) fail("scenario", "required");
  const json& j = doc.at("scenario");
  Fields f(j, "scenario",
           {"name", "preset", "model", "replicates", "seed", "outputs",
            "tolerances", "k_range", "k_max", "min_bucket", "pair_cap",
            "pool_until", "example2"});

  ScenarioConfig c;
  if (auto p = f.text("preset")) {
    try {
      c = preset(*p);
    } catch (const ConfigError&) {
      fail("scenario.preset", "unknown preset '" + *p + "'");
    }
  } else if (!f.has("model")) {
    fail("scenario.model", "required unless a preset is given");
  }
  if (auto name = f.text("name")) c.name = *name;

  if (f.has("model")) {
    const bool from_preset = f.has("preset");
    Fields mf(f.raw("model"), "scenario.model", {"kind", "n", "m", "s", "size_dist"});
    auto take = [&](const char* key, count_t& target) {
      if (auto v = mf.count(key)) {
        target = *v;
      } else if (!from_preset) {
        fail(mf.at(key), "required");
      }
    };
    if (auto kind = mf.text("kind")) {
      try {
        c.kind = parse_graph_kind(*kind);
      } catch (const std::invalid_argument&) {
        fail(mf.at("kind"), "expected active or passive");
      }
    } else if (!from_preset) {
      fail(mf.at("kind"), "required");
    }
    take("n", c.n);
    take("m", c.m);
    if (auto s = mf.count("s")) c.s = *s;
    if (mf.has("size_dist")) {
      c.size = size_spec_from_json(mf.raw("size_dist"), mf.at("size_dist"));
    } else if (!from_preset) {
      fail(mf.at("size_dist"), "required");
    }
  }

  if (auto r = f.count("replicates")) c.replicates = *r;
  if (c.replicates < 1) fail("scenario.replicates", "must be >= 1");
  if (f.has("seed")) c.seed = Fields::as_count(f.raw("seed"), "scenario.seed");

  if (f.has("outputs")) {
    const auto& arr = f.raw("outputs");
    if (!arr.is_array()) fail("scenario.outputs", "expected an array");
    c.outputs.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "scenario.outputs[" + std::to_string(i) + "]";
      if (!arr[i].is_string()) fail(path, "expected a string");
      const Analysis a = parse_analysis(arr[i].get<std::string>(), path);
      if (!c.wants(a)) c.outputs.push_back(a);
    }
  }
  if (c.outputs.empty()) fail("scenario.outputs", "must list at least one analysis");

  if (f.has("tolerances")) {
    Fields t(f.raw("tolerances"), "scenario.tolerances",
             {"degree_tv", "alpha", "alpha_k"});
    if (auto v = t.number("degree_tv")) c.tolerances.degree_tv = *v;
    if (auto v = t.number("alpha")) c.tolerances.alpha = *v;
    if (auto v = t.number("alpha_k")) c.tolerances.alpha_k = *v;
  }
  if (!(c.tolerances.degree_tv > 0.0)) fail("scenario.tolerances.degree_tv", "must be > 0");
  if (!(c.tolerances.alpha > 0.0)) fail("scenario.tolerances.alpha", "must be > 0");
  if (!(c.tolerances.alpha_k > 0.0)) fail("scenario.tolerances.alpha_k", "must be > 0");

  if (f.has("k_range")) {
    const auto& arr = f.raw("k_range");
    if (!arr.is_array() || arr.size() != 2) {
      fail("scenario.k_range", "expected [k_lo, k_hi]");
    }
    c.k_lo = Fields::as_count(arr[0], "scenario.k_range[0]");
    c.k_hi = Fields::as_count(arr[1], "scenario.k_range[1]");
  }
  if (c.k_lo < 2 || c.k_hi < c.k_lo) {
    fail("scenario.k_range", "need 2 <= k_lo <= k_hi");
  }
  if (auto v = f.count("k_max")) c.k_max = static_cast<std::size_t>(*v);
  if (auto v = f.count("min_bucket")) c.min_bucket = *v;
  if (c.min_bucket < 1) fail("scenario.min_bucket", "must be >= 1");
  if (auto v = f.number("pair_cap")) c.pair_cap = *v;
  if (!(c.pair_cap > 0.0)) fail("scenario.pair_cap", "must be > 0");

  if (f.has("pool_until")) {
    Fields p(f.raw("pool_until"), "scenario.pool_until",
             {"k_lo", "k_hi", "min_count", "max_replicates"});
    auto need = [&](const char* key) {
      auto v = p.count(key);
      if (!v) fail(p.at(key), "required");
      return *v;
    };
    c.pool_until = PoolUntil{need("k_lo"), need("k_hi"), need("min_count"),
                             need("max_replicates")};
    if (c.pool_until->k_hi < c.pool_until->k_lo) {
      fail("scenario.pool_until.k_hi", "must be >= k_lo");
    }
  }
  if (c.pool_until && c.pool_until->max_replicates < c.replicates) {
    fail("scenario.pool_until.max_replicates", "must be >= replicates");
  }

  if (f.has("example2")) {
    Fields e(f.raw("example2"), "scenario.example2", {"m", "epsilon"});
    if (auto v = e.count("m")) c.example2_m = *v;
    if (auto v = e.number("epsilon")) c.example2_epsilon = *v;
  }

  try {
    (void)c.model();
  } catch (const std::invalid_argument& e) {
    fail("scenario.model", e.what());
  }
  if (c.wants(Analysis::example2)) {
    try {
      (void)example2_diagnostics(c.example2_m, c.example2_epsilon);
    } catch (const std::invalid_argument& e) {
      fail("scenario.example2", e.what());
    }
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["model"] = {{"kind", to_string(c.kind)},
                {"n", c.n},
                {"m", c.m},
                {"s", c.s},
                {"size_dist", size_spec_to_json(c.size)}};
  j["replicates"] = c.replicates;
  j["seed"] = opt(c.seed);
  ordered_json outs = ordered_json::array();
  for (Analysis a : c.outputs) outs.push_back(to_string(a));
  j["outputs"] = outs;
  j["tolerances"] = {{"degree_tv", c.tolerances.degree_tv},
                     {"alpha", c.tolerances.alpha},
                     {"alpha_k", c.tolerances.alpha_k}};
  j["k_range"] = {c.k_lo, c.k_hi};
  j["k_max"] = opt(c.k_max);
  j["min_bucket"] = c.min_bucket;
  j["pair_cap"] = c.pair_cap;
  if (c.pool_until) {
    j["pool_until"] = {{"k_lo", c.pool_until->k_lo},
                       {"k_hi", c.pool_until->k_hi},
                       {"min_count", c.pool_until->min_count},
                       {"max_replicates", c.pool_until->max_replicates}};
  } else {
    j["pool_until"] = nullptr;
  }
  j["example2"] = {{"m", c.example2_m}, {"epsilon", c.example2_epsilon}};
  return j;
}

ordered_json Report::full() const {
  ordered_json j = body;
  j["timing"] = {{"wall_clock_seconds", wall_clock_seconds}};
  return j;
}

Report run_scenario(const ScenarioConfig& cfg, unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const ModelParams params = cfg.model();
  const SizeDistribution& P = params.size_dist;
  const std::uint64_t seed = cfg.seed.value_or(0);
  const bool passive = params.kind == GraphKind::passive;
  const bool no_theory = passive && params.s >= 2;

  RunPlan plan;
  plan.clustering = cfg.wants(Analysis::clustering) || cfg.wants(Analysis::alpha_k);
  plan.graph = plan.clustering || cfg.wants(Analysis::degree) ||
               cfg.pool_until.has_value();
  plan.sizes = cfg.wants(Analysis::theorem1_stats);

  std::vector<ReplicateResult> results;
  count_t done = 0;
  count_t batch = cfg.replicates;
  for (;;) {
    run_batch(cfg, params, seed, plan, done, batch, jobs, results);
    done += batch;
    if (!cfg.pool_until) break;
    if (pool_satisfied(*cfg.pool_until, pooled_degree_counts(results))) break;
    if (done >= cfg.pool_until->max_replicates) break;
    batch = std::min(cfg.replicates, cfg.pool_until->max_replicates - done);
  }

  Report report;
  ordered_json& body = report.body;
  ordered_json echo = to_json(cfg);
  echo["seed"] = seed;
  body["scenario"] = echo;

  const EdgeProbability edge = active_edge_prob_asymptotic(P, params.m, params.s);
  body["metadata"] = {
      {"asymptotic_prediction", true},
      {"clamped_probability", !passive && edge.clamped},
      {"passive_s_ge_2_no_theory", no_theory},
      {"alpha_hat_excludes_degree_lt_2", true},
  };
  body["replicates_run"] = done;

  std::vector<ClusteringReport> clustering;
  ordered_json errors = ordered_json::array();
  for (count_t r = 0; r < results.size(); ++r) {
    if (results[r].error) {
      errors.push_back({{"replicate", r}, {"error", *results[r].error}});
      continue;
    }
    if (results[r].clustering) clustering.push_back(*results[r].clustering);
  }
  body["replicate_errors"] = errors;
  if (!errors.empty()) report.all_pass = false;

  auto record = [&](ordered_json& section, std::optional<bool> pass) {
    section["pass"] = opt(pass);
    if (pass && !*pass) report.all_pass = false;
  };

  ordered_json analyses = ordered_json::object();

  if (cfg.wants(Analysis::degree)) {
    ordered_json sec;
    const auto counts = pooled_degree_counts(results);
    count_t total = 0;
    for (count_t c : counts) total += c;
    if (total == 0) {
      sec["empirical"] = nullptr;
      record(sec, std::nullopt);
    } else {
      const DiscretePmf emp = DiscretePmf::from_counts(counts);
      std::optional<DiscretePmf> theory;
      if (!passive) {
        sec["theory_law"] = "mixed_poisson";
        theory = mixed_poisson_degree_pmf(P, params.n, params.m, params.s, cfg.k_max);
        const auto exact =
            exact_active_degree_pmf(P, params.n, params.m, params.s, cfg.k_max);
        sec["tv_exact_oracle"] = tv_distance(emp, exact);
        sec["tv_theory_vs_exact_oracle"] = tv_distance(*theory, exact);
      } else if (!no_theory) {
        sec["theory_law"] = "compound_poisson";
        const auto spec = passive_compound_spec(P, params.n, params.m);
        sec["lambda"] = spec.lambda;
        theory = compound_poisson_pmf(spec, cfg.k_max);
        const auto links = exact_passive_links_pmf(P, params.n, params.m, cfg.k_max);
        sec["tv_theory_vs_exact_links_oracle"] = tv_distance(*theory, links);
      } else {
        sec["theory_law"] = nullptr;
      }
      sec["vertices"] = total;
      sec["empirical_mean"] = emp.mean();
      sec["theory_mean"] = theory ? ordered_json(theory->mean()) : ordered_json(nullptr);
      sec["theory_tail_mass"] =
          theory ? ordered_json(theory->tail_mass()) : ordered_json(nullptr);
      std::optional<double> tv;
      if (theory) tv = tv_distance(emp, *theory);
      sec["tv_theory"] = opt(tv);
      sec["tolerance"] = cfg.tolerances.degree_tv;
      record(sec, tv ? std::optional<bool>(*tv < cfg.tolerances.degree_tv)
                     : std::nullopt);
      const std::size_t top =
          std::max(emp.k_max(), theory ? theory->k_max() : std::size_t{0});
      ordered_json table = ordered_json::array();
      for (std::size_t k = 0; k <= top; ++k) {
        DegreeRow row{k, emp[k], std::nullopt};
        if (theory) row.theory = (*theory)[k];
        report.degree_table.push_back(row);
        table.push_back({{"k", k},
                         {"empirical", row.empirical},
                         {"theory", opt(row.theory)}});
      }
      sec["table"] = table;
    }
    analyses["degree"] = sec;
  }

  std::optional<ClusteringReport> pooled;
  if (!clustering.empty()) pooled = pooled_estimates(clustering);

  if (cfg.wants(Analysis::clustering)) {
    ordered_json sec;
    std::optional<double> theory;
    if (!passive) {
      try {
        theory = alpha_active(P, params.m, params.s);
        sec["theory_beta_form"] =
            alpha_active_beta_form(P, params.n, params.m, params.s);
      } catch (const std::domain_error& e) {
        sec["theory_note"] = e.what();
      }
    } else if (!no_theory) {
      theory = alpha_passive_finite(P, params.n, params.m);
      sec["theory_limit"] =
          alpha_passive_limit(passive_compound_spec(P, params.n, params.m));
    }
    sec["theory"] = opt(theory);
    if (pooled) {
      sec["alpha_hat"] = opt(pooled->alpha_hat);
      sec["alpha_hat_se"] = opt(pooled->alpha_hat_se);
      sec["alpha_hat_hat"] = opt(pooled->alpha_hat_hat);
      sec["alpha_hat_hat_se"] = opt(pooled->alpha_hat_hat_se);
      sec["n3_total"] = pooled->n3_total;
      sec["n2_total"] = pooled->n2_total;
    }
    sec["tolerance"] = cfg.tolerances.alpha;
    record(sec, within(pooled ? pooled->alpha_hat_hat : std::nullopt, theory,
                       cfg.tolerances.alpha));
    analyses["clustering"] = sec;
  }

  if (cfg.wants(Analysis::alpha_k)) {
    ordered_json sec;
    std::optional<CompoundPoissonSpec> spec;
    if (passive && !no_theory) spec = passive_compound_spec(P, params.n, params.m);
    if (!passive) {
      const auto d = derive_params(params);
      sec["k_alpha_k_limit"] = d.mu1 * std::exp(-0.5 * d.log_beta_active);
    }
    ordered_json rows = ordered_json::array();
    std::map<double, double> emp_points, theory_points;
    std::optional<bool> pass;
    for (count_t k = cfg.k_lo; k <= cfg.k_hi; ++k) {
      AlphaKRow row{k, std::nullopt, std::nullopt, 0, std::nullopt};
      try {
        if (!passive) {
          row.theory = alpha_k_active(P, params.n, params.m, params.s, k);
        } else if (spec) {
          row.theory = alpha_k_passive(*spec, k);
        }
      } catch (const std::domain_error&) {
      }
      if (pooled) {
        auto it = pooled->buckets.find(k);
        if (it != pooled->buckets.end()) {
          row.bucket_count = it->second.vertices;
          if (row.bucket_count >= cfg.min_bucket) {
            row.empirical = it->second.value(k);
            row.se = it->second.se;
          }
        }
      }
      if (row.empirical) emp_points[static_cast<double>(k)] = *row.empirical;
      if (row.theory) theory_points[static_cast<double>(k)] = *row.theory;
      const auto ok_k = within(row.empirical, row.theory, cfg.tolerances.alpha_k);
      if (ok_k) pass = pass.value_or(true) && *ok_k;
      rows.push_back({{"k", k},
                      {"empirical", opt(row.empirical)},
                      {"theory", opt(row.theory)},
                      {"bucket_count", row.bucket_count},
                      {"se", opt(row.se)},
                      {"pass", opt(ok_k)}});
      report.alpha_k_table.push_back(row);
    }
    sec["rows"] = rows;
    sec["empirical_loglog_fit"] = fit_json(emp_points);
    sec["theory_loglog_fit"] = fit_json(theory_points);
    sec["tolerance"] = cfg.tolerances.alpha_k;
    record(sec, pass);
    analyses["alpha_k"] = sec;
  }

  if (cfg.wants(Analysis::regime)) {
    const auto rr = passive_regime_classify(params.n, params.m, P);
    analyses["regime"] = {{"case", to_string(rr.case_label)},
                          {"n_star", rr.n_star},
                          {"advice", rr.advice},
                          {"effective_n", opt(rr.effective_n)}};
  }

  if (cfg.wants(Analysis::theorem1_stats)) {
    const auto& sizes = results.front().sizes;
    const auto t = theorem1_statistics(sizes, params.m, params.s);
    analyses["theorem1_stats"] = {
        {"lambda_bar", t.lambda_bar},
        {"kappa1", t.kappa1},
        {"kappa2", t.kappa2_infinite ? ordered_json(nullptr) : ordered_json(t.kappa2)},
        {"kappa2_infinite", t.kappa2_infinite},
        {"edge_probability", edge.value},
        {"edge_probability_raw", edge.raw},
    };
  }

  if (cfg.wants(Analysis::example2)) {
    const auto e = example2_diagnostics(cfg.example2_m, cfg.example2_epsilon);
    ordered_json sec = {{"m", cfg.example2_m},
                        {"epsilon", cfg.example2_epsilon},
                        {"s", e.s},
                        {"x", e.x},
                        {"p_star", e.p_star},
                        {"p_prime", e.p_prime},
                        {"p_double_prime", e.p_double_prime},
                        {"ratio_prime", e.ratio_prime},
                        {"bound", e.bound},
                        {"double_prime_within_ten_percent",
                         opt(e.double_prime_within_ten_percent)}};
    record(sec, e.ratio_prime <= e.bound);
    analyses["example2"] = sec;
  }

  body["analyses"] = analyses;
  body["all_pass"] = report.all_pass;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_csv_tables(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out.precision(17);
    return out;
  };
  if (!report.degree_table.empty()) {
    auto out = open("degree.csv");
    out << "k,empirical,theory,abs_diff\n";
    for (const auto& r : report.degree_table) {
      out << r.k << ',' << r.empirical << ',';
      if (r.theory) out << *r.theory << ',' << std::abs(r.empirical - *r.theory);
      else out << ',';
      out << '\n';
    }
  }
  if (!report.alpha_k_table.empty()) {
    auto out = open("alpha_k.csv");
    out << "k,empirical,theory,bucket_count,se\n";
    for (const auto& r : report.alpha_k_table) {
      out << r.k << ',';
      if (r.empirical) out << *r.empirical;
      out << ',';
      if (r.theory) out << *r.theory;
      out << ',' << r.bucket_count << ',';
      if (r.se) out << *r.se;
      out << '\n';
    }
  }
}

Graph generate_graph(const ScenarioConfig& cfg) {
  const ModelParams params = cfg.model();
  RngStream rng(cfg.seed.value_or(0), 0);
  const Incidence inc = sample_incidence(params, rng);
  return params.kind == GraphKind::active
             ? build_active(inc, params.s, cfg.pair_cap)
             : build_passive(inc, params.s, cfg.pair_cap);
}

}  // namespace riglab
