#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "riglab/oracle.hpp"
#include "riglab/scenario.hpp"
#include "riglab/theory.hpp"

namespace riglab::cli {

using nlohmann::ordered_json;

namespace {

struct ModelOptions {
  count_t n = 0;
  count_t m = 0;
  count_t s = 1;
  std::string size;
  std::string kind = "active";
  std::optional<std::size_t> k_max;
  count_t k = 2;
};

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// "degenerate:X", "table:w0,w1,...", "power_law:GAMMA,XMIN,XMAX",
/// "binomial:TRIALS,P", or a JSON object as accepted in scenario files.
SizeSpec parse_size(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    return size_spec_from_json(nlohmann::json::parse(text), "--size");
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("--size: expected TYPE:ARGS, got '" + text + "'");
  }
  const std::string type = text.substr(0, colon);
  const auto args = split_numbers(text.substr(colon + 1));
  auto arity = [&](std::size_t k) {
    if (args.size() != k) {
      throw std::invalid_argument("--size " + type + ": expected " +
                                  std::to_string(k) + " values");
    }
  };
  if (type == "degenerate") {
    arity(1);
    return size_spec::Degenerate{static_cast<count_t>(args[0])};
  }
  if (type == "table") return size_spec::Table{args};
  if (type == "power_law") {
    arity(3);
    return size_spec::TruncatedPowerLaw{args[0], static_cast<count_t>(args[1]),
                                        static_cast<count_t>(args[2])};
  }
  if (type == "binomial") {
    arity(2);
    return size_spec::Binomial{static_cast<count_t>(args[0]), args[1]};
  }
  throw std::invalid_argument("--size: unknown type '" + type + "'");
}

SizeDistribution size_of(const ModelOptions& o) {
  return make_size_dist(parse_size(o.size), o.m);
}

ordered_json pmf_json(const DiscretePmf& p) {
  return {{"probs", std::vector<double>(p.probs().begin(), p.probs().end())},
          {"tail_mass", p.tail_mass()},
          {"mean", p.mean()}};
}

int emit(const ordered_json& j) {
  std::cout << j.dump(2) << '\n';
  return kExitPass;
}

std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("RIGLAB_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0') throw ConfigError("RIGLAB_SEED: expected an unsigned integer");
  return v;
}

/// --seed, then the config file, then RIGLAB_SEED, then 0.
void resolve_seed(ScenarioConfig& cfg, const std::optional<std::uint64_t>& flag) {
  if (flag) {
    cfg.seed = flag;
  } else if (!cfg.seed) {
    cfg.seed = env_seed().value_or(0);
  }
}

using Dispatch = std::vector<std::pair<CLI::App*, std::function<int()>>>;

CLI::App* model_command(CLI::App& parent, const std::string& name,
                        const std::string& help, ModelOptions& o, bool needs_n,
                        bool needs_s) {
  auto* sub = parent.add_subcommand(name, help);
  if (needs_n) sub->add_option("--n", o.n, "number of vertices (sets)")->required();
  sub->add_option("--m", o.m, "number of attributes")->required();
  if (needs_s) sub->add_option("--s", o.s, "intersection threshold");
  sub->add_option("--size", o.size,
                  "size law: degenerate:X | table:w0,w1,.. | "
                  "power_law:G,XMIN,XMAX | binomial:T,P")
      ->required();
  return sub;
}

void add_run(CLI::App& app, Dispatch& dispatch) {
  struct Opts {
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 0;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("run", "run a scenario and compare with theory");
  sub->add_option("--config", o->config, "scenario JSON file")->required();
  sub->add_option("--seed", o->seed, "64-bit seed (overrides the config)");
  sub->add_option("--jobs", o->jobs, "worker threads (default: hardware)");
  sub->add_option("--out", o->out, "directory for report.json and CSV tables");
  dispatch.emplace_back(sub, [o] {
    ScenarioConfig cfg = load_scenario(o->config);
    resolve_seed(cfg, o->seed);
    const Report report = run_scenario(cfg, o->jobs);
    const std::string text = report.full().dump(2);
    if (!o->out.empty()) {
      std::filesystem::create_directories(o->out);
      std::ofstream(std::filesystem::path(o->out) / "report.json") << text << '\n';
      write_csv_tables(report, o->out);
    }
    std::cout << text << '\n';
    return report.all_pass ? kExitPass : kExitComparisonFailed;
  });
}

void add_gen(CLI::App& app, Dispatch& dispatch) {
  struct Opts {
    std::string config;
    std::string graph;
    std::optional<std::uint64_t> seed;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("gen", "sample one graph and write its edge list");
  sub->add_option("--config", o->config, "scenario JSON file")->required();
  sub->add_option("--emit-graph", o->graph, "output edge-list path")->required();
  sub->add_option("--seed", o->seed, "64-bit seed (overrides the config)");
  dispatch.emplace_back(sub, [o] {
    ScenarioConfig cfg = load_scenario(o->config);
    resolve_seed(cfg, o->seed);
    const Graph g = generate_graph(cfg);
    std::ofstream out(o->graph);
    if (!out) throw std::runtime_error("cannot write " + o->graph);
    write_edge_list(out, g, {cfg.kind, cfg.n, cfg.m, cfg.s, *cfg.seed});
    std::cerr << "wrote " << g.vertex_count() << " vertices, " << g.edge_count()
              << " edges to " << o->graph << '\n';
    return kExitPass;
  });
}

void add_theory(CLI::App& app, Dispatch& dispatch) {
  auto* theory = app.add_subcommand("theory", "asymptotic laws in closed form");
  theory->require_subcommand(1);
  auto o = std::make_shared<ModelOptions>();

  auto* sub = model_command(*theory, "edge-prob", "asymptotic active edge probability",
                            *o, false, true);
  dispatch.emplace_back(sub, [o] {
    const auto e = active_edge_prob_asymptotic(size_of(*o), o->m, o->s);
    return emit({{"value", e.value}, {"raw", e.raw}, {"clamped", e.clamped},
                 {"asymptotic_prediction", true}});
  });

  sub = model_command(*theory, "degree-pmf", "mixed Poisson active degree law", *o,
                      true, true);
  sub->add_option("--k-max", o->k_max, "truncate the pmf at this degree");
  dispatch.emplace_back(sub, [o] {
    const auto p = size_of(*o);
    auto j = pmf_json(mixed_poisson_degree_pmf(p, o->n, o->m, o->s, o->k_max));
    const auto dm = degree_moments_from_z(p, o->n, o->m, o->s);
    j["ed"] = dm.ed;
    j["ed2"] = dm.ed2;
    return emit(j);
  });

  sub = model_command(*theory, "alpha", "active clustering coefficient", *o, true, true);
  dispatch.emplace_back(sub, [o] {
    const auto p = size_of(*o);
    const ModelParams mp{o->n, o->m, o->s, p, GraphKind::active};
    const auto d = derive_params(mp);
    const auto dm = degree_moments_from_z(p, o->n, o->m, o->s);
    ordered_json j{{"alpha", alpha_active(p, o->m, o->s)},
                   {"alpha_beta_form", alpha_active_beta_form(p, o->n, o->m, o->s)}};
    j["alpha_degree_moment_form"] =
        dm.ed2 > dm.ed && dm.ed > 0.0
            ? ordered_json(alpha_active_from_degree_moments(d.beta_active, dm.ed, dm.ed2))
            : ordered_json(nullptr);
    j["beta"] = d.beta_active;
    return emit(j);
  });

  sub = model_command(*theory, "alpha-k", "active degree-conditional clustering", *o,
                      true, true);
  sub->add_option("--k", o->k, "degree (>= 2)")->required();
  dispatch.emplace_back(sub, [o] {
    return emit({{"k", o->k},
                 {"alpha_k", alpha_k_active(size_of(*o), o->n, o->m, o->s, o->k)}});
  });

  sub = model_command(*theory, "passive-pmf", "compound Poisson passive degree law", *o,
                      true, false);
  sub->add_option("--k-max", o->k_max, "truncate the pmf at this degree");
  dispatch.emplace_back(sub, [o] {
    const auto spec = passive_compound_spec(size_of(*o), o->n, o->m);
    auto j = pmf_json(compound_poisson_pmf(spec, o->k_max));
    j["lambda"] = spec.lambda;
    const auto jp = spec.jump_pmf.probs();
    j["jump_pmf"] = std::vector<double>(jp.begin(), jp.end());
    return emit(j);
  });

  sub = model_command(*theory, "passive-alpha", "passive clustering coefficient", *o,
                      true, false);
  dispatch.emplace_back(sub, [o] {
    const auto p = size_of(*o);
    return emit({{"alpha_finite", alpha_passive_finite(p, o->n, o->m)},
                 {"alpha_limit",
                  alpha_passive_limit(passive_compound_spec(p, o->n, o->m))}});
  });

  sub = model_command(*theory, "passive-alpha-k",
                      "passive degree-conditional clustering", *o, true, false);
  sub->add_option("--k", o->k, "degree (>= 2)")->required();
  dispatch.emplace_back(sub, [o] {
    const auto spec = passive_compound_spec(size_of(*o), o->n, o->m);
    return emit({{"k", o->k}, {"alpha_k", alpha_k_passive(spec, o->k)}});
  });

  sub = model_command(*theory, "regime", "classify a passive parameter regime", *o,
                      true, false);
  dispatch.emplace_back(sub, [o] {
    const auto r = passive_regime_classify(o->n, o->m, size_of(*o));
    ordered_json j{{"case", to_string(r.case_label)},
                   {"n_star", r.n_star},
                   {"advice", r.advice}};
    j["effective_n"] = r.effective_n ? ordered_json(*r.effective_n) : ordered_json(nullptr);
    return emit(j);
  });
}

void add_oracle(CLI::App& app, Dispatch& dispatch) {
  auto* oracle = app.add_subcommand("oracle", "exact finite-size ground truth");
  oracle->require_subcommand(1);
  auto o = std::make_shared<ModelOptions>();

  struct PairOpts {
    count_t m = 0, d1 = 0, d2 = 0, s = 1;
  };
  auto q = std::make_shared<PairOpts>();
  auto* sub = oracle->add_subcommand("intersection",
                                     "law of |D1 ∩ D2| for uniform subsets");
  sub->add_option("--m", q->m)->required();
  sub->add_option("--d1", q->d1)->required();
  sub->add_option("--d2", q->d2)->required();
  sub->add_option("--s", q->s, "threshold for the tail and bounds");
  dispatch.emplace_back(sub, [q] {
    auto j = pmf_json(intersection_pmf(q->m, q->d1, q->d2));
    const auto b = sx1_bounds(q->m, q->d1, q->d2, q->s);
    j["tail"] = intersection_tail(q->m, q->d1, q->d2, q->s);
    j["lower_bound"] = b.lower;
    j["upper_bound"] = b.upper;
    return emit(j);
  });

  sub = model_command(*oracle, "exact-degree", "exact active degree law", *o, true,
                      true);
  sub->add_option("--k-max", o->k_max, "truncate the pmf at this degree");
  dispatch.emplace_back(sub, [o] {
    return emit(pmf_json(
        exact_active_degree_pmf(size_of(*o), o->n, o->m, o->s, o->k_max)));
  });

  sub = model_command(*oracle, "exact-links", "exact passive link-count law", *o, true,
                      false);
  sub->add_option("--k-max", o->k_max, "truncate the pmf at this count");
  dispatch.emplace_back(sub, [o] {
    return emit(pmf_json(exact_passive_links_pmf(size_of(*o), o->n, o->m, o->k_max)));
  });

  sub = model_command(*oracle, "brute-force", "degree law by full enumeration", *o,
                      true, true);
  sub->add_option("--kind", o->kind, "active or passive");
  dispatch.emplace_back(sub, [o] {
    const ModelParams mp{o->n, o->m, o->s, size_of(*o), parse_graph_kind(o->kind)};
    return emit(pmf_json(brute_force_degree_pmf(mp)));
  });

  struct Ex2Opts {
    count_t m = 40;
    double epsilon = 0.1;
  };
  auto e = std::make_shared<Ex2Opts>();
  sub = oracle->add_subcommand("example2", "growing-threshold diagnostics");
  sub->add_option("--m", e->m, "number of attributes");
  sub->add_option("--epsilon", e->epsilon, "x = (1/2 + epsilon) m");
  dispatch.emplace_back(sub, [e] {
    const auto d = example2_diagnostics(e->m, e->epsilon);
    ordered_json j{{"s", d.s},
                   {"x", d.x},
                   {"p_star", d.p_star},
                   {"p_prime", d.p_prime},
                   {"p_double_prime", d.p_double_prime},
                   {"ratio_prime", d.ratio_prime},
                   {"bound", d.bound}};
    j["double_prime_within_ten_percent"] =
        d.double_prime_within_ten_percent
            ? ordered_json(*d.double_prime_within_ten_percent)
            : ordered_json(nullptr);
    return emit(j);
  });
}

}  // namespace

Commands register_commands(CLI::App& app) {
  auto dispatch = std::make_shared<Dispatch>();
  add_run(app, *dispatch);
  add_gen(app, *dispatch);
  add_theory(app, *dispatch);
  add_oracle(app, *dispatch);
  return {[dispatch]() -> int {
    for (const auto& [sub, fn] : *dispatch) {
      if (sub->parsed()) return fn();
    }
    return kExitUsage;
  }};
}

}  // namespace riglab::cli
