// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "riglab/oracle.hpp"
#include "riglab/rng.hpp"
#include "riglab/scenario.hpp"
#include "riglab/stats.hpp"
#include "riglab/theory.hpp"

namespace {

using namespace riglab;

constexpr std::uint64_t kSeed = 20260415;

// Tolerances and limits.
constexpr double kOracleAgreement = 1e-12;   // 1
constexpr double kRuntime1 = 10.0;
constexpr double kRuntime2 = 30.0;           // 2
constexpr double kDegreeTv = 0.01;           // 3, 7
constexpr double kRuntime3 = 20.0;
constexpr double kAlphaBand = 0.02;          // 4, 9
constexpr double kRuntime4 = 120.0;
constexpr double kIdentityTol = 1e-10;       // 5
constexpr double kRuntime5 = 1.0;
constexpr double kSlopeLo = -1.2;            // 6
constexpr double kSlopeHi = -0.8;
constexpr double kScalingBand = 0.25;
constexpr double kRuntime6 = 600.0;
constexpr double kRuntime7 = 30.0;
constexpr double kAlphaKBand = 0.05;         // 8
constexpr double kRuntime8 = 300.0;
constexpr double kAlphaFormsGap = 0.005;     // 9
constexpr double kRuntime9 = 120.0;
constexpr double kRuntime10 = 1.0;           // 10
constexpr double kPanjerMcTv = 0.005;        // 11
constexpr std::size_t kMcDraws = 1000000;
constexpr double kRuntime11 = 30.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs_diff(const DiscretePmf& a, const DiscretePmf& b) {
  double worst = std::abs(a.tail_mass() - b.tail_mass());
  for (std::size_t k = 0; k <= std::max(a.k_max(), b.k_max()); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

DiscretePmf poisson_reference(double mean) {
  std::vector<double> probs;
  double total = 0.0;
  for (count_t k = 0; total < 1.0 - 1e-15 && k < 1000; ++k) {
    probs.push_back(poisson_pmf(k, mean));
    total += probs.back();
  }
  return DiscretePmf::with_residual_tail(std::move(probs));
}

ScenarioConfig scenario(GraphKind kind, count_t n, count_t m, count_t s, SizeSpec size,
                        std::vector<Analysis> outputs, count_t replicates) {
  ScenarioConfig c;
  c.name = "acceptance";
  c.kind = kind;
  c.n = n;
  c.m = m;
  c.s = s;
  c.size = size;
  c.outputs = std::move(outputs);
  c.replicates = replicates;
  c.seed = kSeed;
  return c;
}

double pooled_bucket(const Report& r, count_t k) {
  for (const auto& row : r.alpha_k_table) {
    if (row.k == k && row.empirical) return *row.empirical;
  }
  return std::nan("");
}

count_t bucket_count(const Report& r, count_t k) {
  for (const auto& row : r.alpha_k_table) {
    if (row.k == k) return row.bucket_count;
  }
  return 0;
}

Outcome criterion1() {
  std::vector<std::pair<std::string, std::function<SizeDistribution(count_t)>>> laws{
      {"delta1", [](count_t m) { return make_size_dist(size_spec::Degenerate{1}, m); }},
      {"delta2", [](count_t m) { return make_size_dist(size_spec::Degenerate{2}, m); }},
      {"two-point", [](count_t m) { return SizeDistribution(m, {{1, 0.4}, {2, 0.6}}); }},
  };
  double worst = 0.0;
  int cases = 0;
  for (count_t m = 1; m <= 5; ++m)
    for (count_t n = 1; n <= 3; ++n)
      for (count_t s = 1; s <= std::min<count_t>(2, m); ++s)
        for (const auto& [name, law] : laws) {
          if (name != "delta1" && m < 2) continue;
          const auto p = law(m);
          const auto brute = brute_force_degree_pmf({n, m, s, p, GraphKind::active});
          const auto exact = exact_active_degree_pmf(p, n, m, s);
          worst = std::max(worst, max_abs_diff(brute, exact));
          ++cases;
        }
  return {worst <= kOracleAgreement,
          std::to_string(cases) + " cases, max |brute - exact| = " + fmt(worst) +
              " (<= 1e-12)"};
}

Outcome criterion2() {
  long checked = 0, violations = 0;
  for (count_t m = 1; m <= 25; ++m)
    for (count_t d1 = 0; d1 <= m; ++d1)
      for (count_t d2 = 0; d2 <= m; ++d2)
        for (count_t s = 1; s <= m; ++s) {
          const auto b = sx1_bounds(m, d1, d2, s);
          const double t = intersection_tail(m, d1, d2, s);
          ++checked;
          if (!(b.lower <= t && t <= b.upper)) ++violations;
        }
  return {violations == 0, std::to_string(checked) + " (m,d1,d2,s) checked, " +
                               std::to_string(violations) + " violations"};
}

Outcome criterion3() {
  const auto cfg = scenario(GraphKind::active, 100000, 100000, 1,
                            size_spec::Degenerate{2}, {Analysis::degree}, 1);
  const auto report = run_scenario(cfg, 0);
  std::vector<double> emp_probs;
  for (const auto& row : report.degree_table) emp_probs.push_back(row.empirical);
  const DiscretePmf emp(emp_probs);
  const auto poisson4 = poisson_reference(4.0);
  const double tv = tv_distance(emp, poisson4);
  const auto p = make_size_dist(size_spec::Degenerate{2}, 10000);
  const double tv_exact =
      tv_distance(exact_active_degree_pmf(p, 10000, 10000, 1), poisson4);
  return {tv < kDegreeTv && tv_exact < kDegreeTv,
          "TV(empirical, Poisson(4)) = " + fmt(tv) + ", TV(exact n=m=1e4, Poisson(4)) = " +
              fmt(tv_exact) + " (< 0.01)"};
}

Outcome criterion4() {
  const auto cfg = scenario(GraphKind::active, 25000, 1000, 2, size_spec::Degenerate{5},
                            {Analysis::clustering}, 50);
  const auto report = run_scenario(cfg, 0);
  const auto& c = report.body["analyses"]["clustering"];
  const double pooled = c["alpha_hat_hat"].get<double>();
  const double target = 1.0 / 10.0;
  return {std::abs(pooled - target) <= kAlphaBand,
          "pooled alpha_hat_hat = " + fmt(pooled) + " +- " +
              fmt(c["alpha_hat_hat_se"].get<double>()) + " vs 0.1 (band 0.02)"};
}

Outcome criterion5() {
  RngStream rng(kSeed, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const count_t m = 20 + rng.below(100000);
    const count_t n = 10 + rng.below(1000000);
    const count_t s = 1 + rng.below(3);
    const count_t top = s + rng.below(std::min<count_t>(40, m - s));
    std::vector<SizeDistribution::Atom> atoms;
    double total = 0.0;
    for (count_t x = 0; x <= top; ++x) {
      if (x == top || rng.uniform01() < 0.4) {
        atoms.push_back({x, 0.05 + rng.uniform01()});
        total += atoms.back().weight;
      }
    }
    for (auto& a : atoms) a.weight /= total;
    const SizeDistribution p(m, atoms);
    const auto d = derive_params({n, m, s, p});
    const auto dm = degree_moments_from_z(p, n, m, s);
    const double a = alpha_active(p, m, s);
    const double b = alpha_active_beta_form(p, n, m, s);
    const double c = alpha_active_from_degree_moments(d.beta_active, dm.ed, dm.ed2);
    worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
  }
  return {worst <= kIdentityTol,
          "100 random P, max pairwise |difference| = " + fmt(worst) + " (<= 1e-10)"};
}

Outcome criterion6() {
  ScenarioConfig cfg = preset("example3");
  cfg.seed = kSeed;
  const auto report = run_scenario(cfg, 0);
  const auto& ak = report.body["analyses"]["alpha_k"];
  const double limit = ak["k_alpha_k_limit"].get<double>();
  bool buckets_full = true;
  std::map<double, double> points;
  for (count_t k = 4; k <= 20; ++k) {
    if (bucket_count(report, k) < 500) buckets_full = false;
    const double v = pooled_bucket(report, k);
    if (!std::isnan(v)) points[static_cast<double>(k)] = v;
  }
  const auto fit = loglog_slope(points);
  bool scaling_ok = true;
  double worst_ratio = 1.0;
  for (count_t k = 8; k <= 20; ++k) {
    const double ratio = pooled_bucket(report, k) * static_cast<double>(k) / limit;
    if (std::abs(ratio - 1.0) > std::abs(worst_ratio - 1.0)) worst_ratio = ratio;
    if (!(std::abs(ratio - 1.0) <= kScalingBand)) scaling_ok = false;
  }
  const bool slope_ok = fit.slope >= kSlopeLo && fit.slope <= kSlopeHi;
  const double theory_slope = ak["theory_loglog_fit"]["slope"].get<double>();
  return {buckets_full && slope_ok && scaling_ok,
          "replicates " + report.body["replicates_run"].dump() + ", slope = " +
              fmt(fit.slope) + " (need [-1.2, -0.8]; exact finite-k theory slope " +
              fmt(theory_slope) + "), worst k*alpha_k/limit over k in [8,20] = " +
              fmt(worst_ratio) + " (need within 25%), buckets >= 500: " +
              (buckets_full ? "yes" : "no")};
}

Report passive_quads() {
  ScenarioConfig cfg = preset("example5");
  cfg.seed = kSeed;
  return run_scenario(cfg, 0);
}

Outcome criterion7() {
  const auto report = passive_quads();
  const CompoundPoissonSpec spec{4.0, DiscretePmf::point_mass(3)};
  const auto panjer = compound_poisson_pmf(spec);
  std::vector<double> emp_probs;
  for (const auto& row : report.degree_table) emp_probs.push_back(row.empirical);
  // The report pools the replicates needed for the clustering buckets; the
  // criterion is stated for a single graph, so take replicate 0 directly.
  auto cfg = preset("example5");
  cfg.seed = kSeed;
  const auto single = degree_histogram(generate_graph(cfg));
  const double tv = tv_distance(single, panjer);
  const double tv_pooled = tv_distance(DiscretePmf(emp_probs), panjer);
  const auto links = exact_passive_links_pmf(
      make_size_dist(size_spec::Degenerate{4}, 10000), 10000, 10000);
  const double tv_links = tv_distance(links, panjer);
  return {tv < kDegreeTv && tv_links < kDegreeTv,
          "TV(one graph, Panjer) = " + fmt(tv) + " (pooled " + fmt(tv_pooled) +
              "), TV(exact links n=m=1e4, Panjer) = " + fmt(tv_links) + " (< 0.01)"};
}

Outcome criterion8() {
  const auto report = passive_quads();
  const double a6 = pooled_bucket(report, 6);
  const double a9 = pooled_bucket(report, 9);
  const bool full = bucket_count(report, 6) >= 300;
  return {full && std::abs(a6 - 0.4) <= kAlphaKBand && std::abs(a9 - 0.25) <= kAlphaKBand,
          "alpha*[6] = " + fmt(a6) + " (0.4 +- 0.05, bucket " +
              std::to_string(bucket_count(report, 6)) + " >= 300), alpha*[9] = " +
              fmt(a9) + " (0.25 +- 0.05)"};
}

Outcome criterion9() {
  const auto cfg = scenario(GraphKind::passive, 100000, 100000, 1,
                            size_spec::Degenerate{3}, {Analysis::clustering}, 20);
  const auto report = run_scenario(cfg, 0);
  const auto& c = report.body["analyses"]["clustering"];
  const double pooled = c["alpha_hat_hat"].get<double>();
  const auto p = make_size_dist(size_spec::Degenerate{3}, 100000);
  const double finite = alpha_passive_finite(p, 100000, 100000);
  const double limit = alpha_passive_limit(passive_compound_spec(p, 100000, 100000));
  return {std::abs(pooled - finite) <= kAlphaBand &&
              std::abs(finite - limit) < kAlphaFormsGap,
          "pooled alpha_hat_hat* = " + fmt(pooled) + " vs finite " + fmt(finite) +
              " (band 0.02); |finite - limit| = " + fmt(std::abs(finite - limit)) +
              " (< 0.005)"};
}

Outcome criterion10() {
  bool ok = true;
  double prev = 2.0;
  std::string values;
  for (count_t m : {20, 40, 60, 80}) {
    const auto d = example2_diagnostics(m, 0.1);
    ok = ok && d.ratio_prime < prev && d.ratio_prime <= d.bound;
    prev = d.ratio_prime;
    values += " m=" + std::to_string(m) + ":" + fmt(d.ratio_prime) + "<=" + fmt(d.bound);
  }
  const double at40 = example2_diagnostics(40, 0.1).ratio_prime;
  ok = ok && std::abs(at40 - 43680.0 / 116280.0) < 1e-12;
  return {ok, "strictly decreasing and bounded:" + values};
}

DiscretePmf monte_carlo_compound(const CompoundPoissonSpec& spec, std::size_t draws,
                                 std::uint64_t stream) {
  RngStream rng(kSeed, stream);
  std::vector<double> jump_cdf;
  double acc = 0.0;
  for (double p : spec.jump_pmf.probs()) jump_cdf.push_back(acc += p);
  std::vector<double> count_cdf;
  acc = 0.0;
  for (count_t k = 0; acc < 1.0 - 1e-16 && k < 10000; ++k) {
    count_cdf.push_back(acc += poisson_pmf(k, spec.lambda));
  }
  auto invert = [&](const std::vector<double>& cdf) {
    const double u = rng.uniform01() * cdf.back();
    return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                    cdf.begin());
  };
  std::vector<count_t> hist;
  for (std::size_t i = 0; i < draws; ++i) {
    const std::size_t count = invert(count_cdf);
    std::size_t total = 0;
    for (std::size_t j = 0; j < count; ++j) total += invert(jump_cdf);
    if (total >= hist.size()) hist.resize(total + 1, 0);
    ++hist[total];
  }
  return DiscretePmf::from_counts(hist);
}

Outcome criterion11() {
  std::vector<double> geometric;
  double total = 0.0;
  for (int j = 0; j <= 40; ++j) total += std::pow(0.5, j + 1);
  for (int j = 0; j <= 40; ++j) geometric.push_back(std::pow(0.5, j + 1) / total);
  const std::vector<std::pair<std::string, CompoundPoissonSpec>> specs{
      {"delta3 jumps", {4.0, DiscretePmf::point_mass(3)}},
      {"geometric-like jumps", {2.0, DiscretePmf(geometric)}},
      {"two-point jumps", {1.5, DiscretePmf({0.0, 0.5, 0.0, 0.0, 0.5})}},
  };
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 100;
  for (const auto& [name, spec] : specs) {
    const double tv =
        tv_distance(compound_poisson_pmf(spec), monte_carlo_compound(spec, kMcDraws, ++stream));
    ok = ok && tv < kPanjerMcTv;
    detail += name + " TV=" + fmt(tv) + "; ";
  }
  return {ok, detail + "(< 0.005, 1e6 draws each)"};
}

Outcome criterion12() {
  auto passive = preset("example5");
  passive.seed = kSeed;
  passive.pool_until.reset();
  passive.replicates = 3;
  passive.n = passive.m = 20000;
  auto active = scenario(GraphKind::active, 20000, 20000, 1,
                         size_spec::TruncatedPowerLaw{3.0, 1, 50},
                         {Analysis::degree, Analysis::clustering, Analysis::alpha_k}, 4);
  bool ok = true;
  for (const auto& cfg : {passive, active}) {
    const std::string base = run_scenario(cfg, 1).body_text();
    for (unsigned jobs : {1u, 2u, 4u}) ok = ok && run_scenario(cfg, jobs).body_text() == base;
  }
  return {ok, "report bodies byte-identical across reruns with jobs in {1, 2, 4}"};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
  double runtime_limit;  // seconds; 0 for none
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"oracle exactness", criterion1, kRuntime1},
      {"intersection sandwich", criterion2, kRuntime2},
      {"active degree law", criterion3, kRuntime3},
      {"active clustering", criterion4, kRuntime4},
      {"three-form alpha identity", criterion5, kRuntime5},
      {"k^-1 clustering scaling", criterion6, kRuntime6},
      {"passive degree law", criterion7, kRuntime7},
      {"passive degree-conditional clustering", criterion8, kRuntime8},
      {"passive clustering", criterion9, kRuntime9},
      {"growing-threshold diagnostics", criterion10, kRuntime10},
      {"compound Poisson engine", criterion11, kRuntime11},
      {"determinism", criterion12, 0.0},
  };
  return all;
}

bool run_one(std::size_t index) {
  const auto& c = criteria()[index - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = c.run();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = c.runtime_limit == 0.0 || secs < c.runtime_limit;
  const bool pass = out.pass && in_time;
  std::printf("criterion %2zu %s  %s: %s; runtime %.2fs", index, pass ? "PASS" : "FAIL",
              c.title, out.detail.c_str(), secs);
  if (c.runtime_limit > 0.0) std::printf(" (< %.0fs)", c.runtime_limit);
  std::printf("\n");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::strtoul(argv[++i], nullptr, 10));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 1;
    }
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= criteria().size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t i : selected) {
    if (i < 1 || i > criteria().size()) {
      std::fprintf(stderr, "no criterion %zu\n", i);
      return 1;
    }
    all = run_one(i) && all;
  }
  return all ? 0 : 1;
}
