#include "riglab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riglab {

namespace {

constexpr double kPmfTolerance = 1e-10;
constexpr double kSizeTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<SizeDistribution::Atom> normalized(
    std::vector<SizeDistribution::Atom> atoms) {
  CompensatedSum total;
  for (const auto& a : atoms) total += a.weight;
  const double sum = total.value();
  if (!(sum > 0.0)) {
    throw std::invalid_argument("size distribution has no mass");
  }
  for (auto& a : atoms) a.weight /= sum;
  return atoms;
}

}  // namespace

DiscretePmf::DiscretePmf() : probs_{1.0} {}

DiscretePmf::DiscretePmf(std::vector<double> probs, double tail_mass)
    : probs_(std::move(probs)), tail_mass_(tail_mass) {
  if (probs_.empty()) probs_.push_back(0.0);
  if (!(tail_mass_ >= 0.0)) {
    throw std::invalid_argument("DiscretePmf: negative tail mass");
  }
  CompensatedSum total;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("DiscretePmf: negative mass");
    total += p;
  }
  total += tail_mass_;
  if (std::abs(total.value() - 1.0) > kPmfTolerance) {
    throw std::invalid_argument("DiscretePmf: total mass is not 1");
  }
}

DiscretePmf DiscretePmf::point_mass(std::size_t k) {
  std::vector<double> probs(k + 1, 0.0);
  probs[k] = 1.0;
  return DiscretePmf(std::move(probs));
}

DiscretePmf DiscretePmf::from_counts(std::span<const count_t> counts) {
  count_t total = 0;
  for (count_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("from_counts: empty histogram");
  std::vector<double> probs(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    probs[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
  return DiscretePmf(std::move(probs));
}

DiscretePmf DiscretePmf::with_residual_tail(std::vector<double> probs) {
  CompensatedSum total;
  for (double& p : probs) {
    p = std::max(p, 0.0);
    total += p;
  }
  return DiscretePmf(std::move(probs), std::max(0.0, 1.0 - total.value()));
}

double DiscretePmf::mean() const { return factorial_moment(1); }

double DiscretePmf::factorial_moment(unsigned order) const {
  CompensatedSum sum;
  for (std::size_t k = order; k < probs_.size(); ++k) {
    sum += probs_[k] * falling_factorial_real(static_cast<double>(k), order);
  }
  return sum.value();
}

double DiscretePmf::raw_moment(unsigned order) const {
  CompensatedSum sum;
  for (std::size_t k = 1; k < probs_.size(); ++k) {
    sum += probs_[k] * std::pow(static_cast<double>(k), order);
  }
  return sum.value();
}

SizeDistribution::SizeDistribution(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("empty size distribution");
  support_max_ = weights.size() - 1;
  for (std::size_t x = 0; x < weights.size(); ++x) {
    if (!(weights[x] >= 0.0)) {
      throw std::invalid_argument("size distribution weight is negative");
    }
    if (weights[x] > 0.0) atoms_.push_back({x, weights[x]});
  }
  SizeDistribution checked(support_max_, std::move(atoms_));
  atoms_ = std::move(checked.atoms_);
}

SizeDistribution::SizeDistribution(count_t support_max, std::vector<Atom> atoms)
    : support_max_(support_max) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.size < b.size; });
  CompensatedSum total;
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0)) {
      throw std::invalid_argument("size distribution weight is negative");
    }
    if (a.weight == 0.0) continue;
    if (a.size > support_max_) {
      throw std::invalid_argument("size distribution support exceeds m");
    }
    if (!atoms_.empty() && atoms_.back().size == a.size) {
      throw std::invalid_argument("size distribution has duplicate atoms");
    }
    atoms_.push_back(a);
    total += a.weight;
  }
  if (atoms_.empty() || std::abs(total.value() - 1.0) > kSizeTolerance) {
    throw std::invalid_argument("size distribution does not sum to 1");
  }
}

double SizeDistribution::weight(count_t x) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), x,
      [](const Atom& a, count_t value) { return a.size < value; });
  return (it != atoms_.end() && it->size == x) ? it->weight : 0.0;
}

double SizeDistribution::mass_at_least(count_t x) const {
  CompensatedSum sum;
  for (const auto& a : atoms_) {
    if (a.size >= x) sum += a.weight;
  }
  return sum.value();
}

double SizeDistribution::mean() const {
  CompensatedSum sum;
  for (const auto& a : atoms_) sum += a.weight * static_cast<double>(a.size);
  return sum.value();
}

DiscretePmf SizeDistribution::to_pmf() const {
  std::vector<double> probs(largest_size() + 1, 0.0);
  for (const auto& a : atoms_) probs[a.size] = a.weight;
  return DiscretePmf::with_residual_tail(std::move(probs));
}

SizeDistribution make_size_dist(const SizeSpec& spec, count_t m) {
  using Atom = SizeDistribution::Atom;
  return std::visit(
      Overloaded{
          [m](const size_spec::Degenerate& d) {
            if (d.x > m) {
              throw std::invalid_argument("degenerate size exceeds m");
            }
            return SizeDistribution(m, {{d.x, 1.0}});
          },
          [m](const size_spec::Table& t) {
            std::vector<Atom> atoms;
            double total = 0.0;
            for (std::size_t x = 0; x < t.weights.size(); ++x) {
              if (!(t.weights[x] >= 0.0)) {
                throw std::invalid_argument("table weight is negative");
              }
              if (t.weights[x] == 0.0) continue;
              if (x > m) {
                throw std::invalid_argument("table support exceeds m");
              }
              atoms.push_back({x, t.weights[x]});
              total += t.weights[x];
            }
            if (std::abs(total - 1.0) > 1e-9) {
              throw std::invalid_argument("table weights must sum to 1");
            }
            return SizeDistribution(m, normalized(std::move(atoms)));
          },
          [m](const size_spec::TruncatedPowerLaw& pl) {
            if (!(pl.gamma > 1.0)) {
              throw std::invalid_argument("power law needs gamma > 1");
            }
            if (pl.x_min < 1 || pl.x_min > pl.x_max) {
              throw std::invalid_argument("power law needs 1 <= x_min <= x_max");
            }
            if (pl.x_max > m) {
              throw std::invalid_argument("power law support exceeds m");
            }
            std::vector<Atom> atoms;
            atoms.reserve(pl.x_max - pl.x_min + 1);
            for (count_t x = pl.x_min; x <= pl.x_max; ++x) {
              atoms.push_back({x, std::pow(static_cast<double>(x), -pl.gamma)});
            }
            return SizeDistribution(m, normalized(std::move(atoms)));
          },
          [m](const size_spec::Binomial& b) {
            if (b.trials > m) {
              throw std::invalid_argument("binomial trials exceed m");
            }
            if (!(b.p >= 0.0 && b.p <= 1.0)) {
              throw std::invalid_argument("binomial p outside [0,1]");
            }
            std::vector<Atom> atoms;
            for (count_t x = 0; x <= b.trials; ++x) {
              const double w = binomial_pmf(x, b.trials, b.p);
              if (w > 0.0) atoms.push_back({x, w});
            }
            return SizeDistribution(m, normalized(std::move(atoms)));
          },
      },
      spec);
}

std::string to_string(GraphKind kind) {
  return kind == GraphKind::active ? "active" : "passive";
}

GraphKind parse_graph_kind(const std::string& text) {
  if (text == "active") return GraphKind::active;
  if (text == "passive") return GraphKind::passive;
  throw std::invalid_argument("graph kind must be 'active' or 'passive'");
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (s < 1 || s > m) throw std::invalid_argument("s must lie in [1, m]");
  if (size_dist.support_max() != m) {
    throw std::invalid_argument("size distribution support_max must equal m");
  }
}

Moments moments(const SizeDistribution& p, count_t s) {
  CompensatedSum a1, a2, f1, f2, f3;
  for (const auto& atom : p.atoms()) {
    const double c = choose(atom.size, s);
    const double x = static_cast<double>(atom.size);
    a1 += atom.weight * c;
    a2 += atom.weight * c * c;
    f1 += atom.weight * x;
    f2 += atom.weight * falling_factorial_real(x, 2);
    f3 += atom.weight * falling_factorial_real(x, 3);
  }
  return {a1.value(), a2.value(), f1.value(), f2.value(), f3.value()};
}

double DerivedParams::z(count_t x) const {
  if (x < s) return 0.0;
  return std::exp(log_choose(x, s) - 0.5 * log_beta_active);
}

DerivedParams derive_params(const ModelParams& params) {
  params.validate();
  DerivedParams d{};
  d.n = params.n;
  d.m = params.m;
  d.s = params.s;
  const double log_n = std::log(static_cast<double>(params.n));
  d.log_beta_active = log_choose(params.m, params.s) - log_n;
  d.beta_active = std::exp(d.log_beta_active);
  d.beta_passive =
      static_cast<double>(params.m) / static_cast<double>(params.n);
  d.beta_star = static_cast<double>(params.n) / static_cast<double>(params.m);
  d.n_star = static_cast<double>(params.n) * params.size_dist.mass_at_least(2);
  CompensatedSum mu1, z2;
  for (const auto& atom : params.size_dist.atoms()) {
    const double z = d.z(atom.size);
    mu1 += atom.weight * z;
    z2 += atom.weight * z * z;
  }
  d.mu1 = mu1.value();
  d.z_second = z2.value();
  return d;
}

DiscretePmf size_biased(const DiscretePmf& q) {
  const double mu = q.mean();
  if (!(mu > 0.0)) return DiscretePmf::point_mass(0);
  const auto probs = q.probs();
  std::vector<double> out(std::max<std::size_t>(probs.size() - 1, 1), 0.0);
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    out[j] = static_cast<double>(j + 1) * probs[j + 1] / mu;
  }
  return DiscretePmf::with_residual_tail(std::move(out));
}

SizeDistribution conditional_ge2(const SizeDistribution& p) {
  const double mass = p.mass_at_least(2);
  if (!(mass > 0.0)) {
    throw std::domain_error("no mass at or above 2");
  }
  std::vector<SizeDistribution::Atom> atoms;
  for (const auto& a : p.atoms()) {
    if (a.size >= 2) atoms.push_back({a.size, a.weight / mass});
  }
  return SizeDistribution(p.support_max(), normalized(std::move(atoms)));
}

}  // namespace riglab
