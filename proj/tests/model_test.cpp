#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "riglab/model.hpp"

namespace riglab {
namespace {

TEST(DiscretePmf, DefaultIsPointMassAtZero) {
  DiscretePmf p;
  EXPECT_EQ(p.k_max(), 0u);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[7], 0.0);
}

TEST(DiscretePmf, RejectsBadMass) {
  EXPECT_THROW(DiscretePmf({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(DiscretePmf({1.2, -0.2}), std::invalid_argument);
  EXPECT_THROW(DiscretePmf({0.5, 0.5}, -0.1), std::invalid_argument);
  EXPECT_NO_THROW(DiscretePmf({0.5, 0.4}, 0.1));
}

TEST(DiscretePmf, FromCountsTrimsAndNormalizes) {
  const std::vector<count_t> counts{1, 2, 1, 0, 0};
  const auto p = DiscretePmf::from_counts(counts);
  EXPECT_EQ(p.k_max(), 2u);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  EXPECT_DOUBLE_EQ(p.mean(), 1.0);
  EXPECT_DOUBLE_EQ(p.factorial_moment(2), 0.5);
  EXPECT_DOUBLE_EQ(p.raw_moment(2), 1.5);
}

TEST(DiscretePmf, ResidualTail) {
  const auto p = DiscretePmf::with_residual_tail({0.25, 0.25});
  EXPECT_DOUBLE_EQ(p.tail_mass(), 0.5);
}

TEST(SizeDistribution, DenseAndSparseAgree) {
  SizeDistribution dense({0.0, 0.25, 0.0, 0.75});
  SizeDistribution sparse(3, {{1, 0.25}, {3, 0.75}});
  ASSERT_EQ(dense.atoms().size(), 2u);
  EXPECT_EQ(dense.weight(3), sparse.weight(3));
  EXPECT_DOUBLE_EQ(dense.mean(), 2.5);
  EXPECT_DOUBLE_EQ(dense.mass_at_least(2), 0.75);
  EXPECT_EQ(dense.largest_size(), 3u);
  EXPECT_FALSE(dense.is_degenerate());
}

TEST(SizeDistribution, Rejects) {
  EXPECT_THROW(SizeDistribution({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(SizeDistribution(3, {{4, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SizeDistribution(3, {{1, 0.5}, {1, 0.5}}), std::invalid_argument);
  EXPECT_THROW(SizeDistribution(3, {{1, -0.5}, {2, 1.5}}), std::invalid_argument);
}

TEST(MakeSizeDist, Degenerate) {
  const auto p = make_size_dist(size_spec::Degenerate{4}, 1000000000);
  EXPECT_TRUE(p.is_degenerate());
  EXPECT_EQ(p.weight(4), 1.0);
  EXPECT_THROW(make_size_dist(size_spec::Degenerate{5}, 4), std::invalid_argument);
}

TEST(MakeSizeDist, PowerLawWeights) {
  const auto p = make_size_dist(size_spec::TruncatedPowerLaw{2.0, 1, 3}, 10);
  const double z = 1.0 + 0.25 + 1.0 / 9.0;
  EXPECT_NEAR(p.weight(1), 1.0 / z, 1e-15);
  EXPECT_NEAR(p.weight(3), 1.0 / 9.0 / z, 1e-15);
  EXPECT_EQ(p.weight(4), 0.0);
  EXPECT_THROW(make_size_dist(size_spec::TruncatedPowerLaw{1.0, 1, 3}, 10),
               std::invalid_argument);
  EXPECT_THROW(make_size_dist(size_spec::TruncatedPowerLaw{2.0, 0, 3}, 10),
               std::invalid_argument);
  EXPECT_THROW(make_size_dist(size_spec::TruncatedPowerLaw{2.0, 1, 11}, 10),
               std::invalid_argument);
}

TEST(MakeSizeDist, Binomial) {
  const auto p = make_size_dist(size_spec::Binomial{4, 0.5}, 10);
  EXPECT_NEAR(p.weight(2), 6.0 / 16.0, 1e-15);
  EXPECT_NEAR(p.mean(), 2.0, 1e-14);
  EXPECT_THROW(make_size_dist(size_spec::Binomial{11, 0.5}, 10), std::invalid_argument);
  EXPECT_THROW(make_size_dist(size_spec::Binomial{4, 1.5}, 10), std::invalid_argument);
}

TEST(MakeSizeDist, Table) {
  const auto p = make_size_dist(size_spec::Table{{0.0, 0.5, 0.5}}, 5);
  EXPECT_EQ(p.support_max(), 5u);
  EXPECT_DOUBLE_EQ(p.mean(), 1.5);
  EXPECT_THROW(make_size_dist(size_spec::Table{{0.5, 0.4}}, 5), std::invalid_argument);
  EXPECT_THROW(make_size_dist(size_spec::Table{{0.0, 0.0, 1.0}}, 1),
               std::invalid_argument);
}

TEST(GraphKind, RoundTrip) {
  EXPECT_EQ(parse_graph_kind(to_string(GraphKind::passive)), GraphKind::passive);
  EXPECT_THROW(parse_graph_kind("both"), std::invalid_argument);
}

TEST(ModelParams, Validate) {
  const auto p = make_size_dist(size_spec::Degenerate{2}, 5);
  EXPECT_NO_THROW((ModelParams{3, 5, 2, p}.validate()));
  EXPECT_THROW((ModelParams{0, 5, 1, p}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{3, 5, 0, p}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{3, 5, 6, p}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{3, 6, 1, p}.validate()), std::invalid_argument);
}

TEST(Moments, UniformSizes) {
  const auto p = make_size_dist(size_spec::Degenerate{5}, 100);
  const auto mo = moments(p, 2);
  EXPECT_DOUBLE_EQ(mo.a1, 10.0);
  EXPECT_DOUBLE_EQ(mo.a2, 100.0);
  EXPECT_DOUBLE_EQ(mo.f1, 5.0);
  EXPECT_DOUBLE_EQ(mo.f2, 20.0);
  EXPECT_DOUBLE_EQ(mo.f3, 60.0);
}

TEST(DerivedParams, PairsAtUnitScale) {
  const ModelParams mp{100000, 100000, 1,
                       make_size_dist(size_spec::Degenerate{2}, 100000)};
  const auto d = derive_params(mp);
  EXPECT_NEAR(d.mu1, 2.0, 1e-12);
  EXPECT_NEAR(d.z_second, 4.0, 1e-12);
  EXPECT_NEAR(d.beta_active, 1.0, 1e-15);
  EXPECT_NEAR(d.beta_star, 1.0, 1e-15);
  EXPECT_NEAR(d.n_star, 100000.0, 1e-9);
  EXPECT_EQ(d.z(0), 0.0);
}

TEST(DerivedParams, LargeM) {
  const ModelParams mp{1000, 1000000000, 2,
                       make_size_dist(size_spec::Degenerate{3}, 1000000000)};
  const auto d = derive_params(mp);
  const double expect = 3.0 * std::sqrt(1000.0 / (1e9 * (1e9 - 1) / 2));
  EXPECT_NEAR(d.z(3) / expect, 1.0, 1e-12);
}

TEST(SizeBiased, ShiftsDegenerate) {
  const auto q = size_biased(DiscretePmf::point_mass(4));
  EXPECT_DOUBLE_EQ(q[3], 1.0);
  const auto zero = size_biased(DiscretePmf::point_mass(0));
  EXPECT_DOUBLE_EQ(zero[0], 1.0);
}

TEST(SizeBiased, TwoPoint) {
  const auto q = size_biased(DiscretePmf({0.0, 0.5, 0.5}));
  EXPECT_NEAR(q[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(q[1], 2.0 / 3.0, 1e-15);
}

TEST(ConditionalGe2, Renormalizes) {
  const auto c = conditional_ge2(SizeDistribution({0.5, 0.25, 0.25}));
  EXPECT_DOUBLE_EQ(c.weight(2), 1.0);
  EXPECT_THROW(conditional_ge2(SizeDistribution({0.0, 1.0})), std::domain_error);
}

}  // namespace
}  // namespace riglab
