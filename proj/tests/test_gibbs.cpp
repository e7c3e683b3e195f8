#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hctree/gibbs.hpp"

using namespace hctree;

namespace {

const ActivitySpec kTwoSpin = ActivitySpec::finite({{-1, 2.1}, {1, 2.1}});
const ActivitySpec kFourSpin = ActivitySpec::finite({{-2, 0.7}, {-1, 1.4}, {1, 1.3}, {3, 0.8}});

std::vector<BoundaryLawField> fields_42(std::size_t depth) {
  const auto fp = fixed_point_data(4.2, 2);
  const BGParams p(2, 4.2, fp);
  return {translation_invariant_field(2, depth, fp), period_two_field(2, depth, fp),
          period_two_field(2, depth, fp, false), bg_field(PathCode(1, 2, 2), p, depth),
          bg_field(PathCode(1, 3, 2), p, depth)};
}

double max_diff(const MarginalTable& a, const MarginalTable& b) {
  EXPECT_EQ(a.support, b.support);
  double d = 0.0;
  for (std::size_t i = 0; i < a.p.size(); ++i) d = std::max(d, std::abs(a.p[i] - b.p[i]));
  return d;
}

}  // namespace

TEST(RootMarginal, Examples) {
  const auto act = ActivitySpec::finite({{1, 2.0}, {-1, 2.0}});
  const auto m = root_marginal(BoundaryLawField::constant(2, 1, 0.25), act);
  EXPECT_EQ(m.support, (std::vector<Spin>{-1, 0, 1}));
  EXPECT_NEAR(m(0), 0.5, 1e-15);
  EXPECT_NEAR(m(1), 0.25, 1e-15);
  EXPECT_NEAR(m(-1), 0.25, 1e-15);
  EXPECT_GT(root_marginal(BoundaryLawField::constant(2, 1, 1e-12), act)(0), 1 - 1e-10);
}

TEST(ChildKernel, Examples) {
  const auto blocked = child_kernel(5, 0.3, kTwoSpin);
  EXPECT_EQ(blocked(0), 1.0);
  EXPECT_EQ(blocked(1), 0.0);
  EXPECT_NEAR(child_kernel(0, 1.0 / 4.2, kTwoSpin)(0), 0.5, 1e-15);
  const double beta = fixed_point_data(4.2, 2).cycle->beta_star;
  EXPECT_NEAR(child_kernel(0, beta, kTwoSpin)(0), 0.391, 5e-4);
}

TEST(MarginalTables, SumToOne) {
  for (const auto& field : fields_42(3)) {
    for (const auto& act : {kTwoSpin, kFourSpin}) {
      EXPECT_NEAR(root_marginal(field, act).total(), 1.0, 1e-12);
      for (const auto& v : volume_vertices(2, 3)) {
        const auto m = vertex_marginal(field, act, v);
        EXPECT_NEAR(m.total(), 1.0, 1e-12);
        for (double x : m.p) EXPECT_GE(x, 0.0);
      }
    }
  }
}

TEST(FiniteVolumeWeight, Examples) {
  const auto field = BoundaryLawField::constant(2, 2, 0.3);
  Configuration c{2, 2, std::vector<Spin>(7, 0)};
  EXPECT_EQ(finite_volume_weight(c, field, kFourSpin), 1.0);
  c.spins[0] = 3;
  EXPECT_DOUBLE_EQ(finite_volume_weight(c, field, kFourSpin), 0.8);
  c.spins[0] = 0;
  c.spins[5] = -2;  // boundary vertex
  EXPECT_DOUBLE_EQ(finite_volume_weight(c, field, kFourSpin), 0.3 * 0.7);
  c.spins[2] = 1;  // parent of index 5
  EXPECT_EQ(finite_volume_weight(c, field, kFourSpin), 0.0);
  Configuration partial{2, 2, std::vector<Spin>(3, 0)};
  EXPECT_THROW(finite_volume_weight(partial, field, kFourSpin), InvalidArgument);
}

TEST(BruteForce, RootMatchesClosedForm) {
  for (const auto& field : fields_42(2)) {
    for (const auto& act : {kTwoSpin, kFourSpin}) {
      for (std::size_t m : {0u, 1u}) {
        EXPECT_LE(max_diff(brute_force_marginal(field, act, m, Vertex{}), root_marginal(field, act)),
                  1e-10);
      }
    }
  }
  // m = 0 with {1 -> 2, -2 -> 2} and the xi field
  const auto act = ActivitySpec::finite({{1, 2.0}, {-2, 2.0}});
  const auto fp = fixed_point_data(4.0, 2);
  const auto field = translation_invariant_field(2, 1, fp);
  EXPECT_LE(max_diff(brute_force_marginal(field, act, 0, Vertex{}), root_marginal(field, act)),
            1e-12);
}

TEST(BruteForce, InnerVerticesAndEdges) {
  for (const auto& field : fields_42(3)) {
    for (const auto& v : volume_vertices(2, 2)) {
      EXPECT_LE(max_diff(brute_force_marginal(field, kTwoSpin, 1, v),
                         vertex_marginal(field, kTwoSpin, v)),
                1e-10)
          << v.str();
    }
    for (const auto& parent : volume_vertices(2, 1)) {
      for (int d : {0, 1}) {
        const auto bj = brute_force_edge_marginal(field, kTwoSpin, 1, parent, d);
        const auto cj = edge_marginal(field, kTwoSpin, parent, d);
        for (std::size_t i = 0; i < cj.support.size(); ++i)
          EXPECT_NEAR(bj(cj.support[i].first, cj.support[i].second), cj.p[i], 1e-10);
      }
    }
  }
}

// One pass over the 3^15 assignments of V_2 + W_3, all vertices at once.
TEST(BruteForce, EveryVertexAtDepthTwo) {
  for (const auto& field : {fields_42(3)[1], fields_42(3)[3]}) {
    const auto verts = volume_vertices(2, 3);
    std::vector<std::map<Spin, double>> acc(verts.size());
    double z = 0.0;
    detail::enumerate_volume(field, kTwoSpin, 2, [&](const Configuration& c, double w) {
      if (w == 0.0) return;
      z += w;
      for (std::size_t i = 0; i < c.spins.size(); ++i) acc[i][c.spins[i]] += w;
    });
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const auto exact = vertex_marginal(field, kTwoSpin, verts[i]);
      for (std::size_t j = 0; j < exact.support.size(); ++j)
        EXPECT_NEAR(acc[i][exact.support[j]] / z, exact.p[j], 1e-10) << verts[i].str();
    }
  }
}

TEST(BruteForce, Guards) {
  const auto field = translation_invariant_field(2, 6, fixed_point_data(4.2, 2));
  EXPECT_THROW(brute_force_marginal(field, kFourSpin, 5, Vertex{}), VolumeTooLarge);
  EXPECT_THROW(brute_force_marginal(field, ActivitySpec::geometric(1, 0.5), 0, Vertex{}),
               InvalidArgument);
}

// Only ||lambda|| enters the multipliers, so P(0) does not see how the
// nonzero mass is split.
TEST(ActivityNorm, SplittingMassKeepsZeroProbability) {
  const auto one = ActivitySpec::finite({{1, 4.0}});
  const auto two = ActivitySpec::finite({{1, 2.0}, {-1, 2.0}});
  const auto fp1 = fixed_point_data(total_activity(one), 2);
  const auto fp2 = fixed_point_data(total_activity(two), 2);
  EXPECT_EQ(fp1.xi, fp2.xi);
  const auto f1 = translation_invariant_field(2, 2, fp1);
  const auto f2 = translation_invariant_field(2, 2, fp2);
  for (const auto& v : volume_vertices(2, 2))
    EXPECT_EQ(vertex_marginal(f1, one, v)(0), vertex_marginal(f2, two, v)(0));
  EXPECT_NEAR(brute_force_marginal(f1, one, 1, Vertex{{0}})(0),
              brute_force_marginal(f2, two, 1, Vertex{{0}})(0), 1e-12);
}

TEST(Normalisability, Examples) {
  const auto act = ActivitySpec::finite({{1, 2.0}, {-1, 2.0}});
  const auto fp = fixed_point_data(4.0, 2);
  const auto field = translation_invariant_field(2, 1, fp);
  const auto r = normalisability_check(field, act, Vertex{{1}}, fp);
  EXPECT_NEAR(r.double_sum, fp.xi * 8 + 1 + 4 * fp.xi, 1e-15);
  EXPECT_TRUE(r.ok);

  const auto geo = ActivitySpec::geometric(1.0, 0.5);
  const auto fpg = fixed_point_data(2.0, 2);
  const auto rg = normalisability_check(translation_invariant_field(2, 1, fpg), geo, Vertex{{0}}, fpg);
  EXPECT_NEAR(rg.bound, fpg.xi * 2.0 / 3.0 + 1 + fpg.xi * 2.0, 1e-14);
  EXPECT_TRUE(rg.ok);

  const auto fp42 = fixed_point_data(4.2, 2);
  for (const auto& f : fields_42(3))
    for (const auto& v : volume_vertices(2, 3))
      if (v.level() > 0) {
        EXPECT_TRUE(normalisability_check(f, kFourSpin, v, fp42).ok);
      }
  EXPECT_THROW(normalisability_check(field, act, Vertex{}, fp), InvalidArgument);
}

TEST(Sampler, AdmissibleAndDeterministic) {
  for (const auto& field : fields_42(3)) {
    const Sampler s(field, kFourSpin, 3);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      const auto c = s.draw(seed);
      ASSERT_TRUE(is_admissible(c));
      for (std::size_t i = 0; i < volume_size(2, 2); ++i)
        if (c.spins[i] != 0) {
          EXPECT_TRUE(c.spins[2 * i + 1] == 0 && c.spins[2 * i + 2] == 0);
        }
    }
    EXPECT_EQ(s.draw(42).spins, s.draw(42).spins);
    EXPECT_EQ(sample_configuration(field, kFourSpin, 3, 7).spins, s.draw(7).spins);
  }
  EXPECT_THROW(Sampler(fields_42(2)[0], kTwoSpin, 3), InvalidArgument);
}

TEST(Sampler, EmpiricalMarginalsMatch) {
  const auto field = fields_42(3)[3];
  const Sampler s(field, kFourSpin, 3);
  std::vector<Configuration> samples;
  for (std::uint64_t i = 0; i < 100'000; ++i) samples.push_back(s.draw(i));
  EXPECT_LE(empirical_vs_exact(samples, field, kFourSpin, Vertex{}), 0.01);
  EXPECT_LE(empirical_vs_exact(samples, field, kFourSpin, Vertex{{1, 0, 1}}), 0.01);

  // root P(0) within 3 standard errors
  const double p0 = root_marginal(field, kFourSpin)(0);
  double hits = 0;
  for (const auto& c : samples) hits += c.spins[0] == 0;
  const double se = std::sqrt(p0 * (1 - p0) / samples.size());
  EXPECT_LE(std::abs(hits / samples.size() - p0), 3 * se);
}

TEST(Sampler, SwappedPhasesAreDistinguishable) {
  const auto fp = fixed_point_data(4.2, 2);
  const auto even = period_two_field(2, 3, fp);
  const auto odd = period_two_field(2, 3, fp, false);
  const Sampler s(even, kTwoSpin, 3);
  std::vector<Configuration> samples;
  for (std::uint64_t i = 0; i < 20'000; ++i) samples.push_back(s.draw(i));
  for (const auto& v : {Vertex{}, Vertex{{0}}}) {
    EXPECT_LE(empirical_vs_exact(samples, even, kTwoSpin, v), 0.02);
    EXPECT_GE(empirical_vs_exact(samples, odd, kTwoSpin, v), 0.05);
  }
  EXPECT_THROW(empirical_vs_exact({}, even, kTwoSpin, Vertex{}), InvalidArgument);
}
