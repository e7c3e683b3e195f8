#include <gtest/gtest.h>

#include <cmath>

#include "hctree/bg_field.hpp"
#include "hctree/rng.hpp"
#include "oracles.hpp"

using namespace hctree;

namespace {

BGParams params42(double tol = 1e-10) {
  return BGParams(2, 4.2, fixed_point_data(4.2, 2), tol);
}

}  // namespace

TEST(BGParams, RefusesOutsideContractiveWindow) {
  EXPECT_THROW(BGParams(2, 5.0, fixed_point_data(5.0, 2)), RegimeError);
  EXPECT_THROW(BGParams(2, 3.0, fixed_point_data(3.0, 2)), RegimeError);
  EXPECT_NO_THROW(params42());
  const ModelParams model(2, ActivitySpec::finite({{1, 2.1}, {-1, 2.1}}));
  EXPECT_NEAR(BGParams::from_model(model).theta(), params42().theta(), 1e-15);
}

TEST(OffpathValue, ParityKeyed) {
  const auto fp = fixed_point_data(4.2, 2);
  const double a = fp.cycle->alpha_star, b = fp.cycle->beta_star;
  EXPECT_EQ(offpath_value(Side::Left, 0, fp), a);
  EXPECT_EQ(offpath_value(Side::Left, 1, fp), b);
  EXPECT_EQ(offpath_value(Side::Right, 0, fp), b);
  EXPECT_EQ(offpath_value(Side::Right, 1, fp), a);
  EXPECT_EQ(offpath_value(Side::Left, 6, fp), a);
  EXPECT_THROW(offpath_value(Side::OnPath, 2, fp), InvalidArgument);
  EXPECT_THROW(offpath_value(Side::Left, 0, fixed_point_data(3.0, 2)), RegimeError);
  // a left vertex's children are left vertices one level down
  EXPECT_NEAR(f_map(offpath_value(Side::Left, 3, fp), 4.2, 2), offpath_value(Side::Left, 2, fp),
              1e-14);
}

TEST(CertifiedDepth, SmallestDepthBelowTol) {
  const auto p = params42();
  const int n = certified_depth(p);
  EXPECT_LT(truncation_bound(p, n), p.tol);
  EXPECT_GE(truncation_bound(p, n - 1), p.tol);
}

TEST(BGRootValue, Endpoints) {
  const auto p = params42();
  EXPECT_NEAR(bg_root_value(PathCode(0, 1, 2), p).z0, p.beta_star(), 1e-10);
  EXPECT_NEAR(bg_root_value(PathCode(1, 1, 2), p).z0, p.alpha_star(), 1e-10);
}

TEST(BGRootValue, HalfIsInteriorAndDepthStable) {
  const auto p = params42();
  const auto digits = digits_of(PathCode(1, 2, 2), 400);
  const double z200 = bg_root_value(Digits(digits.begin(), digits.begin() + 200), p).z0;
  const double z400 = bg_root_value(digits, p).z0;
  EXPECT_GT(z400, p.alpha_star());
  EXPECT_LT(z400, p.beta_star());
  EXPECT_LE(std::abs(z200 - z400), truncation_bound(p, 200));
}

TEST(BGRootValue, MatchesWholeTreeEvaluation) {
  const auto p = params42();
  for (auto [num, den] : {std::pair{1, 2}, {1, 3}, {5, 16}, {0, 1}, {1, 1}, {7, 9}}) {
    const auto digits = digits_of(PathCode(num, den, 2), 14);
    for (double seed : {p.alpha_star(), midpoint_seed(p), p.beta_star()}) {
      const double fast = bg_root_value(digits, p, seed).z0;
      const auto slow = oracle::whole_tree_root(digits, 2, 4.2L, p.alpha_star(), p.beta_star(), seed);
      EXPECT_NEAR(fast, static_cast<double>(slow), 1e-14);
    }
  }
  // k = 3
  const BGParams p3(3, 1.8, fixed_point_data(1.8, 3));
  const auto digits = digits_of(PathCode(2, 7, 3), 9);
  const double fast = bg_root_value(digits, p3, 0.3).z0;
  const auto slow = oracle::whole_tree_root(digits, 3, 1.8L, p3.alpha_star(), p3.beta_star(), 0.3L);
  EXPECT_NEAR(fast, static_cast<double>(slow), 1e-14);
}

TEST(BGRootValue, SeedIndependence) {
  const auto p = params42();
  for (auto [num, den] : {std::pair{1, 3}, {1, 2}, {2, 7}}) {
    const auto digits = digits_of(PathCode(num, den, 2), static_cast<std::size_t>(certified_depth(p)));
    const double za = bg_root_value(digits, p, p.alpha_star()).z0;
    const double zb = bg_root_value(digits, p, p.beta_star()).z0;
    const auto r = bg_root_value(digits, p);
    EXPECT_LE(std::abs(za - zb), 2 * r.error_bound);
    EXPECT_LE(std::abs(za - r.z0), 2 * r.error_bound);
  }
}

TEST(BGRootValue, DepthCap) {
  const BGParams p(2, 4.2, fixed_point_data(4.2, 2), 1e-10, 50);
  try {
    bg_root_value(PathCode(1, 3, 2), p);
    FAIL() << "expected DepthCapped";
  } catch (const DepthCapped& e) {
    EXPECT_EQ(e.depth(), 50);
    EXPECT_NEAR(e.achieved_bound(), truncation_bound(p, 50), 1e-15);
    EXPECT_GT(e.achieved_bound(), 1e-10);
  }
}

TEST(BGRootValue, IncreasingADigitDecreasesZ0) {
  const auto p = params42();
  SplitMix64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    Digits d(200);
    for (auto& x : d) x = static_cast<int>(rng.next() % 2);
    const std::size_t pos = rng.next() % 20;
    d[pos] = 0;
    const double before = bg_root_value(d, p).z0;
    d[pos] = 1;
    EXPECT_LT(bg_root_value(d, p).z0, before) << "digit " << pos;
  }
  // k = 3, two-step increase
  const BGParams p3(3, 1.8, fixed_point_data(1.8, 3));
  for (int trial = 0; trial < 100; ++trial) {
    Digits d(200);
    for (auto& x : d) x = static_cast<int>(rng.next() % 3);
    const std::size_t pos = rng.next() % 15;
    double prev = 2.0;
    for (int v = 0; v < 3; ++v) {
      d[pos] = v;
      const double z = bg_root_value(d, p3).z0;
      EXPECT_LT(z, prev);
      prev = z;
    }
  }
}

TEST(BGField, DepthZeroIsRootValue) {
  const auto p = params42();
  const auto f = bg_field(PathCode(1, 3, 2), p, 0);
  EXPECT_NEAR(f.root(), bg_root_value(PathCode(1, 3, 2), p).z0, 1e-10);
}

TEST(BGField, LeftmostPathAlternates) {
  const auto p = params42();
  const auto f = bg_field(PathCode(0, 1, 2), p, 2);
  const double a = p.alpha_star(), b = p.beta_star();
  for (const auto& v : volume_vertices(2, 2)) {
    EXPECT_NE(branch_side(v, f.as_path()->digits), Side::Left);
    const double want = v.level() % 2 == 0 ? b : a;
    EXPECT_NEAR(f(v), want, 1e-10);
  }
  EXPECT_LT(verify_consistency(f, 4.2), p.tol);
}

TEST(BGField, EndpointsMatchParityFieldsAtEveryLevel) {
  const auto p = params42();
  const auto f0 = bg_field(PathCode(0, 1, 2), p, 8);
  const auto f1 = bg_field(PathCode(1, 1, 2), p, 8);
  for (std::size_t l = 0; l <= 8; ++l) {
    const double hi = l % 2 == 0 ? p.beta_star() : p.alpha_star();
    const double lo = l % 2 == 0 ? p.alpha_star() : p.beta_star();
    EXPECT_NEAR(f0.as_path()->u[l], hi, f0.error_bound());
    EXPECT_NEAR(f1.as_path()->u[l], lo, f1.error_bound());
  }
}

TEST(BGField, BandAndConsistency) {
  const auto p = params42();
  for (auto [num, den] : {std::pair{0, 1}, {1, 3}, {1, 2}, {1, 1}, {3, 7}}) {
    const auto f = bg_field(PathCode(num, den, 2), p, 4);
    for (const auto& v : volume_vertices(2, 4)) {
      EXPECT_GE(f(v), p.alpha_star() - 1e-12);
      EXPECT_LE(f(v), p.beta_star() + 1e-12);
      EXPECT_LE(f(v), 1.0);
    }
    EXPECT_LE(verify_consistency(f, 4.2), 100 * f.error_bound());
  }
  const auto f = bg_field(PathCode(1, 3, 2), p, 4);
  EXPECT_LE(verify_consistency(f, 4.2), 1e-8);
}

TEST(VerifyConsistency, ConstantAndPeriodicFields) {
  const auto fp = fixed_point_data(4.2, 2);
  EXPECT_LE(verify_consistency(translation_invariant_field(2, 3, fp), 4.2), 1e-10);
  EXPECT_LE(verify_consistency(period_two_field(2, 3, fp), 4.2), 1e-10);
  EXPECT_LE(verify_consistency(period_two_field(2, 3, fp, false), 4.2), 1e-10);
  // a wrong constant is caught
  EXPECT_GT(verify_consistency(BoundaryLawField::constant(2, 2, 0.3), 4.2), 1e-3);
  EXPECT_THROW(verify_consistency(BoundaryLawField::constant(2, 0, 0.3), 4.2), InvalidArgument);
}

TEST(TwoRepresentations, Agree) {
  const auto p = params42();
  for (auto [num, den] : {std::pair{1, 2}, {3, 4}, {1, 4}, {3, 8}, {5, 16}}) {
    const auto r = two_representation_check(PathCode(num, den, 2), p);
    EXPECT_LE(r.difference, 2 * p.tol);
  }
  const BGParams p3(3, 1.8, fixed_point_data(1.8, 3));
  for (auto [num, den] : {std::pair{1, 3}, {2, 9}}) {
    EXPECT_LE(two_representation_check(PathCode(num, den, 3), p3).difference, 2 * p3.tol);
  }
  EXPECT_THROW(two_representation_check(PathCode(1, 3, 2), p), InvalidArgument);
}

TEST(ScanT, Examples) {
  const auto p = params42();
  const auto ends = scan_t(p, {PathCode(0, 1, 2), PathCode(1, 1, 2)});
  EXPECT_NEAR(ends[0].z0, p.beta_star(), 1e-10);
  EXPECT_NEAR(ends[1].z0, p.alpha_star(), 1e-10);

  const auto mid = scan_t(p, {PathCode(1, 4, 2), PathCode(1, 2, 2), PathCode(3, 4, 2)});
  EXPECT_GT(mid[0].z0, mid[1].z0);
  EXPECT_GT(mid[1].z0, mid[2].z0);

  EXPECT_THROW(scan_t(p, {PathCode(1, 2, 2), PathCode(1, 4, 2)}), InvalidArgument);
}

TEST(ScanT, HolderBoundOnFineGrid) {
  const auto p = params42();
  const auto rows = scan_t(p, uniform_grid(65, 2));  // spacing 2^-6
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_LE(std::abs(rows[i].z0 - rows[i - 1].z0), holder_bound(p, 5));
}

TEST(HolderLevel, Values) {
  EXPECT_EQ(holder_level(Rational(1, 4), 2), 1);
  EXPECT_EQ(holder_level(Rational(1, 5), 2), 1);
  EXPECT_EQ(holder_level(Rational(1, 2), 2), 0);
  EXPECT_EQ(holder_level(Rational(3, 4), 2), -1);
  EXPECT_EQ(holder_level(Rational(1, 64), 2), 5);
}

TEST(EmpiricalHolder, AtLeastTheoreticalExponent) {
  const auto p = params42();
  const double slope = empirical_holder_exponent(p, 10);
  EXPECT_GE(slope, *p.fp.holder - 0.02);
}
