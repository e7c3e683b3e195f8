#pragma once

// Invariant suites behind `hctree verify`. Each check records what it measured
// against the limit it was held to.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "hctree/activity.hpp"
#include "hctree/bg_field.hpp"
#include "hctree/gibbs.hpp"
#include "hctree/path_codes.hpp"
#include "hctree/scalar_dynamics.hpp"

namespace hctree {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured;
  double limit;
  bool pass;
};

struct VerifyOptions {
  // multiplies every theta handed to the BG layer; 1 means no fault
  double theta_fault = 1.0;
  std::size_t gibbs_samples = 20'000;
};

namespace detail {

inline FixedPointData faulted(FixedPointData fp, const VerifyOptions& opt) {
  if (fp.theta) *fp.theta *= opt.theta_fault;
  return fp;
}

inline void record(std::vector<CheckResult>& out, const std::string& suite, const std::string& name,
                   double measured, double limit, bool pass) {
  out.push_back({suite, name, measured, limit, pass});
}

// measured <= limit
inline void at_most(std::vector<CheckResult>& out, const std::string& suite,
                    const std::string& name, double measured, double limit) {
  record(out, suite, name, measured, limit, std::isfinite(measured) && measured <= limit);
}

}  // namespace detail

inline std::vector<CheckResult> verify_dynamics(const VerifyOptions& opt = {}) {
  const std::string s = "dynamics";
  std::vector<CheckResult> out;
  using detail::at_most;

  at_most(out, s, "critical_activity k=2 equals 4", std::abs(critical_activity(2) - 4.0), 0.0);
  at_most(out, s, "critical_activity k=3 equals 27/16", std::abs(critical_activity(3) - 1.6875), 0.0);
  at_most(out, s, "critical_activity k=4 equals 256/243",
          std::abs(critical_activity(4) - 256.0 / 243.0), 1e-12);

  double worst_phi = 0.0, worst_cycle = 0.0;
  bool bracketed = true;
  for (int k : {2, 3, 4}) {
    for (double norm : {0.5, 1.0, critical_activity(k), 4.2, 5.0, 10.0}) {
      const auto fp = fixed_point_data(norm, k);
      worst_phi = std::max(worst_phi, std::abs(fp.xi * std::pow(1.0 + fp.xi * norm, k) - 1.0));
      if (fp.cycle) {
        const double a = fp.cycle->alpha_star, b = fp.cycle->beta_star;
        worst_cycle = std::max({worst_cycle, std::abs(f_map(a, norm, k) - b),
                                std::abs(f_map(b, norm, k) - a)});
        bracketed = bracketed && a < fp.xi && fp.xi < b;
      }
      if (fp.cycle.has_value() != (norm > critical_activity(k) * (1.0 + kNearCriticalFraction)))
        bracketed = false;
    }
  }
  at_most(out, s, "fixed-point residual |x(1+x L)^k - 1|", worst_phi, 1e-12);
  at_most(out, s, "2-cycle residual max|f(a)-b|,|f(b)-a|", worst_cycle, 1e-10);
  detail::record(out, s, "2-cycle brackets xi and exists iff L > L_cr", bracketed ? 1 : 0, 1, bracketed);

  double worst_slope = 0.0, worst_tangent = 0.0;
  for (int k : {2, 3, 4}) {
    const double cr = critical_activity(k);
    const double xi = solve_fixed_point(cr, k);
    const double h = 1e-6;
    const double slope = (f_map(xi + h, cr, k) - f_map(xi - h, cr, k)) / (2 * h);
    worst_slope = std::max(worst_slope, std::abs(slope + 1.0));
    worst_tangent = std::max(worst_tangent, std::abs(xi - 1.0 / (cr * (k - 1))));
  }
  at_most(out, s, "tangency f'(xi) = -1 at L_cr (finite difference)", worst_slope, 1e-8);
  at_most(out, s, "tangency xi = 1/(L_cr (k-1))", worst_tangent, 1e-10);

  double worst_theta_limit = 0.0, worst_theta_formula = 0.0;
  bool window_equiv = true;
  for (int k : {2, 3, 4}) {
    const auto fp = detail::faulted(fixed_point_data(critical_activity(k) * 1.001, k), opt);
    worst_theta_limit = std::max(worst_theta_limit, std::abs(*fp.theta - 1.0 / k));
  }
  for (int k : {2, 3}) {
    for (double norm : {4.2, 5.0, 2.0, 1.8}) {
      if (!is_supercritical(norm, k)) continue;
      const auto fp = detail::faulted(fixed_point_data(norm, k), opt);
      const double a = fp.cycle->alpha_star, b = fp.cycle->beta_star;
      worst_theta_formula =
          std::max(worst_theta_formula, std::abs(*fp.theta - norm * b / (1.0 + a * norm)));
      window_equiv = window_equiv && ((*fp.theta < 1.0) == (norm * (b - a) < 1.0));
    }
  }
  at_most(out, s, "theta -> 1/k at 1.001 L_cr", worst_theta_limit, 0.05);
  at_most(out, s, "theta = L b*/(1 + a* L)", worst_theta_formula, 1e-14);
  detail::record(out, s, "theta < 1 iff L (b* - a*) < 1", window_equiv ? 1 : 0, 1, window_equiv);

  {
    int wrong = 0;
    const double xi3 = solve_fixed_point(3.0, 2);
    const auto fp = fixed_point_data(4.2, 2);
    for (int i = 0; i < 100; ++i) {
      const double a0 = (i + 0.5) / 100.0;
      const auto sub = classify_orbit(a0, 3.0, 2);
      if (sub.kind != OrbitKind::ConvergesToXi || std::abs(sub.even_limit - xi3) > 1e-8) ++wrong;
      const auto sup = classify_orbit(a0, 4.2, 2);
      const auto want = a0 < fp.xi ? OrbitKind::EvenToAlphaStarOddToBetaStar
                                   : OrbitKind::EvenToBetaStarOddToAlphaStar;
      if (sup.kind != want) ++wrong;
    }
    at_most(out, s, "orbit classification mismatches (200 seeds)", wrong, 0);
  }

  {
    int max_period = 0;
    int unresolved = 0;
    for (int k : {2, 3}) {
      for (double norm : {2.0, 3.0, 4.0, 4.2, 5.0, 8.0}) {
        const auto r = cycle_scan(norm, k, 8, 16);
        if (!r.periods.empty()) max_period = std::max(max_period, *r.periods.rbegin());
        unresolved += r.unresolved;
      }
    }
    at_most(out, s, "largest detected cycle period", max_period, 2);
    at_most(out, s, "unresolved cycle-scan seeds", unresolved, 0);
  }
  return out;
}

inline std::vector<CheckResult> verify_bg(const VerifyOptions& opt = {}) {
  const std::string s = "bg";
  std::vector<CheckResult> out;
  using detail::at_most;

  const int k = 2;
  const double norm = 4.2;
  const BGParams p(k, norm, detail::faulted(fixed_point_data(norm, k), opt), 1e-10);
  const double a = p.alpha_star(), b = p.beta_star();

  at_most(out, s, "z0(0) = beta*", std::abs(bg_root_value(PathCode(0, 1, k), p).z0 - b), 1e-9);
  at_most(out, s, "z0(1) = alpha*", std::abs(bg_root_value(PathCode(1, 1, k), p).z0 - a), 1e-9);

  {
    bool ok = true;
    try {
      scan_t(p, uniform_grid(33, k));
    } catch (const Error&) {
      ok = false;
    }
    detail::record(out, s, "33-point scan strictly decreasing within Hoelder bound", ok, 1, ok);
  }

  {
    double worst = 0.0;
    for (auto [num, den] : {std::pair{1, 2}, {1, 4}, {3, 8}, {5, 16}})
      worst = std::max(worst, two_representation_check(PathCode(num, den, k), p).difference);
    at_most(out, s, "two expansions of Q_2 points agree (|dz0|, limit 2 tol)", worst, 2 * p.tol);
  }

  {
    const auto digits = digits_of(PathCode(1, 3, k), static_cast<std::size_t>(certified_depth(p)));
    const double z_a = bg_root_value(digits, p, a).z0;
    const double z_b = bg_root_value(digits, p, b).z0;
    const double z_m = bg_root_value(digits, p).z0;
    const double spread = std::max({std::abs(z_a - z_b), std::abs(z_a - z_m), std::abs(z_b - z_m)});
    at_most(out, s, "seed independence at t=1/3", spread,
            2.0 * truncation_bound(p, static_cast<int>(digits.size())));
  }

  {
    double worst_ratio = 0.0;
    double band_excess = 0.0;
    for (auto [num, den] : {std::pair{0, 1}, {1, 3}, {1, 2}, {1, 1}}) {
      const auto field = bg_field(PathCode(num, den, k), p, 4);
      worst_ratio = std::max(worst_ratio, verify_consistency(field, norm) / field.error_bound());
      for (const auto& v : volume_vertices(k, 4)) {
        const double x = field(v);
        band_excess = std::max({band_excess, a - x, x - b, x - 1.0});
      }
    }
    at_most(out, s, "consistency residual / certified bound on V_4", worst_ratio, 100.0);
    at_most(out, s, "band excess outside [a*, b*]", band_excess, 1e-12);
  }
  return out;
}

inline std::vector<CheckResult> verify_gibbs(const VerifyOptions& opt = {}) {
  const std::string s = "gibbs";
  std::vector<CheckResult> out;
  using detail::at_most;

  const int k = 2;
  const auto act2 = ActivitySpec::finite({{-1, 2.1}, {1, 2.1}});
  const double norm = total_activity(act2);
  const auto fp = fixed_point_data(norm, k);
  const BGParams p(k, norm, detail::faulted(fp, opt), 1e-12);

  std::vector<BoundaryLawField> fields{translation_invariant_field(k, 3, fp),
                                       period_two_field(k, 3, fp),
                                       bg_field(PathCode(1, 2, k), p, 3)};
  double worst = 0.0;
  for (const auto& field : fields) {
    for (std::size_t m : {0u, 1u}) {
      const auto bf = brute_force_marginal(field, act2, m, Vertex{});
      const auto cf = root_marginal(field, act2);
      for (std::size_t i = 0; i < cf.support.size(); ++i)
        worst = std::max(worst, std::abs(bf.p[i] - cf.p[i]));
    }
    const auto bj = brute_force_edge_marginal(field, act2, 1, Vertex{}, 1);
    const auto cj = edge_marginal(field, act2, Vertex{}, 1);
    for (std::size_t i = 0; i < cj.support.size(); ++i)
      worst = std::max(worst, std::abs(bj(cj.support[i].first, cj.support[i].second) - cj.p[i]));
  }
  at_most(out, s, "enumeration vs closed-form marginals", worst, 1e-10);

  {
    const auto& field = fields[2];
    const Sampler sampler(field, act2, 3);
    std::vector<Configuration> samples;
    samples.reserve(opt.gibbs_samples);
    int bad = 0;
    for (std::size_t i = 0; i < opt.gibbs_samples; ++i) {
      samples.push_back(sampler.draw(i));
      if (!is_admissible(samples.back())) ++bad;
    }
    at_most(out, s, "inadmissible sampled configurations", bad, 0);
    at_most(out, s, "root TV(empirical, exact)", empirical_vs_exact(samples, field, act2, Vertex{}),
            0.02);
  }

  {
    bool ok = true;
    for (const auto& field : fields)
      for (const auto& v : volume_vertices(k, 2))
        if (v.level() > 0) ok = ok && normalisability_check(field, act2, v, fp).ok;
    const auto geo = ActivitySpec::geometric(1.0, 0.5);
    const auto fpg = fixed_point_data(total_activity(geo), k);
    const auto fg = translation_invariant_field(k, 1, fpg);
    ok = ok && normalisability_check(fg, geo, Vertex{{0}}, fpg).ok;
    detail::record(out, s, "normalisability double sum finite and within band bound", ok, 1, ok);
  }
  return out;
}

inline std::vector<CheckResult> run_verification(const std::string& suite,
                                                 const VerifyOptions& opt = {}) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> more) {
    out.insert(out.end(), more.begin(), more.end());
  };
  if (suite == "dynamics" || suite == "all") append(verify_dynamics(opt));
  if (suite == "bg" || suite == "all") append(verify_bg(opt));
  if (suite == "gibbs" || suite == "all") append(verify_gibbs(opt));
  if (out.empty()) throw InvalidArgument("unknown suite '" + suite + "'");
  return out;
}

}  // namespace hctree
