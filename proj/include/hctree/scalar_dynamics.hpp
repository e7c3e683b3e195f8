#pragma once

// One-dimensional reduction of the boundary-law recursion:
//
//   f(x) = (1 + x * Lambda)^(-k),   g = f o f,
//
// where Lambda = ||lambda||. Fixed point xi, the 2-cycle (alpha*, beta*) that
// appears above Lambda_cr(k), the contraction constant theta and orbit
// classification all live here.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hctree/activity.hpp"
#include "hctree/errors.hpp"

namespace hctree {

enum class Regime { Subcritical, SupercriticalContractive, SupercriticalNonContractive };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::SupercriticalContractive: return "supercritical_contractive";
    case Regime::SupercriticalNonContractive: return "supercritical_noncontractive";
  }
  return "?";
}

struct TwoCycle {
  double alpha_star;
  double beta_star;
};

struct ContractionData {
  double theta;
  std::optional<double> holder;  // only when theta < 1
  Regime regime;
};

struct FixedPointData {
  double norm;
  int k;
  double xi;
  std::optional<TwoCycle> cycle;
  std::optional<double> theta;
  std::optional<double> holder;
  Regime regime;

  // Lower/upper ends of the band every boundary-law multiplier lies in.
  double band_low() const { return cycle ? cycle->alpha_star : xi; }
  double band_high() const { return cycle ? cycle->beta_star : xi; }
};

inline constexpr double kDefaultTol = 1e-12;
// |Lambda - Lambda_cr| below this fraction of Lambda_cr counts as critical.
inline constexpr double kNearCriticalFraction = 1e-9;
inline constexpr int kCycleScanPoints = 1024;

namespace detail {

inline void check_params(double norm, int k) {
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("norm must be positive");
  if (k < 2) throw InvalidArgument("k must be >= 2");
}

// Bisection on a bracket with h(lo) and h(hi) of opposite sign, run until the
// bracket collapses to neighbouring doubles.
template <typename H>
double bisect(H&& h, double lo, double hi) {
  double hlo = h(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double hm = h(mid);
    if (hm == 0.0) return mid;
    if ((hm > 0.0) == (hlo > 0.0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline double f_map(double x, double norm, int k) {
  if (x < 0.0) throw InvalidArgument("f_map needs x >= 0");
  return std::pow(1.0 + x * norm, -static_cast<double>(k));
}

inline double g_map(double x, double norm, int k) { return f_map(f_map(x, norm, k), norm, k); }

// f'(x) = -k Lambda f(x) / (1 + x Lambda)
inline double f_derivative(double x, double norm, int k) {
  return -k * norm * f_map(x, norm, k) / (1.0 + x * norm);
}

// Unique root of x (1 + x Lambda)^k = 1 on (0,1).
inline double solve_fixed_point(double norm, int k, double tol = kDefaultTol) {
  detail::check_params(norm, k);
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  auto phi = [&](double x) { return x * std::pow(1.0 + x * norm, k) - 1.0; };
  const double xi = detail::bisect(phi, 0.0, 1.0);
  if (std::abs(phi(xi)) > tol)
    throw SolverError("fixed-point residual " + std::to_string(phi(xi)) + " above tol");
  return xi;
}

inline bool is_supercritical(double norm, int k) {
  const double cr = critical_activity(k);
  return norm > cr * (1.0 + kNearCriticalFraction);
}

// The 2-cycle alpha* < xi < beta*, present only above Lambda_cr(k).
inline std::optional<TwoCycle> solve_two_cycle(double norm, int k, double tol = kDefaultTol) {
  detail::check_params(norm, k);
  if (!is_supercritical(norm, k)) return std::nullopt;
  const double xi = solve_fixed_point(norm, k, tol);
  auto h = [&](double x) { return g_map(x, norm, k) - x; };

  double lo = -1.0, hi = -1.0;
  double prev_x = 0.0;
  double prev_h = h(0.0);
  for (int i = 1; i < kCycleScanPoints; ++i) {
    const double x = xi * i / kCycleScanPoints;
    const double hx = h(x);
    if (prev_h > 0.0 && hx <= 0.0) {
      lo = prev_x;
      hi = x;
      break;
    }
    prev_x = x;
    prev_h = hx;
  }
  if (lo < 0.0)
    throw SolverError("no sign change of g(x)-x on (0, xi): near-tangent 2-cycle at norm " +
                      std::to_string(norm));

  const double alpha = detail::bisect(h, lo, hi);
  const double beta = f_map(alpha, norm, k);
  if (std::abs(f_map(beta, norm, k) - alpha) > tol)
    throw SolverError("2-cycle residual above tol");
  if (!(alpha < xi && xi < beta)) throw SolverError("2-cycle does not bracket xi");
  return TwoCycle{alpha, beta};
}

// theta = Lambda beta* / (1 + alpha* Lambda); contractive iff theta < 1,
// equivalently Lambda (beta* - alpha*) < 1.
inline ContractionData contraction_data(double norm, int k, double alpha_star, double beta_star) {
  detail::check_params(norm, k);
  ContractionData out;
  out.theta = norm * beta_star / (1.0 + alpha_star * norm);
  if (out.theta < 1.0) {
    out.holder = -std::log(out.theta) / std::log(static_cast<double>(k));
    out.regime = Regime::SupercriticalContractive;
  } else {
    out.regime = Regime::SupercriticalNonContractive;
  }
  return out;
}

inline FixedPointData fixed_point_data(double norm, int k, double tol = kDefaultTol) {
  detail::check_params(norm, k);
  FixedPointData fp{norm, k, solve_fixed_point(norm, k, tol), std::nullopt, std::nullopt,
                    std::nullopt, Regime::Subcritical};
  fp.cycle = solve_two_cycle(norm, k, tol);
  if (fp.cycle) {
    auto cd = contraction_data(norm, k, fp.cycle->alpha_star, fp.cycle->beta_star);
    fp.theta = cd.theta;
    fp.holder = cd.holder;
    fp.regime = cd.regime;
  }
  return fp;
}

enum class OrbitKind { ConvergesToXi, EvenToAlphaStarOddToBetaStar, EvenToBetaStarOddToAlphaStar };

inline const char* orbit_kind_name(OrbitKind o) {
  switch (o) {
    case OrbitKind::ConvergesToXi: return "converges_to_xi";
    case OrbitKind::EvenToAlphaStarOddToBetaStar: return "even_to_alpha_star_odd_to_beta_star";
    case OrbitKind::EvenToBetaStarOddToAlphaStar: return "even_to_beta_star_odd_to_alpha_star";
  }
  return "?";
}

struct OrbitResult {
  OrbitKind kind;
  double even_limit;
  double odd_limit;
  long steps;
};

// Even and odd subsequences closer than this are taken to share a limit.
inline constexpr double kOrbitSeparation = 1e-6;

// Iterates alpha_{n+1} = f(alpha_n) until both parity subsequences settle
// (successive differences below tol on 3 consecutive checks) and classifies
// the pair of limits.
inline OrbitResult classify_orbit(double alpha0, double norm, int k, double tol = kDefaultTol,
                                  long max_steps = 1'000'000) {
  detail::check_params(norm, k);
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw InvalidArgument("alpha0 must lie in (0,1]");
  if (is_supercritical(norm, k)) {
    const double xi = solve_fixed_point(norm, k);
    if (std::abs(alpha0 - xi) <= tol) return {OrbitKind::ConvergesToXi, xi, xi, 0};
  }

  double even = alpha0;
  double odd = f_map(even, norm, k);
  long steps = 1;
  int streak = 0;
  while (streak < 3) {
    if (steps > max_steps)
      throw NotConverged("orbit did not settle within " + std::to_string(max_steps) + " steps",
                         steps);
    const double next_even = f_map(odd, norm, k);
    const double next_odd = f_map(next_even, norm, k);
    steps += 2;
    const double diff = std::max(std::abs(next_even - even), std::abs(next_odd - odd));
    streak = diff < tol ? streak + 1 : 0;
    even = next_even;
    odd = next_odd;
  }

  OrbitKind kind = OrbitKind::ConvergesToXi;
  if (std::abs(even - odd) > kOrbitSeparation)
    kind = even < odd ? OrbitKind::EvenToAlphaStarOddToBetaStar
                      : OrbitKind::EvenToBetaStarOddToAlphaStar;
  return {kind, even, odd, steps};
}

struct CycleScanOptions {
  long burn_in = 100'000;
  // an orbit is p-periodic once |x_{n+p} - x_n| drops below this
  double drift_tol = 1e-7;
};

struct CycleScanResult {
  std::set<int> periods;
  int unresolved = 0;  // seeds whose orbit never met the drift test
};

// Iterates f from grid_size seeds (i + 1/2) / grid_size and records the
// minimal period of each eventual cycle. A candidate p-cycle whose q-shift
// spread (q | p, q < p) is still shrinking between the two observation windows
// is a slow approach to a q-cycle and is reported as period q; this keeps the
// algebraic convergence at exactly critical Lambda from posing as a 2-cycle.
inline CycleScanResult cycle_scan(double norm, int k, int max_period, int grid_size,
                                  const CycleScanOptions& opt = {}) {
  detail::check_params(norm, k);
  if (max_period < 2) throw InvalidArgument("max_period must be >= 2");
  if (grid_size < 1) throw InvalidArgument("grid_size must be >= 1");

  CycleScanResult out;
  const auto window_len = static_cast<std::size_t>(max_period) + 1;
  auto window = [&](double& x) {
    std::vector<double> w(window_len);
    for (std::size_t i = 0; i < window_len; ++i) {
      w[i] = x;
      x = f_map(x, norm, k);
    }
    return w;
  };

  for (int s = 0; s < grid_size; ++s) {
    double x = (s + 0.5) / grid_size;
    for (long n = 0; n < opt.burn_in; ++n) x = f_map(x, norm, k);
    const auto early = window(x);
    for (long n = static_cast<long>(window_len); n < opt.burn_in; ++n) x = f_map(x, norm, k);
    const auto late = window(x);

    int period = 0;
    for (int p = 1; p <= max_period; ++p) {
      if (std::abs(late[p] - late[0]) <= opt.drift_tol) {
        period = p;
        break;
      }
    }
    if (period == 0) {
      ++out.unresolved;
      continue;
    }
    for (int q = 1; q < period; ++q) {
      if (period % q != 0) continue;
      const double s_early = std::abs(early[q] - early[0]);
      const double s_late = std::abs(late[q] - late[0]);
      if (s_late < 0.9 * s_early) {
        period = q;
        break;
      }
    }
    out.periods.insert(period);
  }
  return out;
}

}  // namespace hctree
