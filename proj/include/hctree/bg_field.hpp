#pragma once

// Bleher-Ganikhodjaev boundary laws on the rooted k-ary tree.
//
// Every solution of the boundary-law recursion is z_x = alpha_x * lambda, so a
// field is a table of scalar multipliers alpha_x satisfying
//
//   alpha_x * prod_{y child of x} (1 + Lambda alpha_y) = 1.
//
// For a path pi coded by t, vertices left of the path carry the period-two
// phase that has alpha* at even levels, vertices right of it the opposite
// phase; only the on-path values u_0, u_1, ... are nontrivial and follow from a
// backward recursion that contracts by theta per level.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hctree/activity.hpp"
#include "hctree/errors.hpp"
#include "hctree/path_codes.hpp"
#include "hctree/scalar_dynamics.hpp"

namespace hctree {

struct BGParams {
  int k;
  double norm;
  FixedPointData fp;
  double tol;
  int max_depth;

  BGParams(int k_, double norm_, FixedPointData fp_, double tol_ = 1e-10, int max_depth_ = 100'000)
      : k(k_), norm(norm_), fp(std::move(fp_)), tol(tol_), max_depth(max_depth_) {
    if (fp.regime != Regime::SupercriticalContractive)
      throw RegimeError(std::string("BG construction needs the contractive window, regime is ") +
                        regime_name(fp.regime));
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
  }

  static BGParams from_model(const ModelParams& model, double tol = 1e-10,
                             int max_depth = 100'000) {
    const double norm = total_activity(model.activity);
    return BGParams(model.k, norm, fixed_point_data(norm, model.k), tol, max_depth);
  }

  double alpha_star() const { return fp.cycle->alpha_star; }
  double beta_star() const { return fp.cycle->beta_star; }
  double theta() const { return *fp.theta; }
};

// Multiplier of a vertex off the path. Level 0 is the root.
inline double offpath_value(Side side, std::size_t level, const FixedPointData& fp) {
  if (!fp.cycle) throw RegimeError("off-path values need the 2-cycle");
  if (side == Side::OnPath) throw InvalidArgument("offpath_value called for an on-path vertex");
  const bool even = level % 2 == 0;
  const bool low = (side == Side::Left) == even;
  return low ? fp.cycle->alpha_star : fp.cycle->beta_star;
}

// Certified bound on |u_m(depth N) - u_m(limit)|: 2 beta* theta^(N - m).
inline double truncation_bound(const BGParams& p, int levels) {
  return 2.0 * p.beta_star() * std::pow(p.theta(), levels);
}

// Smallest N with 2 beta* theta^N < tol.
inline int certified_depth(const BGParams& p) {
  const double need = std::log(p.tol / (2.0 * p.beta_star())) / std::log(p.theta());
  int n = std::max(0, static_cast<int>(std::floor(need)));
  while (truncation_bound(p, n) >= p.tol) ++n;
  while (n > 0 && truncation_bound(p, n - 1) < p.tol) --n;
  return n;
}

// u_0..u_N from the seed u_N, digits i_1..i_N.
inline std::vector<double> path_values(const Digits& digits, const BGParams& p, double seed) {
  const std::size_t n = digits.size();
  std::vector<double> u(n + 1);
  u[n] = seed;
  for (std::size_t l = n; l >= 1; --l) {
    const int i = digits[l - 1];
    const double left = offpath_value(Side::Left, l, p.fp);
    const double right = offpath_value(Side::Right, l, p.fp);
    u[l - 1] = std::pow(1.0 + p.norm * left, -i) *
               std::pow(1.0 + p.norm * right, -(p.k - 1 - i)) / (1.0 + p.norm * u[l]);
  }
  return u;
}

struct BGRootValue {
  double z0;
  int depth_used;
  double error_bound;
};

inline double midpoint_seed(const BGParams& p) { return 0.5 * (p.alpha_star() + p.beta_star()); }

// Root multiplier for an explicit digit sequence (its length is the depth).
inline BGRootValue bg_root_value(const Digits& digits, const BGParams& p,
                                 std::optional<double> seed = std::nullopt) {
  const auto u = path_values(digits, p, seed.value_or(midpoint_seed(p)));
  const int n = static_cast<int>(digits.size());
  return {u[0], n, truncation_bound(p, n)};
}

inline int checked_depth(const BGParams& p, int extra_levels) {
  const int want = certified_depth(p) + extra_levels;
  if (want > p.max_depth)
    throw DepthCapped("depth " + std::to_string(want) + " needed, cap is " +
                          std::to_string(p.max_depth),
                      p.max_depth, truncation_bound(p, p.max_depth - extra_levels));
  return want;
}

inline BGRootValue bg_root_value(const PathCode& t, const BGParams& p) {
  if (t.k() != p.k) throw InvalidArgument("path code base differs from k");
  return bg_root_value(digits_of(t, static_cast<std::size_t>(checked_depth(p, 0))), p);
}

// A multiplier field on V_m = levels 0..m.
class BoundaryLawField {
 public:
  struct Constant {
    double value;
  };
  struct LevelPeriodic {
    double even;
    double odd;
  };
  struct Path {
    Digits digits;             // i_1..i_m
    std::vector<double> u;     // u_0..u_m
    FixedPointData fp;
  };

  static BoundaryLawField constant(int k, std::size_t depth, double value) {
    return BoundaryLawField(k, depth, Constant{value}, 0.0);
  }
  static BoundaryLawField level_periodic(int k, std::size_t depth, double even, double odd) {
    return BoundaryLawField(k, depth, LevelPeriodic{even, odd}, 0.0);
  }
  static BoundaryLawField path(int k, Digits digits, std::vector<double> u, FixedPointData fp,
                               double error_bound) {
    const std::size_t depth = digits.size();
    if (u.size() != depth + 1) throw InvalidArgument("path field needs depth+1 values");
    return BoundaryLawField(k, depth, Path{std::move(digits), std::move(u), std::move(fp)},
                            error_bound);
  }

  int k() const noexcept { return k_; }
  std::size_t depth() const noexcept { return depth_; }
  // certified distance of the stored values from the infinite-volume field
  double error_bound() const noexcept { return error_bound_; }
  const Path* as_path() const { return std::get_if<Path>(&repr_); }

  double operator()(const Vertex& v) const {
    if (v.level() > depth_) throw InvalidArgument("vertex outside the field volume");
    if (const auto* c = std::get_if<Constant>(&repr_)) return c->value;
    if (const auto* lp = std::get_if<LevelPeriodic>(&repr_))
      return v.level() % 2 == 0 ? lp->even : lp->odd;
    const auto& p = std::get<Path>(repr_);
    const Side side = branch_side(v, p.digits);
    return side == Side::OnPath ? p.u[v.level()] : offpath_value(side, v.level(), p.fp);
  }

  double root() const { return (*this)(Vertex{}); }

 private:
  using Repr = std::variant<Constant, LevelPeriodic, Path>;
  BoundaryLawField(int k, std::size_t depth, Repr r, double err)
      : k_(k), depth_(depth), repr_(std::move(r)), error_bound_(err) {
    if (k_ < 2) throw InvalidArgument("k must be >= 2");
  }
  int k_;
  std::size_t depth_;
  Repr repr_;
  double error_bound_;
};

// All vertices of levels 0..m in level order, lexicographic within a level.
inline std::vector<Vertex> volume_vertices(int k, std::size_t m) {
  std::vector<Vertex> out{Vertex{}};
  std::size_t level_begin = 0;
  for (std::size_t level = 1; level <= m; ++level) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int d = 0; d < k; ++d) {
        Vertex child = out[i];
        child.digits.push_back(d);
        out.push_back(std::move(child));
      }
    }
    level_begin = level_end;
  }
  return out;
}

inline Vertex child_of(const Vertex& v, int d) {
  Vertex c = v;
  c.digits.push_back(d);
  return c;
}

// BG field on V_m; the on-path values are run from depth m + certified depth.
inline BoundaryLawField bg_field(const PathCode& t, const BGParams& p, std::size_t m) {
  if (t.k() != p.k) throw InvalidArgument("path code base differs from k");
  const int n = checked_depth(p, static_cast<int>(m));
  const Digits digits = digits_of(t, static_cast<std::size_t>(n));
  auto u = path_values(digits, p, midpoint_seed(p));
  u.resize(m + 1);
  Digits prefix(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(m));
  return BoundaryLawField::path(p.k, std::move(prefix), std::move(u), p.fp,
                                truncation_bound(p, n - static_cast<int>(m)));
}

inline BoundaryLawField translation_invariant_field(int k, std::size_t m, const FixedPointData& fp) {
  return BoundaryLawField::constant(k, m, fp.xi);
}

// alpha* at even levels (alpha_even = true) or at odd levels.
inline BoundaryLawField period_two_field(int k, std::size_t m, const FixedPointData& fp,
                                         bool alpha_even = true) {
  if (!fp.cycle) throw RegimeError("period-two field needs the 2-cycle");
  const double a = fp.cycle->alpha_star, b = fp.cycle->beta_star;
  return alpha_even ? BoundaryLawField::level_periodic(k, m, a, b)
                    : BoundaryLawField::level_periodic(k, m, b, a);
}

// max over internal vertices of |alpha_x prod_{children} (1 + Lambda alpha_y) - 1|
inline double verify_consistency(const BoundaryLawField& field, double norm) {
  if (field.depth() < 1) throw InvalidArgument("consistency needs depth >= 1");
  double worst = 0.0;
  for (const auto& v : volume_vertices(field.k(), field.depth() - 1)) {
    double prod = field(v);
    for (int d = 0; d < field.k(); ++d) prod *= 1.0 + norm * field(child_of(v, d));
    worst = std::max(worst, std::abs(prod - 1.0));
  }
  return worst;
}

inline double verify_consistency(const BoundaryLawField& field, const ModelParams& model) {
  if (field.k() != model.k) throw InvalidArgument("field and model disagree on k");
  return verify_consistency(field, total_activity(model.activity));
}

struct RepresentationCheck {
  double z0_first;
  double z0_second;
  double difference;
  int depth;
};

// Root values along both expansions of a point of Q_k.
inline RepresentationCheck two_representation_check(const PathCode& t, const BGParams& p,
                                                    int extra_levels = 0) {
  if (!is_in_Qk(t)) throw InvalidArgument("t = " + t.str() + " is not in Q_k");
  if (t.k() != p.k) throw InvalidArgument("path code base differs from k");
  const auto n = static_cast<std::size_t>(checked_depth(p, extra_levels));
  const double a = bg_root_value(digits_of(t, n), p).z0;
  const double b = bg_root_value(second_representation(t, n), p).z0;
  return {a, b, std::abs(a - b), static_cast<int>(n)};
}

struct ScanRow {
  PathCode t;
  double z0;
  double error_bound;
};

// Largest N >= 0 with |dt| <= k^(-N-1), or -1 when |dt| > 1/k.
inline int holder_level(const Rational& dt, int k) {
  Rational scale(1, k);
  int n = -1;
  const Rational a = dt < 0 ? Rational(-dt) : dt;
  while (a <= scale && n < 100'000) {
    ++n;
    scale /= k;
  }
  return n;
}

inline double holder_bound(const BGParams& p, int level) {
  return 4.0 * p.beta_star() * std::pow(p.theta(), level);
}

// z0 over an ascending grid; throws if strict decrease or the
// |dz0| <= 4 beta* theta^N (|dt| <= k^(-N-1)) bound fails.
inline std::vector<ScanRow> scan_t(const BGParams& p, const std::vector<PathCode>& grid) {
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].k() != p.k) throw InvalidArgument("grid point base differs from k");
    if (i > 0 && !(grid[i - 1].t() < grid[i].t()))
      throw InvalidArgument("scan grid must be strictly ascending");
    const auto r = bg_root_value(grid[i], p);
    rows.push_back({grid[i], r.z0, r.error_bound});
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].z0 < rows[i - 1].z0))
      throw Error("z0 not strictly decreasing between t = " + rows[i - 1].t.str() + " and " +
                  rows[i].t.str());
    const int level = holder_level(rows[i].t.t() - rows[i - 1].t.t(), p.k);
    if (level >= 0 && std::abs(rows[i].z0 - rows[i - 1].z0) > holder_bound(p, level))
      throw Error("Hoelder bound violated between t = " + rows[i - 1].t.str() + " and " +
                  rows[i].t.str());
  }
  return rows;
}

// Slope of log(max |dz0| at spacing k^-j) against log(k^-j), j = 1..levels,
// from the k-adic grid of spacing k^-levels.
inline double empirical_holder_exponent(const BGParams& p, int levels) {
  if (levels < 2) throw InvalidArgument("need at least two scales");
  BigInt points = 1;
  for (int j = 0; j < levels; ++j) points *= p.k;
  const auto count = static_cast<std::size_t>(points);
  std::vector<double> z(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    z[i] = bg_root_value(PathCode(Rational(BigInt(i), points), p.k), p).z0;

  std::vector<double> xs, ys;
  std::size_t stride = count;
  for (int j = 1; j <= levels; ++j) {
    stride /= static_cast<std::size_t>(p.k);
    double worst = 0.0;
    for (std::size_t i = 0; i + stride <= count; i += stride)
      worst = std::max(worst, std::abs(z[i + stride] - z[i]));
    xs.push_back(-j * std::log(static_cast<double>(p.k)));
    ys.push_back(std::log(worst));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hctree
