#pragma once

// Activity sequences lambda_j (j in Z, lambda_0 = 1) of the countable-state
// hard-core model, their l1 / l2 norms and the critical total activity.
//
// All norms run over the nonzero indices only; lambda_0 = 1 is implicit and
// never stored.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hctree/errors.hpp"

namespace hctree {

using Spin = std::int64_t;

struct FiniteSupport {
  // Sorted by index; indices are nonzero, values positive.
  std::vector<std::pair<Spin, double>> entries;
};

// lambda_j = c * q^|j| for j != 0.
struct TwoSidedGeometric {
  double c = 1.0;
  double q = 0.5;
};

class ActivitySpec {
 public:
  using Repr = std::variant<FiniteSupport, TwoSidedGeometric>;

  static ActivitySpec finite(std::map<Spin, double> table) {
    if (table.empty()) throw InvalidArgument("finite activity needs at least one entry");
    FiniteSupport fs;
    for (const auto& [j, v] : table) {
      if (j == 0) throw InvalidArgument("activity index 0 is fixed to 1 and cannot be set");
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("activity values must be positive and finite");
      fs.entries.emplace_back(j, v);
    }
    return ActivitySpec(std::move(fs));
  }

  static ActivitySpec geometric(double c, double q) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("geometric activity needs c > 0");
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("geometric activity needs q in (0,1)");
    return ActivitySpec(TwoSidedGeometric{c, q});
  }

  const Repr& repr() const noexcept { return repr_; }
  bool is_finite() const noexcept { return std::holds_alternative<FiniteSupport>(repr_); }
  const FiniteSupport& as_finite() const { return std::get<FiniteSupport>(repr_); }
  const TwoSidedGeometric& as_geometric() const { return std::get<TwoSidedGeometric>(repr_); }

  // lambda_j, with lambda_0 = 1.
  double operator()(Spin j) const {
    if (j == 0) return 1.0;
    if (is_finite()) {
      const auto& e = as_finite().entries;
      auto it = std::lower_bound(e.begin(), e.end(), j,
                                 [](const auto& p, Spin key) { return p.first < key; });
      return (it != e.end() && it->first == j) ? it->second : 0.0;
    }
    const auto& g = as_geometric();
    return g.c * std::pow(g.q, static_cast<double>(j < 0 ? -j : j));
  }

 private:
  explicit ActivitySpec(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

struct ModelParams {
  int k = 2;
  ActivitySpec activity = ActivitySpec::geometric(1.0, 0.5);

  ModelParams(int k_, ActivitySpec a) : k(k_), activity(std::move(a)) {
    if (k < 2) throw InvalidArgument("branching number k must be >= 2");
  }
};

// ||lambda|| = sum over j != 0 of lambda_j.
inline double total_activity(const ActivitySpec& spec) {
  if (spec.is_finite()) {
    double s = 0.0;
    for (const auto& [j, v] : spec.as_finite().entries) s += v;
    return s;
  }
  const auto& g = spec.as_geometric();
  return 2.0 * g.c * g.q / (1.0 - g.q);
}

inline double squared_activity_sum(const ActivitySpec& spec) {
  if (spec.is_finite()) {
    double s = 0.0;
    for (const auto& [j, v] : spec.as_finite().entries) s += v * v;
    return s;
  }
  const auto& g = spec.as_geometric();
  return 2.0 * g.c * g.c * g.q * g.q / (1.0 - g.q * g.q);
}

inline double max_activity(const ActivitySpec& spec) {
  if (spec.is_finite()) {
    double m = 0.0;
    for (const auto& [j, v] : spec.as_finite().entries) m = std::max(m, v);
    return m;
  }
  const auto& g = spec.as_geometric();
  return g.c * g.q;
}

// Lambda_cr(k) = k^k / (k-1)^(k+1).
inline double critical_activity(int k) {
  if (k < 2) throw InvalidArgument("critical activity is defined for k >= 2");
  const double kd = k;
  return std::pow(kd, kd) / std::pow(kd - 1.0, kd + 1.0);
}

// Nonzero spins carrying activity, ascending. A geometric tail is cut once the
// remaining mass on each side drops below `tail_fraction` of ||lambda||.
inline std::vector<Spin> nonzero_support(const ActivitySpec& spec, double tail_fraction = 1e-17) {
  std::vector<Spin> out;
  if (spec.is_finite()) {
    for (const auto& [j, v] : spec.as_finite().entries) out.push_back(j);
    return out;
  }
  const auto& g = spec.as_geometric();
  // tail beyond J on one side is c q^(J+1)/(1-q) relative to the side mass c q/(1-q): q^J.
  const auto cut = static_cast<Spin>(std::ceil(std::log(tail_fraction) / std::log(g.q)));
  for (Spin j = -cut; j <= cut; ++j)
    if (j != 0) out.push_back(j);
  return out;
}

// Inverse-CDF draw from P(0) ~ weight_of_zero, P(j) ~ lambda_j, with the
// spins laid out on [0,1) in ascending index order.
inline Spin spin_from_uniform(const ActivitySpec& spec, double weight_of_zero, double u) {
  if (!(weight_of_zero >= 0.0)) throw InvalidArgument("weight_of_zero must be >= 0");
  if (!(u >= 0.0 && u < 1.0)) throw InvalidArgument("u must lie in [0,1)");
  const double total = weight_of_zero + total_activity(spec);
  const double x = u * total;

  if (spec.is_finite()) {
    const auto& e = spec.as_finite().entries;
    double cum = 0.0;
    bool zero_done = false;
    Spin last = 0;
    for (const auto& [j, v] : e) {
      if (!zero_done && j > 0) {
        zero_done = true;
        cum += weight_of_zero;
        if (weight_of_zero > 0.0) last = 0;
        if (x < cum) return 0;
      }
      cum += v;
      last = j;
      if (x < cum) return j;
    }
    if (!zero_done) {
      cum += weight_of_zero;
      if (weight_of_zero > 0.0) last = 0;
      if (x < cum) return 0;
    }
    return last;  // rounding at the right edge
  }

  const auto& g = spec.as_geometric();
  const double side = g.c * g.q / (1.0 - g.q);
  const double lq = std::log(g.q);
  // mass of {j : |j| >= m} on one side is c q^m / (1-q)
  auto tail = [&](Spin m) { return g.c * std::pow(g.q, static_cast<double>(m)) / (1.0 - g.q); };

  if (x < side) {
    // J = -m with tail(m+1) <= x < tail(m)
    double v = std::max(x * (1.0 - g.q) / g.c, std::numeric_limits<double>::min());
    auto m = static_cast<Spin>(std::ceil(std::log(v) / lq)) - 1;
    m = std::max<Spin>(m, 1);
    while (m > 1 && x >= tail(m)) --m;
    while (x < tail(m + 1) && tail(m + 1) > 0.0) ++m;
    return -m;
  }
  if (x < side + weight_of_zero) return 0;
  // J = m with tail(m+1) < r <= tail(m), r the mass at or above the draw
  const double r = std::max(total - x, std::numeric_limits<double>::min());
  const double v = r * (1.0 - g.q) / g.c;
  auto m = static_cast<Spin>(std::floor(std::log(v) / lq));
  m = std::max<Spin>(m, 1);
  while (m > 1 && r > tail(m)) --m;
  while (r <= tail(m + 1)) ++m;
  return m;
}

// Grammar: "geom:c=<float>,q=<float>" or "finite:<j1>=<v1>,<j2>=<v2>,...".
inline ActivitySpec parse_activity(std::string_view text) {
  auto fail = [&](const std::string& why) -> InvalidArgument {
    return InvalidArgument("bad activity '" + std::string(text) + "': " + why);
  };
  auto to_double = [&](std::string_view s) {
    std::string tmp(s);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tmp, &pos);
    } catch (const std::exception&) {
      throw fail("not a number: " + tmp);
    }
    if (pos != tmp.size()) throw fail("not a number: " + tmp);
    return v;
  };
  auto to_int = [&](std::string_view s) {
    Spin v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw fail("not an integer: " + std::string(s));
    return v;
  };
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      auto pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return parts;
  };

  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw fail("missing 'geom:' or 'finite:' prefix");
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  if (body.empty()) throw fail("empty body");

  if (kind == "geom") {
    double c = 0.0, q = 0.0;
    bool have_c = false, have_q = false;
    for (auto item : split(body, ',')) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw fail("expected key=value");
      auto key = item.substr(0, eq);
      auto val = to_double(item.substr(eq + 1));
      if (key == "c" && !have_c) {
        c = val;
        have_c = true;
      } else if (key == "q" && !have_q) {
        q = val;
        have_q = true;
      } else {
        throw fail("unexpected key '" + std::string(key) + "'");
      }
    }
    if (!have_c || !have_q) throw fail("geom needs both c and q");
    return ActivitySpec::geometric(c, q);
  }
  if (kind == "finite") {
    std::map<Spin, double> table;
    for (auto item : split(body, ',')) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw fail("expected index=value");
      auto j = to_int(item.substr(0, eq));
      if (table.count(j)) throw fail("duplicate index " + std::to_string(j));
      table[j] = to_double(item.substr(eq + 1));
    }
    return ActivitySpec::finite(std::move(table));
  }
  throw fail("unknown kind '" + std::string(kind) + "'");
}

inline std::string format_activity(const ActivitySpec& spec) {
  std::ostringstream os;
  os.precision(17);
  if (spec.is_finite()) {
    os << "finite:";
    bool first = true;
    for (const auto& [j, v] : spec.as_finite().entries) {
      if (!first) os << ',';
      os << j << '=' << v;
      first = false;
    }
  } else {
    const auto& g = spec.as_geometric();
    os << "geom:c=" << g.c << ",q=" << g.q;
  }
  return os.str();
}

}  // namespace hctree
