#pragma once

// From a multiplier field to the Gibbs measure on the rooted tree.
//
// Configuration weights on V_m + W_{m+1} are
//
//   prod_{x in V_m} lambda_{s(x)} * prod_{y in W_{m+1}} w_y,
//   w_y = 1 if s(y) = 0, alpha_y lambda_{s(y)} otherwise,
//
// with weight 0 whenever two neighbours both carry nonzero spins. For a
// consistent field this measure is the tree-indexed Markov chain with root law
// P(0) = 1/(1 + alpha Lambda), P(j) = alpha lambda_j/(1 + alpha Lambda) and the
// same kernel below a zero parent (a nonzero parent forces 0).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hctree/activity.hpp"
#include "hctree/bg_field.hpp"
#include "hctree/errors.hpp"
#include "hctree/path_codes.hpp"
#include "hctree/rng.hpp"
#include "hctree/scalar_dynamics.hpp"

namespace hctree {

struct MarginalTable {
  std::vector<Spin> support;  // ascending, contains 0
  std::vector<double> p;

  double operator()(Spin s) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i] == s) return p[i];
    return 0.0;
  }
  double total() const {
    double t = 0.0;
    for (double x : p) t += x;
    return t;
  }
};

struct JointTable {
  std::vector<std::pair<Spin, Spin>> support;
  std::vector<double> p;

  double operator()(Spin a, Spin b) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i].first == a && support[i].second == b) return p[i];
    return 0.0;
  }
};

inline std::vector<Spin> spin_support(const ActivitySpec& activity) {
  auto nz = nonzero_support(activity);
  std::vector<Spin> out;
  out.reserve(nz.size() + 1);
  bool zero_done = false;
  for (Spin j : nz) {
    if (!zero_done && j > 0) {
      out.push_back(0);
      zero_done = true;
    }
    out.push_back(j);
  }
  if (!zero_done) out.push_back(0);
  return out;
}

// P(0) = 1/(1 + alpha Lambda), P(j) = alpha lambda_j / (1 + alpha Lambda)
inline MarginalTable occupation_law(double alpha, const ActivitySpec& activity) {
  const double z = 1.0 + alpha * total_activity(activity);
  MarginalTable t{spin_support(activity), {}};
  t.p.reserve(t.support.size());
  for (Spin s : t.support) t.p.push_back(s == 0 ? 1.0 / z : alpha * activity(s) / z);
  return t;
}

inline MarginalTable root_marginal(const BoundaryLawField& field, const ActivitySpec& activity) {
  return occupation_law(field.root(), activity);
}

inline MarginalTable child_kernel(Spin parent_spin, double alpha_child,
                                  const ActivitySpec& activity) {
  if (parent_spin == 0) return occupation_law(alpha_child, activity);
  MarginalTable t{spin_support(activity), {}};
  for (Spin s : t.support) t.p.push_back(s == 0 ? 1.0 : 0.0);
  return t;
}

// Marginal at any vertex of the field volume, by pushing P(s = 0) down the
// ancestry.
inline MarginalTable vertex_marginal(const BoundaryLawField& field, const ActivitySpec& activity,
                                     const Vertex& target) {
  const double norm = total_activity(activity);
  Vertex v;
  double parent_zero = 1.0;  // a virtual zero above the root
  double alpha = field(v);
  for (int d : target.digits) {
    parent_zero = parent_zero / (1.0 + alpha * norm) + (1.0 - parent_zero);
    v.digits.push_back(d);
    alpha = field(v);
  }
  MarginalTable t = occupation_law(alpha, activity);
  const double z = 1.0 + alpha * norm;
  for (std::size_t i = 0; i < t.support.size(); ++i)
    t.p[i] = t.support[i] == 0 ? parent_zero / z + (1.0 - parent_zero)
                               : parent_zero * alpha * activity(t.support[i]) / z;
  return t;
}

// Joint law of (s(parent), s(child)) as marginal x kernel.
inline JointTable edge_marginal(const BoundaryLawField& field, const ActivitySpec& activity,
                                const Vertex& parent, int child_digit) {
  const auto top = vertex_marginal(field, activity, parent);
  const double alpha_child = field(child_of(parent, child_digit));
  JointTable out;
  for (std::size_t i = 0; i < top.support.size(); ++i) {
    const auto kern = child_kernel(top.support[i], alpha_child, activity);
    for (std::size_t j = 0; j < kern.support.size(); ++j) {
      out.support.emplace_back(top.support[i], kern.support[j]);
      out.p.push_back(top.p[i] * kern.p[j]);
    }
  }
  return out;
}

// Spins on levels 0..depth of the k-ary tree, stored in level order: the
// children of index i sit at k*i + 1 .. k*i + k.
struct Configuration {
  int k;
  std::size_t depth;
  std::vector<Spin> spins;
};

inline std::size_t volume_size(int k, std::size_t depth) {
  std::size_t n = 0, level = 1;
  for (std::size_t l = 0; l <= depth; ++l) {
    n += level;
    level *= static_cast<std::size_t>(k);
  }
  return n;
}

inline std::size_t vertex_index(const Vertex& v, int k) {
  std::size_t idx = 0;
  for (int d : v.digits) idx = idx * static_cast<std::size_t>(k) + 1 + static_cast<std::size_t>(d);
  return idx;
}

inline bool is_admissible(const Configuration& c) {
  for (std::size_t i = 1; i < c.spins.size(); ++i) {
    const std::size_t parent = (i - 1) / static_cast<std::size_t>(c.k);
    if (c.spins[i] != 0 && c.spins[parent] != 0) return false;
  }
  return true;
}

// Exact top-down sampler of the tree-indexed Markov chain on V_m.
class Sampler {
 public:
  Sampler(const BoundaryLawField& field, ActivitySpec activity, std::size_t depth)
      : k_(field.k()), depth_(depth), activity_(std::move(activity)) {
    if (depth > field.depth()) throw InvalidArgument("field does not cover the sampling volume");
    for (const auto& v : volume_vertices(k_, depth)) inverse_alpha_.push_back(1.0 / field(v));
  }

  // One uniform per vertex in level order; a nonzero parent forces 0.
  Configuration draw(std::uint64_t seed) const {
    SplitMix64 rng(seed);
    Configuration c{k_, depth_, std::vector<Spin>(inverse_alpha_.size(), 0)};
    for (std::size_t i = 0; i < c.spins.size(); ++i) {
      const double u = rng.uniform();
      const bool free = i == 0 || c.spins[(i - 1) / static_cast<std::size_t>(k_)] == 0;
      if (free) c.spins[i] = spin_from_uniform(activity_, inverse_alpha_[i], u);
    }
    return c;
  }

 private:
  int k_;
  std::size_t depth_;
  ActivitySpec activity_;
  std::vector<double> inverse_alpha_;
};

inline Configuration sample_configuration(const BoundaryLawField& field,
                                          const ActivitySpec& activity, std::size_t depth,
                                          std::uint64_t seed) {
  return Sampler(field, activity, depth).draw(seed);
}

namespace detail {

// `boundary` holds the multipliers of the last level, in level order.
inline double weight_with_boundary(const Configuration& c, const std::vector<double>& boundary,
                                   const ActivitySpec& activity) {
  if (!is_admissible(c)) return 0.0;
  const std::size_t inner = c.spins.size() - boundary.size();
  double w = 1.0;
  for (std::size_t i = 0; i < inner; ++i) w *= activity(c.spins[i]);
  for (std::size_t i = inner; i < c.spins.size(); ++i)
    if (c.spins[i] != 0) w *= boundary[i - inner] * activity(c.spins[i]);
  return w;
}

}  // namespace detail

// Weight of a configuration on V_m + W_{m+1} (c.depth = m + 1).
inline double finite_volume_weight(const Configuration& c, const BoundaryLawField& field,
                                   const ActivitySpec& activity) {
  if (c.depth < 1) throw InvalidArgument("weight needs a boundary layer (depth >= 1)");
  if (field.depth() < c.depth) throw InvalidArgument("field does not cover the boundary layer");
  if (c.spins.size() != volume_size(c.k, c.depth)) throw InvalidArgument("configuration is not total");
  std::vector<double> boundary;
  const auto verts = volume_vertices(c.k, c.depth);
  for (std::size_t i = volume_size(c.k, c.depth - 1); i < verts.size(); ++i)
    boundary.push_back(field(verts[i]));
  return detail::weight_with_boundary(c, boundary, activity);
}

inline constexpr double kEnumerationLimit = 1e8;

namespace detail {

// Visits every spin assignment on V_m + W_{m+1} with its weight.
template <typename Visit>
void enumerate_volume(const BoundaryLawField& field, const ActivitySpec& activity, std::size_t m,
                      Visit&& visit) {
  if (!activity.is_finite()) throw InvalidArgument("enumeration needs a finite activity table");
  const auto alphabet = spin_support(activity);
  Configuration c{field.k(), m + 1, std::vector<Spin>(volume_size(field.k(), m + 1), 0)};
  const double states = std::pow(static_cast<double>(alphabet.size()),
                                 static_cast<double>(c.spins.size()));
  if (states > kEnumerationLimit)
    throw VolumeTooLarge("enumeration over " + std::to_string(states) + " assignments refused");
  if (field.depth() < m + 1) throw InvalidArgument("field does not cover the boundary layer");
  std::vector<double> boundary;
  const auto verts = volume_vertices(c.k, m + 1);
  for (std::size_t i = volume_size(c.k, m); i < verts.size(); ++i) boundary.push_back(field(verts[i]));
  std::vector<std::size_t> odometer(c.spins.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < c.spins.size(); ++i) c.spins[i] = alphabet[odometer[i]];
    visit(c, weight_with_boundary(c, boundary, activity));
    std::size_t pos = 0;
    while (pos < odometer.size() && ++odometer[pos] == alphabet.size()) odometer[pos++] = 0;
    if (pos == odometer.size()) break;
  }
}

}  // namespace detail

inline MarginalTable brute_force_marginal(const BoundaryLawField& field,
                                          const ActivitySpec& activity, std::size_t m,
                                          const Vertex& target) {
  if (target.level() > m + 1) throw InvalidArgument("target outside V_m + W_{m+1}");
  const std::size_t idx = vertex_index(target, field.k());
  std::map<Spin, double> acc;
  for (Spin s : spin_support(activity)) acc[s] = 0.0;
  double z = 0.0;
  detail::enumerate_volume(field, activity, m, [&](const Configuration& c, double w) {
    acc[c.spins[idx]] += w;
    z += w;
  });
  MarginalTable t;
  for (const auto& [s, w] : acc) {
    t.support.push_back(s);
    t.p.push_back(w / z);
  }
  return t;
}

inline JointTable brute_force_edge_marginal(const BoundaryLawField& field,
                                            const ActivitySpec& activity, std::size_t m,
                                            const Vertex& parent, int child_digit) {
  if (parent.level() > m) throw InvalidArgument("edge outside V_m + W_{m+1}");
  const std::size_t pi = vertex_index(parent, field.k());
  const std::size_t ci = vertex_index(child_of(parent, child_digit), field.k());
  std::map<std::pair<Spin, Spin>, double> acc;
  const auto alphabet = spin_support(activity);
  for (Spin a : alphabet)
    for (Spin b : alphabet) acc[{a, b}] = 0.0;
  double z = 0.0;
  detail::enumerate_volume(field, activity, m, [&](const Configuration& c, double w) {
    acc[{c.spins[pi], c.spins[ci]}] += w;
    z += w;
  });
  JointTable t;
  for (const auto& [s, w] : acc) {
    t.support.push_back(s);
    t.p.push_back(w / z);
  }
  return t;
}

struct NormalisabilityResult {
  double double_sum;
  double bound;
  bool ok;
};

// sum_{i,j} z_{y,j} Q(i,j) z_{x,i} with Q(i,j) = a_ij lambda_i on the edge from
// x to its parent y, in closed form alpha_x sum lambda^2 + 1 + alpha_y Lambda,
// against the band bound with beta* in place of both multipliers.
inline NormalisabilityResult normalisability_check(const BoundaryLawField& field,
                                                   const ActivitySpec& activity, const Vertex& x,
                                                   const FixedPointData& fp) {
  if (x.level() == 0) throw InvalidArgument("the root has no parent edge");
  Vertex y = x;
  y.digits.pop_back();
  const double norm = total_activity(activity);
  const double sq = squared_activity_sum(activity);
  const double sum = field(x) * sq + 1.0 + field(y) * norm;
  const double top = fp.band_high();
  const double bound = top * sq + 1.0 + top * norm;
  // the band holds up to rounding in the recursion
  const bool ok = std::isfinite(sum) && sum <= bound * (1.0 + 1e-12);
  return {sum, bound, ok};
}

inline double total_variation(const std::map<Spin, double>& a, const MarginalTable& b) {
  std::map<Spin, double> diff = a;
  for (std::size_t i = 0; i < b.support.size(); ++i) diff[b.support[i]] -= b.p[i];
  double tv = 0.0;
  for (const auto& [s, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

inline MarginalTable exact_marginal(const BoundaryLawField& field, const ActivitySpec& activity,
                                    const Vertex& target) {
  return vertex_marginal(field, activity, target);
}

// TV distance between the empirical law at `target` and the exact marginal.
inline double empirical_vs_exact(const std::vector<Configuration>& samples,
                                 const BoundaryLawField& field, const ActivitySpec& activity,
                                 const Vertex& target) {
  if (samples.size() < 1000) throw InvalidArgument("need at least 1000 samples");
  const std::size_t idx = vertex_index(target, field.k());
  std::map<Spin, double> freq;
  for (const auto& c : samples) {
    if (idx >= c.spins.size()) throw InvalidArgument("target outside the sampled volume");
    freq[c.spins[idx]] += 1.0;
  }
  for (auto& [s, f] : freq) f /= static_cast<double>(samples.size());
  return total_variation(freq, exact_marginal(field, activity, target));
}

}  // namespace hctree
