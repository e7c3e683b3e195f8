#pragma once

// Command implementations for the `hctree` tool. Each command reads a
// RunConfig, writes its result to `out` and returns the process exit code
// (0 ok, 1 failure, 2 usage error).

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"

#include "hctree/activity.hpp"
#include "hctree/bg_field.hpp"
#include "hctree/gibbs.hpp"
#include "hctree/path_codes.hpp"
#include "hctree/scalar_dynamics.hpp"
#include "hctree/verify.hpp"

namespace hctree::cli {

using Json = nlohmann::ordered_json;

class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  int k = 2;
  std::optional<double> norm;
  std::optional<std::string> activity;
  std::optional<std::string> t;
  double tol = 1e-10;
  std::optional<int> depth;
  int grid = 17;
  long count = 100'000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string vertex;       // digit string, empty = root
  double alpha0 = 0.5;
  std::string inject_fault;  // "" or "theta"
};

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{"k",    "norm",  "activity", "t",      "tol",
                                          "depth", "grid", "count",    "seed",   "format",
                                          "vertex", "alpha0", "inject_fault"};
  return keys;
}

// Merges a JSON object into `cfg`; unknown keys and wrong types are usage errors.
inline void apply_config(RunConfig& cfg, const Json& j) {
  if (!j.is_object()) throw UsageError("config must be a single JSON object");
  for (const auto& [key, value] : j.items())
    if (!config_keys().count(key)) throw UsageError("unknown config key '" + key + "'");
  try {
    if (j.contains("k")) cfg.k = j.at("k").get<int>();
    if (j.contains("norm")) cfg.norm = j.at("norm").get<double>();
    if (j.contains("activity")) cfg.activity = j.at("activity").get<std::string>();
    if (j.contains("t")) cfg.t = j.at("t").get<std::string>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<int>();
    if (j.contains("count")) cfg.count = j.at("count").get<long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
    if (j.contains("vertex")) cfg.vertex = j.at("vertex").get<std::string>();
    if (j.contains("alpha0")) cfg.alpha0 = j.at("alpha0").get<double>();
    if (j.contains("inject_fault")) cfg.inject_fault = j.at("inject_fault").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

namespace detail {

inline void require_k(const RunConfig& cfg) {
  if (cfg.k < 2) throw UsageError("--k must be >= 2");
}

inline double resolve_norm(const RunConfig& cfg) {
  if (cfg.norm) {
    if (!(*cfg.norm > 0.0)) throw UsageError("--norm must be positive");
    return *cfg.norm;
  }
  if (cfg.activity) return total_activity(parse_activity(*cfg.activity));
  throw UsageError("need --norm or --activity");
}

inline ActivitySpec resolve_activity(const RunConfig& cfg) {
  if (!cfg.activity) throw UsageError("need --activity");
  return parse_activity(*cfg.activity);
}

inline PathCode resolve_t(const RunConfig& cfg) {
  if (!cfg.t) throw UsageError("need --t");
  return parse_path_code(*cfg.t, cfg.k);
}

inline Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace detail

inline Json fixed_point_json(const FixedPointData& fp) {
  Json j;
  j["k"] = fp.k;
  j["norm"] = fp.norm;
  j["xi"] = fp.xi;
  j["alpha_star"] = fp.cycle ? Json(fp.cycle->alpha_star) : Json(nullptr);
  j["beta_star"] = fp.cycle ? Json(fp.cycle->beta_star) : Json(nullptr);
  j["theta"] = detail::nullable(fp.theta);
  j["holder"] = detail::nullable(fp.holder);
  j["regime"] = regime_name(fp.regime);
  return j;
}

inline Json marginal_json(const std::string& target, const MarginalTable& m) {
  Json j;
  j["target"] = target;
  j["support"] = m.support;
  j["p"] = m.p;
  return j;
}

inline int cmd_critical(const RunConfig& cfg, std::ostream& out) {
  detail::require_k(cfg);
  Json j;
  j["k"] = cfg.k;
  j["lambda_cr"] = critical_activity(cfg.k);
  out << j.dump() << '\n';
  return 0;
}

inline int cmd_fixpoints(const RunConfig& cfg, std::ostream& out) {
  detail::require_k(cfg);
  out << fixed_point_json(fixed_point_data(detail::resolve_norm(cfg), cfg.k)).dump() << '\n';
  return 0;
}

inline int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
  detail::require_k(cfg);
  const double norm = detail::resolve_norm(cfg);
  const auto r = classify_orbit(cfg.alpha0, norm, cfg.k, cfg.tol);
  Json j;
  j["k"] = cfg.k;
  j["norm"] = norm;
  j["alpha0"] = cfg.alpha0;
  j["kind"] = orbit_kind_name(r.kind);
  j["even_limit"] = r.even_limit;
  j["odd_limit"] = r.odd_limit;
  j["steps"] = r.steps;
  out << j.dump() << '\n';
  return 0;
}

inline BGParams bg_params(const RunConfig& cfg) {
  detail::require_k(cfg);
  const double norm = detail::resolve_norm(cfg);
  return BGParams(cfg.k, norm, fixed_point_data(norm, cfg.k), cfg.tol);
}

inline int cmd_bg_root(const RunConfig& cfg, std::ostream& out) {
  const auto p = bg_params(cfg);
  const auto t = detail::resolve_t(cfg);
  BGRootValue r{};
  if (cfg.depth) {
    if (*cfg.depth < 0) throw UsageError("--depth must be >= 0");
    r = bg_root_value(digits_of(t, static_cast<std::size_t>(*cfg.depth)), p);
  } else {
    r = bg_root_value(t, p);
  }
  Json j;
  j["k"] = p.k;
  j["norm"] = p.norm;
  j["t"] = t.str();
  j["z0"] = r.z0;
  j["depth"] = r.depth_used;
  j["error_bound"] = r.error_bound;
  out << j.dump() << '\n';
  return 0;
}

inline int cmd_bg_scan(const RunConfig& cfg, std::ostream& out) {
  const auto p = bg_params(cfg);
  if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
  const auto rows = scan_t(p, uniform_grid(static_cast<std::size_t>(cfg.grid), cfg.k));
  if (cfg.format == "csv") {
    out << "t,z0,error_bound\n";
    for (const auto& r : rows)
      out << r.t.str() << ',' << std::setprecision(17) << r.z0 << ',' << r.error_bound << '\n';
  } else if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["t"] = r.t.str();
      j["z0"] = r.z0;
      j["error_bound"] = r.error_bound;
      arr.push_back(j);
    }
    out << arr.dump() << '\n';
  } else {
    throw UsageError("--format must be json or csv");
  }
  return 0;
}

// BG field at --t when given, else the translation-invariant field.
inline BoundaryLawField field_for(const RunConfig& cfg, double norm, std::size_t depth) {
  if (cfg.t) return bg_field(detail::resolve_t(cfg), bg_params(cfg), depth);
  return translation_invariant_field(cfg.k, depth, fixed_point_data(norm, cfg.k));
}

inline int cmd_marginal(const RunConfig& cfg, std::ostream& out) {
  detail::require_k(cfg);
  const auto activity = detail::resolve_activity(cfg);
  if (cfg.norm) throw UsageError("marginal takes --activity, not --norm");
  const double norm = total_activity(activity);
  const Vertex target = parse_vertex(cfg.vertex, cfg.k);
  const auto field = field_for(cfg, norm, target.level());
  out << marginal_json(target.str(), vertex_marginal(field, activity, target)).dump() << '\n';
  return 0;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  detail::require_k(cfg);
  const auto activity = detail::resolve_activity(cfg);
  if (cfg.norm) throw UsageError("sample takes --activity, not --norm");
  const auto depth = static_cast<std::size_t>(cfg.depth.value_or(3));
  if (cfg.depth && *cfg.depth < 0) throw UsageError("--depth must be >= 0");
  if (cfg.count < 0) throw UsageError("--count must be >= 0");
  const auto field = field_for(cfg, total_activity(activity), depth);
  const Sampler sampler(field, activity, depth);
  const auto verts = volume_vertices(cfg.k, depth);
  for (long i = 0; i < cfg.count; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const auto c = sampler.draw(seed);
    Json spins = Json::object();
    for (std::size_t v = 0; v < verts.size(); ++v) spins[verts[v].str()] = c.spins[v];
    Json j;
    j["seed"] = seed;
    j["spins"] = std::move(spins);
    out << j.dump() << '\n';
  }
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out) {
  static const std::set<std::string> suites{"dynamics", "bg", "gibbs", "all"};
  if (!suites.count(suite)) throw UsageError("unknown suite '" + suite + "'");
  VerifyOptions opt;
  if (cfg.inject_fault == "theta")
    opt.theta_fault = 0.5;
  else if (!cfg.inject_fault.empty())
    throw UsageError("unknown fault '" + cfg.inject_fault + "'");

  const auto results = run_verification(suite, opt);
  const CheckResult* first_failure = nullptr;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.name
        << "  measured=" << std::setprecision(6) << r.measured << " limit=" << r.limit << '\n';
    if (!r.pass && !first_failure) first_failure = &r;
  }
  if (first_failure) {
    out << "FAILED: " << first_failure->suite << ": " << first_failure->name
        << " (measured " << first_failure->measured << ", limit " << first_failure->limit << ")\n";
    return 1;
  }
  out << "all " << results.size() << " checks passed\n";
  return 0;
}

// Dispatch with error-to-exit-code mapping.
inline int run(const std::string& command, const RunConfig& cfg, const std::string& suite,
               std::ostream& out, std::ostream& err) {
  try {
    if (command == "critical") return cmd_critical(cfg, out);
    if (command == "fixpoints") return cmd_fixpoints(cfg, out);
    if (command == "orbit") return cmd_orbit(cfg, out);
    if (command == "bg-root") return cmd_bg_root(cfg, out);
    if (command == "bg-scan") return cmd_bg_scan(cfg, out);
    if (command == "marginal") return cmd_marginal(cfg, out);
    if (command == "sample") return cmd_sample(cfg, out);
    if (command == "verify") return cmd_verify(cfg, suite, out);
    throw UsageError("unknown command '" + command + "'");
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hctree::cli
