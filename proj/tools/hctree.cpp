#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hctree/cli.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<int> k;
  std::optional<double> norm;
  std::optional<std::string> activity;
  std::optional<std::string> t;
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> grid;
  std::optional<long> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> vertex;
  std::optional<double> alpha0;
  std::optional<std::string> inject_fault;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its keys");
  sub->add_option("--k", f.k, "branching number (>= 2)");
  sub->add_option("--norm", f.norm, "total activity ||lambda||");
  sub->add_option("--activity", f.activity, "geom:c=<c>,q=<q> or finite:<j>=<v>,...");
  sub->add_option("--t", f.t, "path code: p/q or d:<digits>");
  sub->add_option("--tol", f.tol, "target tolerance");
  sub->add_option("--depth", f.depth, "recursion depth (bg-root) or volume depth (sample)");
  sub->add_option("--grid", f.grid, "number of grid points for bg-scan");
  sub->add_option("--count", f.count, "number of samples");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--format", f.format, "json or csv");
  sub->add_option("--vertex", f.vertex, "target vertex digit string (marginal)");
  sub->add_option("--alpha0", f.alpha0, "initial multiplier (orbit)");
  sub->add_option("--inject-fault", f.inject_fault, "fault injection for verify (theta)");
}

template <typename T>
void override_with(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Countable-state hard-core model on the Cayley tree"};
  app.require_subcommand(1);
  Flags flags;
  std::string suite = "all";
  for (const char* name :
       {"critical", "fixpoints", "orbit", "bg-root", "bg-scan", "marginal", "sample", "verify"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, flags);
    if (std::string(name) == "verify")
      sub->add_option("suite", suite, "dynamics | bg | gibbs | all");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  hctree::cli::RunConfig cfg;
  try {
    if (flags.config) {
      std::ifstream in(*flags.config);
      if (!in) throw hctree::cli::UsageError("cannot open config '" + *flags.config + "'");
      hctree::cli::Json j;
      try {
        j = hctree::cli::Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw hctree::cli::UsageError(std::string("bad config JSON: ") + e.what());
      }
      hctree::cli::apply_config(cfg, j);
    }
  } catch (const hctree::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  override_with(cfg.k, flags.k);
  if (flags.norm) cfg.norm = flags.norm;
  if (flags.activity) cfg.activity = flags.activity;
  if (flags.t) cfg.t = flags.t;
  override_with(cfg.tol, flags.tol);
  if (flags.depth) cfg.depth = flags.depth;
  override_with(cfg.grid, flags.grid);
  override_with(cfg.count, flags.count);
  override_with(cfg.seed, flags.seed);
  override_with(cfg.format, flags.format);
  override_with(cfg.vertex, flags.vertex);
  override_with(cfg.alpha0, flags.alpha0);
  override_with(cfg.inject_fault, flags.inject_fault);

  const std::string command = app.get_subcommands().front()->get_name();
  return hctree::cli::run(command, cfg, suite, std::cout, std::cerr);
}
