#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "app/commands.hpp"
#include "app/config.hpp"

namespace {

using namespace ifszeta::app;

struct Flags {
  std::string command;
  std::string config;
  std::string preset;
  std::string preset_dir;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::size_t> budget;
  std::optional<unsigned> n;
  std::optional<unsigned> n_min;
  std::optional<unsigned> n_max;
  std::optional<unsigned> depth;
  std::optional<double> eps;
  std::optional<std::string> mode;
  std::optional<std::string> sigma_range;
  std::optional<std::string> t_range;
  std::optional<std::string> weight_source;
  std::optional<double> sigma;
  std::optional<double> t;
  std::optional<double> dimension;
};

RunConfig build_config(const Flags& f, const std::filesystem::path& preset_dir) {
  RunConfig cfg;
  if (!f.preset.empty()) cfg = load_preset(f.preset, preset_dir);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("config", "cannot open " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object()) j.erase("preset_name");
    merge_json(cfg, j, preset_dir);
  }
  // Flags go through the same validation as config keys.
  nlohmann::json o = nlohmann::json::object();
  if (f.out) o["out"] = *f.out;
  if (f.threads) o["threads"] = *f.threads;
  if (f.budget) o["budget"] = *f.budget;
  if (f.n) o["n"] = *f.n;
  if (f.n_min) o["n_min"] = *f.n_min;
  if (f.n_max) o["n_max"] = *f.n_max;
  if (f.depth) o["depth"] = *f.depth;
  if (f.eps) o["filter"]["eps"] = *f.eps;
  if (f.mode) o["filter"]["mode"] = *f.mode;
  if (f.sigma_range) o["sigma_range"] = *f.sigma_range;
  if (f.t_range) o["t_range"] = *f.t_range;
  if (f.weight_source) o["weight_source"] = *f.weight_source;
  if (f.sigma || f.t) o["s"] = {{"sigma", f.sigma.value_or(cfg.sigma.value_or(1.5))}, {"t", f.t.value_or(cfg.t.value_or(0.0))}};
  if (f.dimension) o["dimension"] = *f.dimension;
  merge_json(cfg, o, preset_dir);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level sets, measures, dimension and zeta partial sums of linear iterated function schemes"};
  Flags f;
  app.add_option("command", f.command, "levelset|measures|dimension|zeta|boundary|converge|chebyshev|oracle|selftest")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--preset", f.preset, "start from a shipped preset (cantor13, golden, plastic)");
  app.add_option("--preset-dir", f.preset_dir, "directory holding preset files");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--threads", f.threads, "worker threads");
  app.add_option("--budget", f.budget, "maximum distinct cylinders per level");
  app.add_option("--n", f.n, "level");
  app.add_option("--n-min", f.n_min, "first level for multi-level commands");
  app.add_option("--n-max", f.n_max, "last level for the dimension estimate");
  app.add_option("--depth", f.depth, "measure recursion depth");
  app.add_option("--eps", f.eps, "filter width");
  app.add_option("--mode", f.mode, "filter mode")->check(CLI::IsMember({"absolute", "relative", "none"}));
  app.add_option("--sigma-range", f.sigma_range, "a:b:step");
  app.add_option("--t-range", f.t_range, "a:b:count");
  app.add_option("--weight-source", f.weight_source, "cylinder weights")->check(CLI::IsMember({"word", "mu-lo", "mu-mid"}));
  app.add_option("--sigma", f.sigma, "real part of a single s");
  app.add_option("--t", f.t, "imaginary part of a single s");
  app.add_option("--dimension", f.dimension, "override the estimated D");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  const std::filesystem::path preset_dir = f.preset_dir.empty() ? default_preset_dir() : std::filesystem::path(f.preset_dir);
  RunConfig cfg;
  try {
    cfg = build_config(f, preset_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return run(f.command, cfg, std::cout, std::cerr, preset_dir);
}
