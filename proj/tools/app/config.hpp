#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifszeta/ifs.hpp"
#include "ifszeta/zeta.hpp"

namespace ifszeta::app {

// A configuration problem; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RhoSpec {
  // Either a rational ratio or a polynomial with an isolating interval.
  std::optional<Rational> rational;
  std::vector<Integer> poly;
  Rational iso_lo;
  Rational iso_hi;

  bool operator==(const RhoSpec&) const = default;
};

struct StepRange {
  double a = 0;
  double b = 0;
  double step = 1;
  bool operator==(const StepRange&) const = default;
};

struct CountRange {
  double a = 0;
  double b = 0;
  std::size_t count = 1;
  bool operator==(const CountRange&) const = default;
};

StepRange parse_step_range(const std::string& text, const std::string& field);
CountRange parse_count_range(const std::string& text, const std::string& field);
std::string format_range(const StepRange& r);
std::string format_range(const CountRange& r);

struct RunConfig {
  std::string preset;
  RhoSpec rho;
  std::vector<std::uint64_t> digits;
  std::vector<Rational> probs;
  unsigned n = 8;
  unsigned n_min = 1;
  unsigned n_max = 8;
  std::optional<unsigned> depth;
  FilterMode filter_mode = FilterMode::none;
  double eps = 0.1;
  WeightSource weight_source = WeightSource::word_weight;
  std::optional<double> dimension;
  StepRange sigma_range{0.25, 2.0, 0.25};
  CountRange t_range{-10.0, 10.0, 64};
  std::optional<double> sigma;
  std::optional<double> t;
  std::vector<double> eps_list{0.1, 0.01, 0.001};
  double period_max = 20;
  std::string out = "out";
  unsigned threads = 1;
  std::size_t budget = 10'000'000;

  bool operator==(const RunConfig&) const = default;

  FilterSpec filter() const { return {filter_mode, eps}; }
  EnumerationOptions enumeration() const;
};

// Applies every key present in j on top of cfg. A "preset" key loads that
// preset from preset_dir first.
void merge_json(RunConfig& cfg, const nlohmann::json& j, const std::filesystem::path& preset_dir);
nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& preset_dir);

RunConfig load_config_file(const std::filesystem::path& path, const std::filesystem::path& preset_dir);
RunConfig load_preset(const std::string& name, const std::filesystem::path& preset_dir);

// Builds and validates the scheme; library validation errors are rethrown
// as ConfigError naming the field.
IfsParams make_params(const RunConfig& cfg);

std::string to_string(FilterMode mode);
std::string to_string(WeightSource source);
FilterMode parse_filter_mode(const std::string& text);
WeightSource parse_weight_source(const std::string& text);

std::filesystem::path default_preset_dir();

}  // namespace ifszeta::app
