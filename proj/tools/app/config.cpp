#include "app/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ifszeta::app {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "not a number: '" + text + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Numbers are read through their JSON text so decimals stay exact.
Rational json_rational(const json& v, const std::string& field) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return parse_rational(v.dump());
    if (v.is_number_float()) return parse_rational(v.dump());
  } catch (const Error&) {
    throw ConfigError(field, "not a rational number: " + v.dump());
  }
  throw ConfigError(field, "expected a rational number (\"p/q\" or decimal), got " + v.dump());
}

template <class T>
T json_unsigned(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(field, "expected a nonnegative integer, got " + v.dump());
  }
  return static_cast<T>(v.get<unsigned long long>());
}

double json_double(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>(), field);
  throw ConfigError(field, "expected a number, got " + v.dump());
}

std::string json_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

const json& json_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array, got " + v.dump());
  return v;
}

void merge_rho(RhoSpec& rho, const json& j) {
  if (!j.is_object()) throw ConfigError("rho", "expected an object with 'rational' or 'poly' and 'iso'");
  if (j.contains("rational")) {
    if (j.contains("poly") || j.contains("iso")) throw ConfigError("rho", "give either 'rational' or 'poly'/'iso'");
    rho = RhoSpec{};
    rho.rational = json_rational(j.at("rational"), "rho.rational");
    return;
  }
  if (!j.contains("poly") || !j.contains("iso")) throw ConfigError("rho", "needs 'rational' or both 'poly' and 'iso'");
  rho = RhoSpec{};
  for (const auto& c : json_array(j.at("poly"), "rho.poly")) {
    if (!c.is_number_integer() && !c.is_string()) throw ConfigError("rho.poly", "coefficients must be integers");
    try {
      rho.poly.emplace_back(c.is_string() ? c.get<std::string>() : c.dump(), 10);
    } catch (const std::invalid_argument&) {
      throw ConfigError("rho.poly", "coefficients must be integers, got " + c.dump());
    }
  }
  const auto& iso = json_array(j.at("iso"), "rho.iso");
  if (iso.size() != 2) throw ConfigError("rho.iso", "expected [lo, hi]");
  rho.iso_lo = json_rational(iso[0], "rho.iso");
  rho.iso_hi = json_rational(iso[1], "rho.iso");
}

}  // namespace

StepRange parse_step_range(const std::string& text, const std::string& field) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError(field, "expected a:b:step, got '" + text + "'");
  StepRange r{parse_double(parts[0], field), parse_double(parts[1], field), parse_double(parts[2], field)};
  if (!(r.step > 0) || r.b < r.a) throw ConfigError(field, "need a <= b and step > 0");
  return r;
}

CountRange parse_count_range(const std::string& text, const std::string& field) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError(field, "expected a:b:count, got '" + text + "'");
  const double count = parse_double(parts[2], field);
  if (!(count >= 1) || count != std::floor(count)) throw ConfigError(field, "count must be a positive integer");
  CountRange r{parse_double(parts[0], field), parse_double(parts[1], field), static_cast<std::size_t>(count)};
  if (r.b < r.a) throw ConfigError(field, "need a <= b");
  return r;
}

std::string format_range(const StepRange& r) {
  return format_double(r.a) + ":" + format_double(r.b) + ":" + format_double(r.step);
}

std::string format_range(const CountRange& r) {
  return format_double(r.a) + ":" + format_double(r.b) + ":" + std::to_string(r.count);
}

EnumerationOptions RunConfig::enumeration() const {
  EnumerationOptions o;
  o.budget = budget;
  o.threads = threads;
  return o;
}

std::string to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::none: return "none";
    case FilterMode::absolute: return "absolute";
    case FilterMode::relative: return "relative";
  }
  return "none";
}

std::string to_string(WeightSource source) {
  switch (source) {
    case WeightSource::word_weight: return "word";
    case WeightSource::measure_lo: return "mu-lo";
    case WeightSource::measure_mid: return "mu-mid";
  }
  return "word";
}

FilterMode parse_filter_mode(const std::string& text) {
  if (text == "none") return FilterMode::none;
  if (text == "absolute") return FilterMode::absolute;
  if (text == "relative") return FilterMode::relative;
  throw ConfigError("filter.mode", "expected absolute, relative or none, got '" + text + "'");
}

WeightSource parse_weight_source(const std::string& text) {
  if (text == "word") return WeightSource::word_weight;
  if (text == "mu-lo") return WeightSource::measure_lo;
  if (text == "mu-mid") return WeightSource::measure_mid;
  throw ConfigError("weight_source", "expected word, mu-lo or mu-mid, got '" + text + "'");
}

std::filesystem::path default_preset_dir() {
  if (const char* env = std::getenv("IFSZETA_PRESET_DIR"); env && *env) return env;
#ifdef IFSZETA_PRESET_DIR
  if (std::filesystem::is_directory(IFSZETA_PRESET_DIR)) return IFSZETA_PRESET_DIR;
#endif
  // Installed layout: <prefix>/bin/ifszeta and <prefix>/share/ifszeta/presets.
  std::error_code ec;
  const auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const auto installed = exe.parent_path().parent_path() / "share" / "ifszeta" / "presets";
    if (std::filesystem::is_directory(installed)) return installed;
  }
  return "presets";
}

void merge_json(RunConfig& cfg, const json& j, const std::filesystem::path& preset_dir) {
  if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  static const std::vector<std::string> known{
      "preset", "rho",   "digits",     "probs",     "n",       "n_min",  "n_max",      "depth",
      "filter", "weight_source", "dimension", "sigma_range", "t_range", "s", "eps_list", "period_max",
      "out",    "threads", "budget"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key");
  }
  if (j.contains("preset")) {
    const std::string name = json_string(j.at("preset"), "preset");
    cfg = load_preset(name, preset_dir);
    cfg.preset = name;
  }
  if (j.contains("rho")) merge_rho(cfg.rho, j.at("rho"));
  if (j.contains("digits")) {
    cfg.digits.clear();
    for (const auto& d : json_array(j.at("digits"), "digits")) cfg.digits.push_back(json_unsigned<std::uint64_t>(d, "digits"));
  }
  if (j.contains("probs")) {
    cfg.probs.clear();
    for (const auto& p : json_array(j.at("probs"), "probs")) cfg.probs.push_back(json_rational(p, "probs"));
  }
  if (j.contains("n")) cfg.n = json_unsigned<unsigned>(j.at("n"), "n");
  if (j.contains("n_min")) cfg.n_min = json_unsigned<unsigned>(j.at("n_min"), "n_min");
  if (j.contains("n_max")) cfg.n_max = json_unsigned<unsigned>(j.at("n_max"), "n_max");
  if (j.contains("depth")) {
    if (j.at("depth").is_null()) cfg.depth.reset();
    else cfg.depth = json_unsigned<unsigned>(j.at("depth"), "depth");
  }
  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    if (!f.is_object()) throw ConfigError("filter", "expected {\"mode\": ..., \"eps\": ...}");
    if (f.contains("mode")) cfg.filter_mode = parse_filter_mode(json_string(f.at("mode"), "filter.mode"));
    if (f.contains("eps")) cfg.eps = json_double(f.at("eps"), "filter.eps");
  }
  if (j.contains("weight_source")) cfg.weight_source = parse_weight_source(json_string(j.at("weight_source"), "weight_source"));
  if (j.contains("dimension")) {
    if (j.at("dimension").is_null()) cfg.dimension.reset();
    else cfg.dimension = json_double(j.at("dimension"), "dimension");
  }
  if (j.contains("sigma_range")) cfg.sigma_range = parse_step_range(json_string(j.at("sigma_range"), "sigma_range"), "sigma_range");
  if (j.contains("t_range")) cfg.t_range = parse_count_range(json_string(j.at("t_range"), "t_range"), "t_range");
  if (j.contains("s")) {
    const auto& s = j.at("s");
    if (s.is_null()) {
      cfg.sigma.reset();
      cfg.t.reset();
    } else {
      if (!s.is_object() || !s.contains("sigma")) throw ConfigError("s", "expected {\"sigma\": x, \"t\": y}");
      cfg.sigma = json_double(s.at("sigma"), "s.sigma");
      cfg.t = s.contains("t") ? json_double(s.at("t"), "s.t") : 0.0;
    }
  }
  if (j.contains("eps_list")) {
    cfg.eps_list.clear();
    for (const auto& e : json_array(j.at("eps_list"), "eps_list")) cfg.eps_list.push_back(json_double(e, "eps_list"));
  }
  if (j.contains("period_max")) cfg.period_max = json_double(j.at("period_max"), "period_max");
  if (j.contains("out")) cfg.out = json_string(j.at("out"), "out");
  if (j.contains("threads")) cfg.threads = json_unsigned<unsigned>(j.at("threads"), "threads");
  if (j.contains("budget")) cfg.budget = json_unsigned<std::size_t>(j.at("budget"), "budget");

  if (cfg.threads == 0) throw ConfigError("threads", "must be at least 1");
  if (cfg.budget == 0) throw ConfigError("budget", "must be positive");
  if (cfg.n == 0) throw ConfigError("n", "must be at least 1");
  if (cfg.n_min == 0) throw ConfigError("n_min", "must be at least 1");
  if (cfg.filter_mode != FilterMode::none && !(cfg.eps > 0)) throw ConfigError("filter.eps", "must be positive");
  if (cfg.dimension && !(*cfg.dimension > 0 && *cfg.dimension <= 1)) throw ConfigError("dimension", "must lie in (0, 1]");
  for (double e : cfg.eps_list) {
    if (!(e > 0)) throw ConfigError("eps_list", "entries must be positive");
  }
  if (!(cfg.period_max > 0)) throw ConfigError("period_max", "must be positive");
}

json to_json(const RunConfig& cfg) {
  json j;
  if (!cfg.preset.empty()) j["preset_name"] = cfg.preset;
  if (cfg.rho.rational) {
    j["rho"] = {{"rational", format_rational(*cfg.rho.rational)}};
  } else {
    json poly = json::array();
    for (const auto& c : cfg.rho.poly) {
      if (c.fits_slong_p()) poly.push_back(c.get_si());
      else poly.push_back(c.get_str());
    }
    j["rho"] = {{"poly", poly}, {"iso", {format_rational(cfg.rho.iso_lo), format_rational(cfg.rho.iso_hi)}}};
  }
  j["digits"] = cfg.digits;
  json probs = json::array();
  for (const auto& p : cfg.probs) probs.push_back(format_rational(p));
  j["probs"] = probs;
  j["n"] = cfg.n;
  j["n_min"] = cfg.n_min;
  j["n_max"] = cfg.n_max;
  j["depth"] = cfg.depth ? json(*cfg.depth) : json(nullptr);
  j["filter"] = {{"mode", to_string(cfg.filter_mode)}, {"eps", cfg.eps}};
  j["weight_source"] = to_string(cfg.weight_source);
  j["dimension"] = cfg.dimension ? json(*cfg.dimension) : json(nullptr);
  j["sigma_range"] = format_range(cfg.sigma_range);
  j["t_range"] = format_range(cfg.t_range);
  j["s"] = cfg.sigma ? json{{"sigma", *cfg.sigma}, {"t", cfg.t.value_or(0.0)}} : json(nullptr);
  j["eps_list"] = cfg.eps_list;
  j["period_max"] = cfg.period_max;
  j["out"] = cfg.out;
  j["threads"] = cfg.threads;
  j["budget"] = cfg.budget;
  return j;
}

RunConfig from_json(const json& j, const std::filesystem::path& preset_dir) {
  RunConfig cfg;
  json copy = j;
  std::string name;
  if (copy.is_object() && copy.contains("preset_name")) {
    name = json_string(copy.at("preset_name"), "preset_name");
    copy.erase("preset_name");
  }
  merge_json(cfg, copy, preset_dir);
  if (!name.empty()) cfg.preset = name;
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path, const std::filesystem::path& preset_dir) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j, preset_dir);
}

RunConfig load_preset(const std::string& name, const std::filesystem::path& preset_dir) {
  const auto path = preset_dir / (name + ".json");
  std::ifstream in(path);
  if (!in) throw ConfigError("preset", "unknown preset '" + name + "' (looked in " + preset_dir.string() + ")");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("preset", "invalid preset file " + path.string() + ": " + e.what());
  }
  if (j.contains("preset")) throw ConfigError("preset", "preset files may not reference other presets");
  RunConfig cfg;
  merge_json(cfg, j, preset_dir);
  cfg.preset = name;
  make_params(cfg);
  return cfg;
}

IfsParams make_params(const RunConfig& cfg) {
  AlgebraicContext ctx = [&] {
    try {
      if (cfg.rho.rational) return AlgebraicContext::rational(*cfg.rho.rational);
      if (cfg.rho.poly.empty()) throw ConfigError("rho", "missing; give 'rational' or 'poly' and 'iso'");
      return AlgebraicContext::make(cfg.rho.poly, cfg.rho.iso_lo, cfg.rho.iso_hi);
    } catch (const Error& e) {
      throw ConfigError(e.field() == "rho" ? "rho" : "rho." + e.field(), e.what());
    }
  }();
  try {
    return IfsParams::make(std::move(ctx), cfg.digits, cfg.probs);
  } catch (const Error& e) {
    throw ConfigError(e.field(), e.what());
  }
}

}  // namespace ifszeta::app
