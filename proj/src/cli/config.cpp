#include "sgflab/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sgflab/errors.hpp"
#include "sgflab/format.hpp"

namespace sgflab::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = s.find(',');
    out.push_back(trim(s.substr(0, c)));
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

double to_double(std::string_view text, std::string_view field) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  return v;
}

long long to_int(std::string_view text, std::string_view field) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ConfigError(std::string(field), "expected an integer, got '" + std::string(text) + "'");
  return v;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"study", "", "simulate | estimate | order | theta-sweep | coco | conjecture | check"},
      {"seed", "0xC0FFEE", "64-bit master seed (decimal or 0x hex)"},
      {"out", "sgflab-out", "output directory"},
      {"problem.name", "quadratic", "smooth part f: quadratic | power_norm"},
      {"problem.dim", "1", "dimension d"},
      {"problem.eigenvalues", "1", "quadratic curvatures (one value is broadcast)"},
      {"problem.center", "0", "quadratic center (one value is broadcast)"},
      {"problem.r", "4", "power_norm exponent r >= 2"},
      {"problem.radius", "1", "power_norm ball on which L is valid"},
      {"problem.g", "none", "nonsmooth part g: none | abs_l1 | indicator_box | quadratic_term"},
      {"problem.g_weight", "1", "abs_l1 weight"},
      {"problem.g_lo", "-1", "indicator_box lower corner"},
      {"problem.g_hi", "1", "indicator_box upper corner"},
      {"problem.g_c", "1", "quadratic_term modulus c"},
      {"problem.drift", "auto", "auto | gradient | smoothed | operator"},
      {"problem.theta", "0.1", "Moreau parameter for the smoothed drift"},
      {"problem.mu", "1", "forward-backward step for the operator drift"},
      {"vol.kind", "auto", "auto | constant | decreasing | multiplicative"},
      {"vol.sigma0", "0.5", "noise level sigma0"},
      {"vol.alpha", "0", "decay exponent of (1+t)^-alpha"},
      {"vol.m", "0", "Brownian dimension (0: same as d)"},
      {"vol.anchor", "", "multiplicative noise anchor (default: the solution)"},
      {"sim.x0", "1", "initial state (one value is broadcast)"},
      {"sim.T", "2", "horizon"},
      {"sim.level", "10", "grid level, h = T 2^-level"},
      {"sim.stride", "1", "record every stride steps"},
      {"sim.paths", "1000", "number of Monte-Carlo paths"},
      {"estimate.quantity", "", "quantity tag (default depends on study and drift)"},
      {"estimate.bound", "auto", "auto | none | ergodic_convex | strongly_convex | strongly_convex_split | "
                                 "pointwise_beta | ergodic_distance_eb | cocoercive_ergodic | cocoercive_strong | "
                                 "moreau_composite"},
      {"estimate.decay_check", "false", "also run the pathwise t*gap decay proxy"},
      {"bound.lambda", "0.5", "split parameter of the strongly convex bound"},
      {"fit.model", "none", "none | power | exponential"},
      {"fit.t_lo", "", "fit window start (default: 10% of T)"},
      {"fit.t_hi", "", "fit window end (default: T)"},
      {"order.levels", "6,7,8,9,10", "coarse levels of the strong-order study"},
      {"order.ref_level", "13", "reference level of the strong-order study"},
      {"sweep.thetas", "0.5,0.1,0.02", "theta grid"},
      {"sweep.epsilon", "0.01", "target accuracy for the recommended schedule"},
      {"coco.mus", "0.5,1,1.5", "forward-backward steps"},
      {"coco.samples", "10000", "random pairs per cocoercivity check"},
      {"conj.r", "4", "power exponent of the conjecture study"},
      {"check.samples", "1000", "samples per invariant"},
  };
  return keys;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : config_keys())
    if (k.key == key) return &k;
  return nullptr;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("", "line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  if (!find_key(key)) throw ConfigError(std::string(key), "unknown configuration key");
  values_[std::string(key)] = std::string(trim(value));
}

void ExperimentConfig::set_number(std::string_view key, double value) { set(key, format_number(value)); }

bool ExperimentConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::string ExperimentConfig::get(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError(std::string(key), "unknown configuration key");
  return std::string(spec->default_value);
}

double ExperimentConfig::get_double(std::string_view key) const { return to_double(get(key), key); }

long long ExperimentConfig::get_int(std::string_view key) const { return to_int(get(key), key); }

std::uint64_t ExperimentConfig::get_u64(std::string_view key) const { return parse_seed(get(key), key); }

bool ExperimentConfig::get_bool(std::string_view key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + v + "'");
}

std::vector<double> ExperimentConfig::get_doubles(std::string_view key) const {
  const std::string v = get(key);
  std::vector<double> out;
  if (v.empty()) return out;
  for (auto item : split_list(v)) out.push_back(to_double(item, key));
  return out;
}

std::vector<int> ExperimentConfig::get_ints(std::string_view key) const {
  const std::string v = get(key);
  std::vector<int> out;
  if (v.empty()) return out;
  for (auto item : split_list(v)) out.push_back(static_cast<int>(to_int(item, key)));
  return out;
}

std::uint64_t parse_seed(std::string_view text, std::string_view field) {
  text = trim(text);
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v, base);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ConfigError(std::string(field), "expected a 64-bit unsigned integer, got '" + std::string(text) + "'");
  return v;
}

}  // namespace sgflab::cli
