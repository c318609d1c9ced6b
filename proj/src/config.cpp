#include "bethe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace bethe {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  // std::from_chars for double is not available in every libstdc++ we target.
  std::string s(v);
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw DomainError("config key '" + std::string(key) + "': '" + s + "' is not a number");
  return d;
}

long long to_int(std::string_view key, std::string_view v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || v.empty())
    throw DomainError("config key '" + std::string(key) + "': '" + std::string(v) + "' is not an integer");
  return x;
}

std::vector<double> number_list(std::string_view key, std::string_view v, char sep) {
  std::vector<double> out;
  for (auto item : split(v, sep)) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DomainError("config key '" + std::string(key) + "': expected true/false");
}

} // namespace

Coupling parse_coupling(std::string_view text) {
  return Coupling::per_class(number_list("k", text, ','));
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  bool have_label = false;

  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::unordered_map<std::string, Setter> setters = {
      {"label", [&](auto, auto v) { cfg.label = CartanLabel::parse(v); have_label = true; }},
      {"k", [&](auto, auto v) {
         cfg.couplings.clear();
         for (auto item : split(v, ';')) cfg.couplings.push_back(parse_coupling(item));
       }},
      {"k_grid", [&](auto key, auto v) { cfg.k_grid = number_list(key, v, ','); }},
      {"k_grid_exponents", [&](auto key, auto v) {
         const auto dots = v.find("..");
         if (dots == std::string_view::npos) throw DomainError("k_grid_exponents expects 'first..last'");
         const auto lo = to_int(key, trim(v.substr(0, dots)));
         const auto hi = to_int(key, trim(v.substr(dots + 2)));
         if (hi < lo) throw DomainError("k_grid_exponents: last < first");
         cfg.k_grid.clear();
         for (auto j = lo; j <= hi; ++j) cfg.k_grid.push_back(std::ldexp(1.0, static_cast<int>(-j)));
       }},
      {"weights", [&](auto key, auto v) {
         cfg.weights.clear();
         for (auto item : split(v, ';')) {
           std::vector<int> c;
           for (auto x : split(item, ',')) c.push_back(static_cast<int>(to_int(key, x)));
           cfg.weights.push_back(std::move(c));
         }
       }},
      {"height", [&](auto key, auto v) { cfg.height = static_cast<int>(to_int(key, v)); }},
      {"count", [&](auto key, auto v) { cfg.count = static_cast<std::size_t>(to_int(key, v)); }},
      {"depth", [&](auto key, auto v) { cfg.depth = static_cast<int>(to_int(key, v)); }},
      {"min_depth", [&](auto key, auto v) { cfg.min_depth = static_cast<int>(to_int(key, v)); }},
      {"max_depth", [&](auto key, auto v) { cfg.max_depth = static_cast<int>(to_int(key, v)); }},
      {"quadrature", [&](auto, auto v) { cfg.quadrature = parse_rule_kind(std::string(v)); }},
      {"mc_nodes", [&](auto key, auto v) { cfg.mc_nodes = static_cast<std::size_t>(to_int(key, v)); }},
      {"seed", [&](auto key, auto v) { cfg.seed = static_cast<std::uint64_t>(to_int(key, v)); }},
      {"rank_cap", [&](auto key, auto v) { cfg.rank_cap = static_cast<std::size_t>(to_int(key, v)); }},
      {"tol", [&](auto key, auto v) { cfg.solver.tol = to_double(key, v); }},
      {"bae_tol", [&](auto key, auto v) { cfg.solver.bae_tol = to_double(key, v); }},
      {"max_iter", [&](auto key, auto v) { cfg.solver.max_iter = static_cast<int>(to_int(key, v)); }},
      {"certify", [&](auto key, auto v) { cfg.solver.certify = to_bool(key, v); }},
      {"perturbation", [&](auto key, auto v) { cfg.perturbation = to_double(key, v); }},
      {"wall_tol", [&](auto key, auto v) { cfg.wall_tol = to_double(key, v); }},
      {"contrast", [&](auto key, auto v) { cfg.contrast = to_double(key, v); }},
      {"pde_tol", [&](auto key, auto v) { cfg.pde_tol = to_double(key, v); }},
      {"norm_tol", [&](auto key, auto v) { cfg.norm_tol = to_double(key, v); }},
      {"orth_tol", [&](auto key, auto v) { cfg.orth_tol = to_double(key, v); }},
      {"limit_tol", [&](auto key, auto v) { cfg.limit_tol = to_double(key, v); }},
      {"c_tol", [&](auto key, auto v) { cfg.c_tol = to_double(key, v); }},
      {"phi_tol", [&](auto key, auto v) { cfg.phi_tol = to_double(key, v); }},
      {"detb_tol", [&](auto key, auto v) { cfg.detb_tol = to_double(key, v); }},
      {"probe_tol", [&](auto key, auto v) { cfg.probe_tol = to_double(key, v); }},
      {"probe_n", [&](auto key, auto v) {
         cfg.probe_n.clear();
         for (auto x : split(v, ',')) cfg.probe_n.push_back(static_cast<int>(to_int(key, x)));
       }},
      {"wall_samples", [&](auto key, auto v) { cfg.wall_samples = static_cast<std::size_t>(to_int(key, v)); }},
      {"interior_samples", [&](auto key, auto v) { cfg.interior_samples = static_cast<std::size_t>(to_int(key, v)); }},
      {"grid_points", [&](auto key, auto v) { cfg.grid_points = static_cast<std::size_t>(to_int(key, v)); }},
      {"grid_csv", [&](auto, auto v) { cfg.grid_csv = std::string(v); }},
      {"gram_csv", [&](auto, auto v) { cfg.gram_csv = std::string(v); }},
      {"rule_csv", [&](auto, auto v) { cfg.rule_csv = std::string(v); }},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw DomainError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key(trim(sv.substr(0, eq)));
    const auto value = trim(sv.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw DomainError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(key, value);
    cfg.entries.emplace_back(key, std::string(value));
  }
  if (!have_label) throw DomainError("config: missing required key 'label'");
  if (cfg.couplings.empty()) cfg.couplings.push_back(Coupling::uniform(1.0));
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  cfg.label.validate();
  const std::pair<const char*, double> positives[] = {
      {"tol", cfg.solver.tol},         {"bae_tol", cfg.solver.bae_tol},
      {"perturbation", cfg.perturbation}, {"wall_tol", cfg.wall_tol},
      {"contrast", cfg.contrast},      {"pde_tol", cfg.pde_tol},
      {"norm_tol", cfg.norm_tol},      {"orth_tol", cfg.orth_tol},
      {"limit_tol", cfg.limit_tol},    {"c_tol", cfg.c_tol},
      {"phi_tol", cfg.phi_tol},        {"detb_tol", cfg.detb_tol},
      {"probe_tol", cfg.probe_tol},
  };
  for (auto [name, v] : positives)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("config: '") + name + "' must be positive");
  if (cfg.solver.max_iter < 1) throw DomainError("config: 'max_iter' must be >= 1");
  if (cfg.height < 0) throw DomainError("config: 'height' must be >= 0");
  if (cfg.min_depth < 0 || cfg.max_depth < cfg.min_depth || cfg.max_depth > 20)
    throw DomainError("config: need 0 <= min_depth <= max_depth <= 20");
  if (cfg.depth && (*cfg.depth < 0 || *cfg.depth > 20)) throw DomainError("config: 'depth' must be in [0, 20]");
  if (cfg.mc_nodes < 1) throw DomainError("config: 'mc_nodes' must be >= 1");
  if (cfg.wall_samples < 1 || cfg.interior_samples < 1 || cfg.grid_points < 1)
    throw DomainError("config: sample counts must be >= 1");
  for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
    if (!(cfg.k_grid[i] > 0.0)) throw DomainError("config: k_grid values must be positive");
    if (i > 0 && !(cfg.k_grid[i] < cfg.k_grid[i - 1]))
      throw DomainError("config: k_grid must be strictly decreasing");
  }
  for (std::size_t i = 0; i < cfg.probe_n.size(); ++i) {
    if (cfg.probe_n[i] < 0) throw DomainError("config: probe_n entries must be >= 0");
    if (i > 0 && cfg.probe_n[i] <= cfg.probe_n[i - 1])
      throw DomainError("config: probe_n must be strictly increasing");
  }
  for (const auto& w : cfg.weights)
    if (static_cast<int>(w.size()) != cfg.label.rank)
      throw DomainError("config: each weight needs " + std::to_string(cfg.label.rank) + " coefficients");
  for (const auto& k : cfg.couplings)
    if (!k.is_zero() && k.values().size() == 2 && cfg.label.family != Family::B &&
        cfg.label.family != Family::C && cfg.label.family != Family::F && cfg.label.family != Family::G)
      throw DomainError("config: " + cfg.label.str() + " has one root length; give one coupling value");
}

} // namespace bethe
