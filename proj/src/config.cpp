#include "bipsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "bipsim/csv.hpp"
#include "bipsim/evolution.hpp"

namespace bipsim {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw ConfigError("key '" + key + "' (line " + std::to_string(line) + "): " + what);
}

double parse_double_value(const std::string& key, int line, const std::string& text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    fail(key, line, "expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_int_value(const std::string& key, int line, const std::string& text) {
  long long v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    fail(key, line, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64_value(const std::string& key, int line, const std::string& text) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    fail(key, line, "expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

void expect_one_of(const std::string& key, int line, const std::string& value,
                   std::initializer_list<std::string_view> allowed) {
  for (auto a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (auto a : allowed) {
    if (!list.empty()) list += ", ";
    list += a;
  }
  fail(key, line, "must be one of {" + list + "}, got '" + value + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;

  using Setter = std::function<void(const std::string& key, int line, const std::string& value)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"seed", [&](auto& k, int l, auto& v) { cfg.seed = parse_u64_value(k, l, v); }},
      {"output_dir",
       [&](auto& k, int l, auto& v) {
         if (v.empty()) fail(k, l, "must not be empty");
         cfg.output_dir = v;
       }},
      {"grid.x_min", [&](auto& k, int l, auto& v) { cfg.grid_x_min = parse_double_value(k, l, v); }},
      {"grid.x_max", [&](auto& k, int l, auto& v) { cfg.grid_x_max = parse_double_value(k, l, v); }},
      {"grid.n_points",
       [&](auto& k, int l, auto& v) {
         cfg.grid_n_points = static_cast<int>(parse_int_value(k, l, v));
       }},
      {"constants.hbar", [&](auto& k, int l, auto& v) { cfg.hbar = parse_double_value(k, l, v); }},
      {"constants.mass", [&](auto& k, int l, auto& v) { cfg.mass = parse_double_value(k, l, v); }},
      {"potential.kind",
       [&](auto& k, int l, auto& v) {
         expect_one_of(k, l, v, {"infinite_well", "harmonic", "double_well", "tabulated"});
         cfg.potential_kind = v;
       }},
      {"potential.omega",
       [&](auto& k, int l, auto& v) { cfg.potential_omega = parse_double_value(k, l, v); }},
      {"potential.barrier_height",
       [&](auto& k, int l, auto& v) { cfg.potential_barrier_height = parse_double_value(k, l, v); }},
      {"potential.barrier_half_width",
       [&](auto& k, int l, auto& v) {
         cfg.potential_barrier_half_width = parse_double_value(k, l, v);
       }},
      {"potential.values",
       [&](auto& k, int l, auto& v) {
         cfg.potential_values.clear();
         for (const auto& item : split_list(v)) {
           cfg.potential_values.push_back(parse_double_value(k, l, item));
         }
       }},
      {"spectrum.count",
       [&](auto& k, int l, auto& v) {
         cfg.spectrum_count = static_cast<int>(parse_int_value(k, l, v));
       }},
      {"evolution.equation",
       [&](auto& k, int l, auto& v) {
         expect_one_of(k, l, v, {"schrodinger", "bipartite"});
         cfg.evolution_equation = v;
       }},
      {"evolution.dt",
       [&](auto& k, int l, auto& v) { cfg.evolution_dt = parse_double_value(k, l, v); }},
      {"evolution.n_steps",
       [&](auto& k, int l, auto& v) { cfg.evolution_n_steps = parse_int_value(k, l, v); }},
      {"evolution.record_every",
       [&](auto& k, int l, auto& v) { cfg.evolution_record_every = parse_int_value(k, l, v); }},
      {"initial.kind",
       [&](auto& k, int l, auto& v) {
         expect_one_of(k, l, v, {"levels", "gaussian"});
         cfg.initial_kind = v;
       }},
      {"initial.levels",
       [&](auto& k, int l, auto& v) {
         cfg.initial_levels.clear();
         for (const auto& item : split_list(v)) {
           cfg.initial_levels.push_back(static_cast<int>(parse_int_value(k, l, item)));
         }
         if (cfg.initial_levels.empty()) fail(k, l, "needs at least one level index");
       }},
      {"initial.center",
       [&](auto& k, int l, auto& v) { cfg.initial_center = parse_double_value(k, l, v); }},
      {"initial.width",
       [&](auto& k, int l, auto& v) { cfg.initial_width = parse_double_value(k, l, v); }},
      {"initial.momentum",
       [&](auto& k, int l, auto& v) { cfg.initial_momentum = parse_double_value(k, l, v); }},
      {"modes.kind",
       [&](auto& k, int l, auto& v) {
         expect_one_of(k, l, v, {"screen", "packets"});
         cfg.modes_kind = v;
       }},
      {"modes.separation",
       [&](auto& k, int l, auto& v) { cfg.modes_separation = parse_double_value(k, l, v); }},
      {"modes.width",
       [&](auto& k, int l, auto& v) { cfg.modes_width = parse_double_value(k, l, v); }},
      {"modes.tilt",
       [&](auto& k, int l, auto& v) { cfg.modes_tilt = parse_double_value(k, l, v); }},
      {"modes.envelope_width",
       [&](auto& k, int l, auto& v) { cfg.modes_envelope_width = parse_double_value(k, l, v); }},
      {"scan.lambdas",
       [&](auto& k, int l, auto& v) {
         cfg.scan_lambdas.clear();
         for (const auto& item : split_list(v)) {
           cfg.scan_lambdas.push_back(parse_double_value(k, l, item));
         }
         if (cfg.scan_lambdas.empty()) fail(k, l, "needs at least one lambda");
       }},
      {"gaps.pairs",
       [&](auto& k, int l, auto& v) {
         cfg.gap_pairs.clear();
         for (const auto& item : split_list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string::npos) {
             fail(k, l, "pairs look like 'a:b', got '" + item + "'");
           }
           const int a = static_cast<int>(parse_int_value(k, l, trim(item.substr(0, colon))));
           const int b = static_cast<int>(parse_int_value(k, l, trim(item.substr(colon + 1))));
           cfg.gap_pairs.emplace_back(a, b);
         }
         if (cfg.gap_pairs.empty()) fail(k, l, "needs at least one pair");
       }},
      {"collapse.lambda",
       [&](auto& k, int l, auto& v) { cfg.collapse_lambda = parse_double_value(k, l, v); }},
      {"collapse.samples",
       [&](auto& k, int l, auto& v) { cfg.collapse_samples = parse_int_value(k, l, v); }},
  };

  std::map<std::string, int> seen;
  std::istringstream stream(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::string line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }

    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown key '" + key + "' (line " + std::to_string(line_no) + ")");
    }
    if (const auto [prev, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ConfigError("duplicate key '" + key + "' (lines " + std::to_string(prev->second) +
                        " and " + std::to_string(line_no) + ")");
    }
    it->second(key, line_no, value);
  }

  // Surface invariant breaches at parse time, not first use.
  try {
    const Grid1D grid = cfg.make_grid();
    const PhysicalConstants constants = cfg.make_constants();
    cfg.make_potential().evaluate(grid, constants);
    EvolutionParams params;
    params.dt = cfg.evolution_dt;
    params.n_steps = cfg.evolution_n_steps;
    params.record_every = cfg.evolution_record_every;
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (cfg.spectrum_count < 1) {
    throw ConfigError("invalid configuration: spectrum.count must be at least 1");
  }
  if (cfg.collapse_samples < 1) {
    throw ConfigError("invalid configuration: collapse.samples must be at least 1");
  }
  for (double lambda : cfg.scan_lambdas) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw ConfigError("invalid configuration: scan.lambdas entries must lie in [0, 1]");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Grid1D RunConfig::make_grid() const { return Grid1D(grid_x_min, grid_x_max, grid_n_points); }

PhysicalConstants RunConfig::make_constants() const { return PhysicalConstants(hbar, mass); }

PotentialSpec RunConfig::make_potential() const {
  if (potential_kind == "infinite_well") return PotentialSpec::infinite_well();
  if (potential_kind == "harmonic") return PotentialSpec::harmonic(potential_omega);
  if (potential_kind == "double_well") {
    return PotentialSpec::double_well(potential_barrier_height, potential_barrier_half_width);
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(potential_values.size()));
  for (std::size_t i = 0; i < potential_values.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = potential_values[i];
  }
  return PotentialSpec::tabulated(std::move(values));
}

double RunConfig::resolved_tilt() const {
  if (modes_tilt > 0.0) return modes_tilt;
  return 13.0 * std::numbers::pi / (grid_x_max - grid_x_min);
}

double RunConfig::resolved_envelope_width() const {
  return modes_envelope_width > 0.0 ? modes_envelope_width : 2.5 * (grid_x_max - grid_x_min);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  auto join_doubles = [](const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ',';
      out += format_double(xs[i]);
    }
    return out;
  };
  auto join_ints = [](const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(xs[i]);
    }
    return out;
  };
  std::string pairs;
  for (std::size_t i = 0; i < gap_pairs.size(); ++i) {
    if (i) pairs += ',';
    pairs += std::to_string(gap_pairs[i].first) + ":" + std::to_string(gap_pairs[i].second);
  }

  std::vector<std::pair<std::string, std::string>> kv = {
      {"collapse.lambda", format_double(collapse_lambda)},
      {"collapse.samples", std::to_string(collapse_samples)},
      {"constants.hbar", format_double(hbar)},
      {"constants.mass", format_double(mass)},
      {"evolution.dt", format_double(evolution_dt)},
      {"evolution.equation", evolution_equation},
      {"evolution.n_steps", std::to_string(evolution_n_steps)},
      {"evolution.record_every", std::to_string(evolution_record_every)},
      {"gaps.pairs", pairs},
      {"grid.n_points", std::to_string(grid_n_points)},
      {"grid.x_max", format_double(grid_x_max)},
      {"grid.x_min", format_double(grid_x_min)},
      {"initial.center", format_double(initial_center)},
      {"initial.kind", initial_kind},
      {"initial.levels", join_ints(initial_levels)},
      {"initial.momentum", format_double(initial_momentum)},
      {"initial.width", format_double(initial_width)},
      {"modes.envelope_width", format_double(resolved_envelope_width())},
      {"modes.kind", modes_kind},
      {"modes.separation", format_double(modes_separation)},
      {"modes.tilt", format_double(resolved_tilt())},
      {"modes.width", format_double(modes_width)},
      {"output_dir", output_dir},
      {"potential.barrier_half_width", format_double(potential_barrier_half_width)},
      {"potential.barrier_height", format_double(potential_barrier_height)},
      {"potential.kind", potential_kind},
      {"potential.omega", format_double(potential_omega)},
      {"potential.values", join_doubles(potential_values)},
      {"scan.lambdas", join_doubles(scan_lambdas)},
      {"seed", std::to_string(seed)},
      {"spectrum.count", std::to_string(spectrum_count)},
  };
  return kv;
}

}  // namespace bipsim
