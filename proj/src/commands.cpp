#include "bipsim/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bipsim/analysis.hpp"
#include "bipsim/csv.hpp"
#include "bipsim/evolution.hpp"
#include "bipsim/experiments.hpp"
#include "bipsim/sampling.hpp"
#include "bipsim/tolerances.hpp"
#include "bipsim/version.hpp"

namespace bipsim {

namespace {

namespace fs = std::filesystem;
using Note = std::pair<std::string, std::string>;

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

Spectrum solve_for_config(const RunConfig& cfg, int count) {
  const Grid1D grid = cfg.make_grid();
  const PhysicalConstants constants = cfg.make_constants();
  const DiscreteHamiltonian h = build_hamiltonian(grid, cfg.make_potential(), constants);
  return solve_spectrum(h, count);
}

int required_level_count(const std::vector<int>& levels, const char* key) {
  int top = -1;
  for (int level : levels) {
    if (level < 0) {
      throw ConfigError(std::string(key) + ": level indices must be nonnegative, got " +
                        std::to_string(level));
    }
    top = std::max(top, level);
  }
  return top + 1;
}

ScalarField superposition_of_levels(const Spectrum& spectrum, const std::vector<int>& levels) {
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(spectrum.grid.n_points());
  for (int level : levels) values += spectrum.states[static_cast<std::size_t>(level)].values();
  return normalized(ScalarField(spectrum.grid, std::move(values)));
}

ScalarField gaussian_initial(const Grid1D& grid, const RunConfig& cfg) {
  if (!(cfg.initial_width > 0.0)) {
    throw ConfigError("initial.width: must be positive");
  }
  Eigen::VectorXcd values(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) {
    const double d = grid.x(i) - cfg.initial_center;
    const double envelope = std::exp(-d * d / (2.0 * cfg.initial_width * cfg.initial_width));
    values[i] = envelope * std::polar(1.0, cfg.initial_momentum * grid.x(i));
  }
  values[0] = 0.0;
  values[grid.n_points() - 1] = 0.0;
  return normalized(ScalarField(grid, std::move(values)));
}

ScalarField initial_scalar(const RunConfig& cfg, const Spectrum* spectrum) {
  if (cfg.initial_kind == "gaussian") return gaussian_initial(cfg.make_grid(), cfg);
  return superposition_of_levels(*spectrum, cfg.initial_levels);
}

double kernel_entropy_of_matrix(const Eigen::MatrixXcd& values, double spacing) {
  const Eigen::MatrixXcd weighted = values * spacing;
  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(weighted).singularValues();
  return entropy_from_weights(sigma.cwiseAbs2());
}

std::pair<ScalarField, ScalarField> modes_for_config(const RunConfig& cfg) {
  const Grid1D grid = cfg.make_grid();
  if (cfg.modes_kind == "packets") {
    return make_two_slit_modes(grid, cfg.modes_separation, cfg.modes_width);
  }
  return make_screen_modes(grid, cfg.resolved_tilt(), cfg.resolved_envelope_width());
}

void write_manifest(const fs::path& path, std::string_view command, double wall_seconds,
                    const std::vector<Note>& notes, const RunConfig& cfg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "tool.version = " << kVersion << '\n';
  out << "tool.command = " << command << '\n';
  out << "run.timestamp = " << iso_timestamp_utc() << '\n';
  out << "run.wall_seconds = " << format_double(wall_seconds) << '\n';
  for (const auto& [key, value] : notes) out << key << " = " << value << '\n';
  for (const auto& [key, value] : cfg.echo()) out << "config." << key << " = " << value << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void run_eigs(const RunConfig& cfg, const fs::path& out_dir, std::vector<Note>& notes,
              RunResult& result) {
  const Spectrum spectrum = solve_for_config(cfg, cfg.spectrum_count);
  const int k = spectrum.count();

  const fs::path spectrum_path = out_dir / "spectrum.csv";
  {
    CsvWriter writer(spectrum_path, {"level", "energy"});
    for (int n = 0; n < k; ++n) {
      writer.row({static_cast<long long>(n), spectrum.energies[n]});
    }
    writer.close();
  }
  result.outputs.push_back(spectrum_path);

  const fs::path states_path = out_dir / "states.csv";
  {
    std::vector<std::string> columns = {"x"};
    for (int n = 0; n < k; ++n) columns.push_back("state_" + std::to_string(n));
    CsvWriter writer(states_path, columns);
    for (int i = 0; i < spectrum.grid.n_points(); ++i) {
      std::vector<CsvCell> cells;
      cells.reserve(static_cast<std::size_t>(k) + 1);
      cells.emplace_back(spectrum.grid.x(i));
      for (int n = 0; n < k; ++n) {
        cells.emplace_back(spectrum.states[static_cast<std::size_t>(n)].values()[i].real());
      }
      writer.row(cells);
    }
    writer.close();
  }
  result.outputs.push_back(states_path);

  bool ascending = true;
  for (int n = 0; n + 1 < k; ++n) {
    if (!(spectrum.energies[n] < spectrum.energies[n + 1])) ascending = false;
  }
  double orthonormality_defect = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const Complex overlap = inner_product(spectrum.states[static_cast<std::size_t>(i)],
                                            spectrum.states[static_cast<std::size_t>(j)]);
      const double target = (i == j) ? 1.0 : 0.0;
      orthonormality_defect = std::max(orthonormality_defect, std::abs(overlap - target));
    }
  }
  notes.emplace_back("check.energies_ascending", ascending ? "true" : "false");
  notes.emplace_back("check.orthonormality_defect", format_double(orthonormality_defect));
}

void run_evolve(const RunConfig& cfg, const fs::path& out_dir, std::vector<Note>& notes,
                RunResult& result) {
  const Grid1D grid = cfg.make_grid();
  const PhysicalConstants constants = cfg.make_constants();
  const DiscreteHamiltonian h = build_hamiltonian(grid, cfg.make_potential(), constants);

  EvolutionParams params;
  params.dt = cfg.evolution_dt;
  params.n_steps = cfg.evolution_n_steps;
  params.record_every = cfg.evolution_record_every;

  Spectrum spectrum{grid, constants, {}, {}};
  const Spectrum* spectrum_ptr = nullptr;
  if (cfg.initial_kind == "levels") {
    const int needed = required_level_count(cfg.initial_levels, "initial.levels");
    spectrum = solve_spectrum(h, std::max(cfg.spectrum_count, needed));
    spectrum_ptr = &spectrum;
  }
  const ScalarField psi0 = initial_scalar(cfg, spectrum_ptr);

  const fs::path timeseries_path = out_dir / "timeseries.csv";
  if (cfg.evolution_equation == "schrodinger") {
    CsvWriter writer(timeseries_path, {"t", "norm_sq", "x_mean"});
    const Eigen::VectorXd xs = grid.points();
    double norm_drift = 0.0;
    Eigen::VectorXcd last;
    evolve_schrodinger(psi0, h, params, [&](double t, const Eigen::VectorXcd& values) {
      const double norm_sq = values.squaredNorm() * grid.spacing();
      const double x_mean = (xs.array() * values.cwiseAbs2().array()).sum() * grid.spacing();
      writer.row({t, norm_sq, x_mean});
      norm_drift = std::max(norm_drift, std::abs(norm_sq - 1.0));
      last = values;
    });
    writer.close();
    result.outputs.push_back(timeseries_path);

    const fs::path state_path = out_dir / "final_state.csv";
    CsvWriter state_writer(state_path, {"x", "re", "im"});
    for (int i = 0; i < grid.n_points(); ++i) {
      state_writer.row({grid.x(i), last[i].real(), last[i].imag()});
    }
    state_writer.close();
    result.outputs.push_back(state_path);

    notes.emplace_back("check.norm_drift", format_double(norm_drift));
  } else {
    const KernelField kernel0 = kernel_from_product(psi0, psi0);
    CsvWriter writer(timeseries_path, {"t", "norm_sq", "hermiticity_defect", "entropy"});
    double norm_drift = 0.0;
    double defect_max = 0.0;
    double entropy_first = 0.0;
    double entropy_drift = 0.0;
    bool have_first = false;
    Eigen::MatrixXcd last;
    evolve_bipartite_grid(kernel0, h, params, [&](double t, const Eigen::MatrixXcd& values) {
      const double h2 = grid.spacing() * grid.spacing();
      const double norm_sq = values.squaredNorm() * h2;
      const double defect = (values - values.adjoint()).cwiseAbs().maxCoeff();
      const double s = kernel_entropy_of_matrix(values, grid.spacing());
      if (!have_first) {
        entropy_first = s;
        have_first = true;
      }
      writer.row({t, norm_sq, defect, s});
      norm_drift = std::max(norm_drift, std::abs(norm_sq - 1.0));
      defect_max = std::max(defect_max, defect);
      entropy_drift = std::max(entropy_drift, std::abs(s - entropy_first));
      last = values;
    });
    writer.close();
    result.outputs.push_back(timeseries_path);

    const fs::path density_path = out_dir / "final_density.csv";
    const Eigen::VectorXd density =
        position_density(KernelField(grid, std::move(last)));
    CsvWriter density_writer(density_path, {"x", "density"});
    for (int i = 0; i < grid.n_points(); ++i) {
      density_writer.row({grid.x(i), density[i]});
    }
    density_writer.close();
    result.outputs.push_back(density_path);

    notes.emplace_back("check.norm_drift", format_double(norm_drift));
    notes.emplace_back("check.hermiticity_defect_max", format_double(defect_max));
    notes.emplace_back("check.entropy_drift", format_double(entropy_drift));
  }
}

void run_duality_scan(const RunConfig& cfg, const fs::path& out_dir, std::vector<Note>& notes,
                      RunResult& result) {
  const auto [mode_1, mode_2] = modes_for_config(cfg);
  const std::vector<DualityPoint> points = duality_scan(mode_1, mode_2, cfg.scan_lambdas);

  const fs::path path = out_dir / "duality.csv";
  CsvWriter writer(path, {"lambda", "entropy", "visibility"});
  bool lambdas_ascending = true;
  bool entropy_nondecreasing = true;
  bool visibility_nonincreasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    writer.row({points[i].lambda, points[i].entropy, points[i].visibility});
    if (i > 0) {
      if (!(points[i].lambda >= points[i - 1].lambda)) lambdas_ascending = false;
      if (points[i].entropy < points[i - 1].entropy - tol::kAlgebraic) {
        entropy_nondecreasing = false;
      }
      if (points[i].visibility > points[i - 1].visibility + tol::kAlgebraic) {
        visibility_nonincreasing = false;
      }
    }
  }
  writer.close();
  result.outputs.push_back(path);

  if (lambdas_ascending) {
    notes.emplace_back("check.entropy_nondecreasing", entropy_nondecreasing ? "true" : "false");
    notes.emplace_back("check.visibility_nonincreasing",
                       visibility_nonincreasing ? "true" : "false");
  }
}

void run_gap_scan(const RunConfig& cfg, const fs::path& out_dir, std::vector<Note>& notes,
                  RunResult& result) {
  int needed = 0;
  for (const auto& [a, b] : cfg.gap_pairs) {
    if (a < 0 || b < 0) {
      throw ConfigError("gaps.pairs: level indices must be nonnegative");
    }
    needed = std::max({needed, a + 1, b + 1});
  }
  const Grid1D grid = cfg.make_grid();
  const PhysicalConstants constants = cfg.make_constants();
  const DiscreteHamiltonian h = build_hamiltonian(grid, cfg.make_potential(), constants);
  const Spectrum spectrum = solve_spectrum(h, std::max(cfg.spectrum_count, needed));

  EvolutionParams params;
  params.dt = cfg.evolution_dt;
  params.n_steps = cfg.evolution_n_steps;
  params.record_every = cfg.evolution_record_every;

  const std::vector<GapMeasurement> gaps =
      gap_spectroscopy(spectrum, cfg.gap_pairs, h, params);

  const fs::path path = out_dir / "gaps.csv";
  CsvWriter writer(path, {"level_a", "level_b", "measured_gap", "spectral_gap", "abs_error",
                          "rel_error", "fit_residual"});
  double max_rel_error = 0.0;
  for (const GapMeasurement& g : gaps) {
    writer.row({static_cast<long long>(g.level_a), static_cast<long long>(g.level_b),
                g.measured_gap, g.spectral_gap, g.abs_error, g.rel_error, g.fit_residual});
    max_rel_error = std::max(max_rel_error, g.rel_error);
  }
  writer.close();
  result.outputs.push_back(path);

  notes.emplace_back("check.max_rel_error", format_double(max_rel_error));
}

void run_collapse_stats(const RunConfig& cfg, const fs::path& out_dir, std::vector<Note>& notes,
                        RunResult& result) {
  if (cfg.initial_levels.size() != 2 || cfg.initial_levels[0] == cfg.initial_levels[1]) {
    throw ConfigError("initial.levels: collapse-stats needs exactly two distinct levels");
  }
  if (cfg.collapse_samples < 1) {
    throw ConfigError("collapse.samples: must be at least 1");
  }
  const int needed = required_level_count(cfg.initial_levels, "initial.levels");
  const Spectrum spectrum = solve_for_config(cfg, std::max(cfg.spectrum_count, needed));
  const int k = spectrum.count();

  const TwoSlitFamily family(
      spectrum.states[static_cast<std::size_t>(cfg.initial_levels[0])],
      spectrum.states[static_cast<std::size_t>(cfg.initial_levels[1])],
      duality_coefficients(cfg.collapse_lambda));
  const KernelField kernel = two_slit_kernel(family);

  const CoefficientExpansion expansion = eigenbasis_coefficients(kernel, spectrum, k);
  const TransitionReport report = transition_probabilities(expansion.coefficients, spectrum);

  LevelSampler sampler(cfg.seed);
  std::vector<long long> counts(static_cast<std::size_t>(k), 0);
  double shift_sum = 0.0;
  for (long i = 0; i < cfg.collapse_samples; ++i) {
    const int m = sampler.sample(report.probabilities);
    ++counts[static_cast<std::size_t>(m)];
    shift_sum += report.energy_shifts[m];
  }
  const double samples = static_cast<double>(cfg.collapse_samples);

  const fs::path path = out_dir / "collapse.csv";
  CsvWriter writer(path, {"level", "probability", "empirical_frequency", "energy_shift"});
  double max_deviation = 0.0;
  for (int m = 0; m < k; ++m) {
    const double frequency = static_cast<double>(counts[static_cast<std::size_t>(m)]) / samples;
    writer.row({static_cast<long long>(m), report.probabilities[m], frequency,
                report.energy_shifts[m]});
    max_deviation = std::max(max_deviation, std::abs(frequency - report.probabilities[m]));
  }
  writer.close();
  result.outputs.push_back(path);

  notes.emplace_back("rng.algorithm", std::string(LevelSampler::algorithm()));
  notes.emplace_back("check.captured_weight", format_double(expansion.captured_weight));
  notes.emplace_back("check.probability_sum", format_double(report.probabilities.sum()));
  notes.emplace_back("check.max_frequency_deviation", format_double(max_deviation));
  notes.emplace_back("collapse.expected_shift", format_double(report.expected_shift));
  notes.emplace_back("collapse.empirical_mean_shift", format_double(shift_sum / samples));
}

}  // namespace

Command command_from_name(std::string_view name) {
  if (name == "eigs") return Command::Eigs;
  if (name == "evolve") return Command::Evolve;
  if (name == "duality-scan") return Command::DualityScan;
  if (name == "gap-scan") return Command::GapScan;
  if (name == "collapse-stats") return Command::CollapseStats;
  throw ConfigError("unknown command '" + std::string(name) +
                    "' (expected eigs, evolve, duality-scan, gap-scan, or collapse-stats)");
}

std::string_view command_name(Command cmd) {
  switch (cmd) {
    case Command::Eigs:
      return "eigs";
    case Command::Evolve:
      return "evolve";
    case Command::DualityScan:
      return "duality-scan";
    case Command::GapScan:
      return "gap-scan";
    case Command::CollapseStats:
      return "collapse-stats";
  }
  throw ConfigError("unknown command enumerator");
}

RunResult run_command(Command cmd, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();

  const fs::path out_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  }

  RunResult result;
  std::vector<Note> notes;
  switch (cmd) {
    case Command::Eigs:
      run_eigs(cfg, out_dir, notes, result);
      break;
    case Command::Evolve:
      run_evolve(cfg, out_dir, notes, result);
      break;
    case Command::DualityScan:
      run_duality_scan(cfg, out_dir, notes, result);
      break;
    case Command::GapScan:
      run_gap_scan(cfg, out_dir, notes, result);
      break;
    case Command::CollapseStats:
      run_collapse_stats(cfg, out_dir, notes, result);
      break;
  }

  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const fs::path manifest_path = out_dir / "manifest.txt";
  write_manifest(manifest_path, command_name(cmd), wall_seconds, notes, cfg);
  result.outputs.push_back(manifest_path);
  return result;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const IoError*>(&error) != nullptr) return 4;
  if (dynamic_cast<const NumericError*>(&error) != nullptr) return 3;
  if (dynamic_cast<const ConfigError*>(&error) != nullptr) return 2;
  if (dynamic_cast<const std::invalid_argument*>(&error) != nullptr) return 2;
  return 3;
}

void print_error_line(std::ostream& out, const std::exception& error) {
  const int code = exit_code_for(error);
  const char* category = code == 2 ? "config" : (code == 4 ? "io" : "numeric");
  std::string message;
  for (const char* p = error.what(); *p != '\0'; ++p) {
    if (*p == '"' || *p == '\\') message += '\\';
    message += *p;
  }
  out << "error: category=" << category << " message=\"" << message << "\"\n";
}

}  // namespace bipsim
