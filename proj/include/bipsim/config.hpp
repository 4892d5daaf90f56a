#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bipsim/errors.hpp"
#include "bipsim/grid.hpp"
#include "bipsim/hamiltonian.hpp"

namespace bipsim {

// Run configuration parsed from `key = value` text (UTF-8, '#' comments,
// dotted keys for sections). Unknown keys are rejected; duplicate keys are an
// error naming both lines. Defaults below are what an absent key means, and
// the manifest echoes every key with its resolved value.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  double grid_x_min = 0.0;
  double grid_x_max = 1.0;
  int grid_n_points = 257;

  double hbar = 1.0;
  double mass = 1.0;

  std::string potential_kind = "infinite_well";
  double potential_omega = 1.0;
  double potential_barrier_height = 5.0;
  double potential_barrier_half_width = 0.1;
  std::vector<double> potential_values;

  int spectrum_count = 8;

  std::string evolution_equation = "schrodinger";
  double evolution_dt = 1e-3;
  long evolution_n_steps = 1000;
  long evolution_record_every = 10;

  std::string initial_kind = "levels";
  std::vector<int> initial_levels = {0, 1};
  double initial_center = 0.5;
  double initial_width = 0.1;
  double initial_momentum = 0.0;

  std::string modes_kind = "screen";
  double modes_separation = 4.0;
  double modes_width = 0.5;
  // 0 = derive from the grid: tilt 13*pi/extent (13 fringe half-periods
  // across the box, a zero of the finite-window overlap of the two tilted
  // beams, so the mixture keeps no residual fringes), envelope_width
  // 2.5*extent.
  double modes_tilt = 0.0;
  double modes_envelope_width = 0.0;

  std::vector<double> scan_lambdas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                      0.6, 0.7, 0.8, 0.9, 1.0};

  std::vector<std::pair<int, int>> gap_pairs = {{0, 1}};

  double collapse_lambda = 0.0;
  long collapse_samples = 100000;

  Grid1D make_grid() const;
  PhysicalConstants make_constants() const;
  PotentialSpec make_potential() const;
  double resolved_tilt() const;
  double resolved_envelope_width() const;

  // Every key with its resolved value, sorted by key (manifest echo).
  std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

}  // namespace bipsim
