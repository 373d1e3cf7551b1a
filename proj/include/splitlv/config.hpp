#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitlv/integrators.hpp"

namespace splitlv {

struct PhaseAreaConfig {
  std::array<State, 3> starts;
  double horizon = 10.0;
  // Coarse step horizon * 2^-step_exponent; reference runs at
  // horizon * 2^-reference_exponent.
  int step_exponent = 6;
  int reference_exponent = 10;
};

// One experiment description. Everything any subcommand runs is a pure
// function of this struct, so a config file plus a seed is a full
// provenance record for every CSV the tool writes.
struct ExperimentConfig {
  int schema_version = 1;
  ModelParams model;
  State initial_state;
  double horizon = 1.0;
  std::vector<SchemeId> schemes;
  // Ladder entry e means step size horizon * 2^-e; strictly increasing.
  std::vector<int> step_exponents;
  int reference_exponent = 12;
  int n_paths = 2;
  std::uint64_t master_seed = 0;
  double moment_order = 2.0;
  std::optional<PhaseAreaConfig> phase_area;
  std::string output_dir = "out";

  double step_size(int exponent) const;
  std::vector<double> ladder() const;  // decreasing step sizes
  double reference_h() const;
};

// Parses and validates a config document. Unknown keys anywhere are hard
// errors, as are missing mandatory fields (the seed in particular: runs
// are never seeded from the clock). Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);

// parse_config applied to the file's contents; unreadable files are
// reported as ConfigError.
ExperimentConfig load_config(const std::string& path);

}  // namespace splitlv
