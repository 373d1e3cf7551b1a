#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "splitlv/config.hpp"
#include "splitlv/geometry.hpp"

namespace splitlv {

// Scalar-field overrides coming from command-line flags.
struct RunOverrides {
  std::optional<std::string> scheme;
  std::optional<int> paths;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int workers = 1;
};

// Loads the config, applies overrides, runs one subcommand and writes its
// CSV artifacts. Returns the process exit code: 0 on success, 2 on
// validation/usage errors, 3 when a computation aborts on numerical
// overflow. Error details go to stderr; progress lines go to stdout.
int run_subcommand(const std::string& subcommand,
                   const std::string& config_path,
                   const RunOverrides& overrides);

// One randomized conservation-law trial: a log-uniform state in
// [0.1, 10]^2d, a step size 2^-u with u uniform in [4, 10], and Gaussian
// half-interval increments of variance h/2. Pure function of
// (master_seed, trial), shared by the sympcheck subcommand and the test
// suite so both sweep the same distribution.
struct SympTrial {
  State z;
  double h = 0.0;
  StepNoise noise;
};

SympTrial draw_symp_trial(std::uint64_t master_seed, std::uint64_t trial,
                          Eigen::Index d, Eigen::Index m);

}  // namespace splitlv
