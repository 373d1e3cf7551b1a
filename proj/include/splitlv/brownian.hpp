#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "splitlv/errors.hpp"

namespace splitlv {

// An m-dimensional Wiener path sampled as independent increments over the
// 2^level cells of a dyadic grid on [0, horizon]. A path is a pure function
// of (master_seed, path_index, horizon, level, m): regenerating it anywhere,
// in any order, on any thread yields identical bits. Immutable after
// construction and safe to share across workers.
struct BrownianPath {
  double horizon = 0.0;
  int level = 0;
  Eigen::Index m = 0;
  // Row i holds the increment over cell [i*delta, (i+1)*delta),
  // delta = horizon * 2^-level, entries i.i.d. Normal(0, delta).
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      increments;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;

  std::int64_t cells() const { return std::int64_t{1} << level; }
  double fine_step() const {
    return horizon / static_cast<double>(cells());
  }
};

BrownianPath generate_path(std::uint64_t master_seed,
                           std::uint64_t path_index, double horizon,
                           int level, Eigen::Index m);

// Wiener increment over the fine-index range [i_a, i_b); the zero vector
// when the range is empty. Sums are formed over the dyadic tree: an
// aligned block is always the sum of its two half-blocks, so
//   increment_between(p, a, b) == increment_between(p, a, c)
//                                 + increment_between(p, c, b)
// holds bit for bit whenever c is the midpoint of the aligned block [a, b).
// Unaligned ranges are decomposed into maximal aligned blocks and added
// left to right.
Eigen::VectorXd increment_between(const BrownianPath& path, std::int64_t i_a,
                                  std::int64_t i_b);

// One scheme step [t, t + h) resolved to fine-grid indices. `mid` is the
// half-step index consumed by the symmetric scheme.
struct StepWindow {
  double t = 0.0;
  std::int64_t begin = 0;
  std::int64_t mid = 0;
  std::int64_t end = 0;
};

// Uniform schedule covering [0, horizon] with step h. h must equal
// horizon * 2^-l for an integer l with l + 1 <= path.level, so that both
// endpoints and midpoints land on the fine grid.
std::vector<StepWindow> steps_for(const BrownianPath& path, double h);

// Level l such that h == horizon * 2^-l exactly, if one exists.
std::optional<int> dyadic_level(double horizon, double h);

// Binary debug dump. Little-endian header: horizon (8-byte float), then
// level, m, master_seed, path_index (8-byte integers); body: row-major
// 8-byte-float increments.
void write_path(const BrownianPath& path, std::ostream& out);
BrownianPath read_path(std::istream& in);

}  // namespace splitlv
