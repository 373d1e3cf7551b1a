#include "splitlv/brownian.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "splitlv/rng.hpp"

namespace splitlv {
namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Sum over the aligned block [a, a + 2^j): bottom-up pairwise halving, so
// the value of any block is exactly the sum of the values of its two
// half-blocks. This is what makes midpoint additivity bitwise.
Eigen::VectorXd aligned_block_sum(const BrownianPath& p, std::int64_t a,
                                  int j) {
  if (j == 0) return p.increments.row(a).transpose();
  RowMat buf = p.increments.middleRows(a, std::int64_t{1} << j);
  for (int lvl = j; lvl > 0; --lvl) {
    const std::int64_t pairs = std::int64_t{1} << (lvl - 1);
    for (std::int64_t i = 0; i < pairs; ++i) {
      buf.row(i) = buf.row(2 * i) + buf.row(2 * i + 1);
    }
  }
  return buf.row(0).transpose();
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("invalid path dump: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

BrownianPath generate_path(std::uint64_t master_seed,
                           std::uint64_t path_index, double horizon,
                           int level, Eigen::Index m) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("generate_path: horizon must be positive");
  }
  if (level < 1) {
    throw std::invalid_argument("generate_path: level must be at least 1");
  }
  if (level > 62) throw GridError("level too large");
  if (m < 1) throw std::invalid_argument("generate_path: m must be at least 1");

  BrownianPath path;
  path.horizon = horizon;
  path.level = level;
  path.m = m;
  path.master_seed = master_seed;
  path.path_index = path_index;

  const std::int64_t n = path.cells();
  const double sd = std::sqrt(path.fine_step());
  path.increments.resize(n, m);
  for (std::int64_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const std::uint64_t draw =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(m) +
          static_cast<std::uint64_t>(j);
      path.increments(i, j) =
          sd * rng::standard_normal(master_seed, path_index, draw);
    }
  }
  return path;
}

Eigen::VectorXd increment_between(const BrownianPath& path, std::int64_t i_a,
                                  std::int64_t i_b) {
  if (i_a < 0 || i_b > path.cells() || i_a > i_b) {
    throw GridError("fine-index range out of bounds");
  }
  if (i_a == i_b) return Eigen::VectorXd::Zero(path.m);

  // Decompose [i_a, i_b) into maximal aligned blocks, left to right.
  Eigen::VectorXd out;
  std::int64_t a = i_a;
  bool first = true;
  while (a < i_b) {
    int j = (a == 0) ? 62 : std::countr_zero(static_cast<std::uint64_t>(a));
    while ((std::int64_t{1} << j) > i_b - a) --j;
    if (first) {
      out = aligned_block_sum(path, a, j);
      first = false;
    } else {
      out += aligned_block_sum(path, a, j);
    }
    a += std::int64_t{1} << j;
  }
  return out;
}

std::optional<int> dyadic_level(double horizon, double h) {
  if (!(horizon > 0.0) || !(h > 0.0) || h > horizon) return std::nullopt;
  const int l = static_cast<int>(std::lround(std::log2(horizon / h)));
  if (l < 0 || l > 62) return std::nullopt;
  if (std::ldexp(horizon, -l) != h) return std::nullopt;
  return l;
}

std::vector<StepWindow> steps_for(const BrownianPath& path, double h) {
  const auto l = dyadic_level(path.horizon, h);
  if (!l || *l + 1 > path.level) throw GridError("incompatible step size");
  const std::int64_t n_steps = std::int64_t{1} << *l;
  const std::int64_t stride = path.cells() >> *l;
  std::vector<StepWindow> schedule(static_cast<std::size_t>(n_steps));
  for (std::int64_t n = 0; n < n_steps; ++n) {
    auto& w = schedule[static_cast<std::size_t>(n)];
    w.t = static_cast<double>(n) * h;
    w.begin = n * stride;
    w.mid = n * stride + stride / 2;
    w.end = (n + 1) * stride;
  }
  return schedule;
}

void write_path(const BrownianPath& path, std::ostream& out) {
  put_f64(out, path.horizon);
  put_u64(out, static_cast<std::uint64_t>(path.level));
  put_u64(out, static_cast<std::uint64_t>(path.m));
  put_u64(out, path.master_seed);
  put_u64(out, path.path_index);
  for (std::int64_t i = 0; i < path.increments.rows(); ++i) {
    for (Eigen::Index j = 0; j < path.m; ++j) put_f64(out, path.increments(i, j));
  }
}

BrownianPath read_path(std::istream& in) {
  BrownianPath path;
  path.horizon = get_f64(in);
  path.level = static_cast<int>(get_u64(in));
  path.m = static_cast<Eigen::Index>(get_u64(in));
  path.master_seed = get_u64(in);
  path.path_index = get_u64(in);
  if (!(path.horizon > 0.0) || !std::isfinite(path.horizon) ||
      path.level < 1 || path.level > 62 || path.m < 1) {
    throw std::runtime_error("invalid path dump: bad header");
  }
  path.increments.resize(path.cells(), path.m);
  for (std::int64_t i = 0; i < path.cells(); ++i) {
    for (Eigen::Index j = 0; j < path.m; ++j) path.increments(i, j) = get_f64(in);
  }
  return path;
}

}  // namespace splitlv
