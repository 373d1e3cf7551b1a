#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "splitlv/brownian.hpp"

using namespace splitlv;

TEST_CASE("identical keys give identical paths, neighboring keys do not") {
  const BrownianPath a = generate_path(2024, 5, 1.0, 6, 2);
  const BrownianPath b = generate_path(2024, 5, 1.0, 6, 2);
  const BrownianPath c = generate_path(2024, 6, 1.0, 6, 2);
  CHECK(a.increments == b.increments);
  CHECK(a.increments != c.increments);
}

TEST_CASE("fine increments have the advertised variance") {
  // Column variance over 2^16 cells concentrates within 5 standard errors.
  const int level = 16;
  const BrownianPath path = generate_path(7, 0, 1.0, level, 1);
  const double delta = path.fine_step();
  const auto n = static_cast<double>(path.cells());
  const double var = path.increments.col(0).squaredNorm() / n;
  const double se = delta * std::sqrt(2.0 / n);  // chi-square std error
  CHECK(std::abs(var - delta) < 5.0 * se);
}

TEST_CASE("full-path statistics at a fixed seed") {
  const int n_paths = 10000;
  const double horizon = 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n_paths; ++k) {
    const BrownianPath path =
        generate_path(11, static_cast<std::uint64_t>(k), horizon, 3, 1);
    const double w_t = increment_between(path, 0, path.cells())[0];
    sum += w_t;
    sum_sq += w_t * w_t;
  }
  const double mean = sum / n_paths;
  const double var = sum_sq / n_paths - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(horizon / n_paths));
  CHECK(var == doctest::Approx(horizon).epsilon(0.10));
}

TEST_CASE("increments add exactly across dyadic splits") {
  const BrownianPath path = generate_path(3, 1, 2.0, 8, 3);

  SUBCASE("empty range") {
    CHECK(increment_between(path, 7, 7).isZero(0.0));
  }
  SUBCASE("full range telescopes to W(T)") {
    Eigen::VectorXd full = increment_between(path, 0, path.cells());
    CHECK(full.size() == 3);
    // Pairwise tree over the whole grid; equal to itself regenerated.
    CHECK(full == increment_between(path, 0, path.cells()));
  }
  SUBCASE("midpoint additivity is bitwise at every level") {
    for (int level = 1; level <= path.level; ++level) {
      const std::int64_t span = path.cells() >> (level - 1);
      for (std::int64_t a = 0; a < path.cells(); a += span) {
        const Eigen::VectorXd whole = increment_between(path, a, a + span);
        const Eigen::VectorXd left =
            increment_between(path, a, a + span / 2);
        const Eigen::VectorXd right =
            increment_between(path, a + span / 2, a + span);
        CHECK(whole == (left + right).eval());
      }
    }
  }
  SUBCASE("hand-picked small split") {
    const Eigen::VectorXd whole = increment_between(path, 0, 4);
    const Eigen::VectorXd split =
        increment_between(path, 0, 2) + increment_between(path, 2, 4);
    CHECK(whole == split);
  }
  SUBCASE("unaligned ranges agree with a direct pairwise sum") {
    const Eigen::VectorXd v = increment_between(path, 3, 9);
    Eigen::VectorXd expect = path.increments.row(3).transpose();
    // maximal aligned blocks of [3, 9): [3,4) + [4,8) + [8,9)
    Eigen::VectorXd mid = increment_between(path, 4, 8);
    expect = (expect + mid).eval();
    expect = (expect + path.increments.row(8).transpose()).eval();
    CHECK(v == expect);
  }
  SUBCASE("out-of-range indices are rejected") {
    CHECK_THROWS_AS(increment_between(path, -1, 4), GridError);
    CHECK_THROWS_AS(increment_between(path, 0, path.cells() + 1), GridError);
    CHECK_THROWS_AS(increment_between(path, 5, 4), GridError);
  }
}

TEST_CASE("step schedules land on the fine grid") {
  const BrownianPath path = generate_path(1, 0, 1.0, 3, 1);

  SUBCASE("h = 1/2 on an 8-cell grid") {
    const auto schedule = steps_for(path, 0.5);
    REQUIRE(schedule.size() == 2);
    CHECK(schedule[0].t == 0.0);
    CHECK(schedule[0].begin == 0);
    CHECK(schedule[0].mid == 2);
    CHECK(schedule[0].end == 4);
    CHECK(schedule[1].t == 0.5);
    CHECK(schedule[1].mid == 6);
    CHECK(schedule[1].end == 8);
  }
  SUBCASE("non-dyadic step") {
    CHECK_THROWS_WITH_AS(steps_for(path, 1.0 / 3.0),
                         doctest::Contains("incompatible step size"),
                         GridError);
  }
  SUBCASE("midpoint would fall off-grid") {
    CHECK_THROWS_WITH_AS(steps_for(path, 0.125),
                         doctest::Contains("incompatible step size"),
                         GridError);
  }
  SUBCASE("schedule covers [0, T] without gaps") {
    const auto schedule = steps_for(path, 0.25);
    REQUIRE(schedule.size() == 4);
    for (std::size_t n = 0; n + 1 < schedule.size(); ++n) {
      CHECK(schedule[n].end == schedule[n + 1].begin);
    }
    CHECK(schedule.back().end == path.cells());
  }
}

TEST_CASE("dyadic levels are recognized exactly") {
  CHECK(dyadic_level(1.0, 0.25) == 2);
  CHECK(dyadic_level(10.0, 10.0 * std::ldexp(1.0, -6)) == 6);
  CHECK(dyadic_level(1.0, 1.0) == 0);
  CHECK_FALSE(dyadic_level(1.0, 0.3).has_value());
  CHECK_FALSE(dyadic_level(1.0, 2.0).has_value());
  CHECK_FALSE(dyadic_level(1.0, 0.0).has_value());
}

TEST_CASE("level bounds") {
  CHECK_THROWS_WITH_AS(generate_path(0, 0, 1.0, 63, 1),
                       doctest::Contains("level too large"), GridError);
  CHECK_THROWS_AS(generate_path(0, 0, 1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_path(0, 0, -1.0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_path(0, 0, 1.0, 3, 0), std::invalid_argument);
}

TEST_CASE("binary dump round-trips bit for bit") {
  const BrownianPath path = generate_path(77, 9, 2.5, 5, 2);
  std::stringstream buffer;
  write_path(path, buffer);
  const BrownianPath copy = read_path(buffer);
  CHECK(copy.horizon == path.horizon);
  CHECK(copy.level == path.level);
  CHECK(copy.m == path.m);
  CHECK(copy.master_seed == path.master_seed);
  CHECK(copy.path_index == path.path_index);
  CHECK(copy.increments == path.increments);

  std::stringstream truncated;
  truncated << "short";
  CHECK_THROWS_AS(read_path(truncated), std::runtime_error);
}
