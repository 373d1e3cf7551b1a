#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <limits>

#include "splitlv/rng.hpp"
#include "test_support.hpp"

using namespace splitlv;
using testsup::pinned;

TEST_CASE("both experiment parameter sets validate") {
  CHECK(validate(testsup::params2d()).empty());
  CHECK(validate(testsup::params4d()).empty());
}

TEST_CASE("violations are named") {
  auto p = testsup::params2d();
  p.eta2[0] = 0.0;  // boundary of the strict-positivity requirement
  auto violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("nonpositive eta entry") != std::string::npos);

  p = testsup::params2d();
  p.gamma1(0, 0) = -1.0;
  violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("nonpositive gamma diagonal entry") !=
        std::string::npos);

  p = testsup::params4d();
  p.gamma2(0, 1) = -0.5;
  violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("negative gamma off-diagonal entry") !=
        std::string::npos);

  p = testsup::params2d();
  p.eta1.resize(2);
  p.eta1 << 5.0, 5.0;
  violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("dimension mismatch") != std::string::npos);

  p = testsup::params2d();
  p.sigma1(0, 0) = std::numeric_limits<double>::quiet_NaN();
  violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("non-finite entry") != std::string::npos);

  // All violations reported, not just the first.
  p = testsup::params2d();
  p.eta1[0] = -1.0;
  p.eta2[0] = 0.0;
  CHECK(validate(p).size() == 2);

  CHECK_THROWS_AS(ensure_valid(p), ConfigError);
}

TEST_CASE("nonnegative off-diagonal interaction entries are accepted") {
  auto p = testsup::params4d();
  p.gamma1(0, 1) = 0.25;
  CHECK(validate(p).empty());
  CHECK_FALSE(p.diagonal_gamma());
  CHECK(testsup::params4d().diagonal_gamma());
}

TEST_CASE("noise corrections are row sums of squares") {
  // (0.4, 0.5, 0.6) rows -> 0.16 + 0.25 + 0.36
  const auto lam1 = ito_correction(testsup::params4d(), 1);
  CHECK(lam1[0] == pinned(0.77000000000000002));
  CHECK(lam1[1] == pinned(0.77000000000000002));

  CHECK(ito_correction(testsup::params2d(), 1)[0] == pinned(1.0));
  CHECK(ito_correction(testsup::params2d(), 2)[0] == 0.0);
  CHECK(ito_correction(testsup::params4d(), 2).isZero(0.0));
}

TEST_CASE("noise correction ignores column order and signs") {
  auto p = testsup::params4d();
  const auto base = ito_correction(p, 1);
  p.sigma1.col(0).swap(p.sigma1.col(2));
  p.sigma1(0, 1) = -p.sigma1(0, 1);
  const auto permuted = ito_correction(p, 1);
  CHECK(permuted[0] == base[0]);
  CHECK(permuted[1] == base[1]);
}

TEST_CASE("drift and diffusion at the pinned states") {
  const auto co = ito_coefficients(testsup::params2d(), testsup::state2d(1, 7));
  CHECK(co.drift[0] == pinned(-20.0));
  CHECK(co.drift[1] == pinned(-14.0));
  CHECK(co.diffusion(0, 0) == 0.0);
  CHECK(co.diffusion(1, 0) == pinned(7.0));

  const auto co4 = ito_coefficients(testsup::params4d(), testsup::state4d());
  CHECK(co4.drift[0] == pinned(-22.0));

  // Multiplicative structure: the zero state is a fixed point.
  State zero{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  const auto co0 = ito_coefficients(testsup::params2d(), zero);
  CHECK(co0.drift.isZero(0.0));
  CHECK(co0.diffusion.isZero(0.0));
}

TEST_CASE("drift and diffusion scale with the prey block") {
  const auto p = testsup::params4d();
  State z = testsup::state4d();
  const auto base = ito_coefficients(p, z);
  const double c = 3.5;
  z.x *= c;
  const auto scaled = ito_coefficients(p, z);
  for (Eigen::Index i = 0; i < p.d; ++i) {
    CHECK(scaled.drift[i] == doctest::Approx(c * base.drift[i]).epsilon(1e-14));
    for (Eigen::Index j = 0; j < p.m; ++j) {
      CHECK(scaled.diffusion(i, j) ==
            doctest::Approx(c * base.diffusion(i, j)).epsilon(1e-14));
    }
  }
  // Predator rows depend on x only through the drift's gamma1 x term.
  for (Eigen::Index j = 0; j < p.m; ++j) {
    CHECK(scaled.diffusion(p.d, j) == base.diffusion(p.d, j));
  }
}

TEST_CASE("non-finite states overflow loudly") {
  State z = testsup::state2d(1, 7);
  z.x[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(ito_coefficients(testsup::params2d(), z),
                       doctest::Contains("numerical overflow"), OverflowError);
}

TEST_CASE("conserved quantities at the pinned 2D state") {
  const auto parts = hamiltonians(testsup::params2d(), testsup::state2d(1, 7));
  CHECK(parts.h1_x == pinned(2.0));   // -3*1 + (5 + 0.5*1*ln 1)
  CHECK(parts.h1_y == pinned(-20.0));  // -3*7 + (1 - 0)
  CHECK(parts.h1 == pinned(-18.0));
  CHECK(parts.h2_x[0] == 0.0);  // -1*ln 1
  CHECK(parts.h2_y[0] == 0.0);  // sigma2 = 0
  CHECK(parts.h2[0] == 0.0);
}

TEST_CASE("unit states kill every log term") {
  const auto p = testsup::params4d();
  State ones{Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)};
  const auto parts = hamiltonians(p, ones);
  const double expected = (-3.0 + 1.0) + (-5.0 + 4.0)    // h1_x terms
                          + (-7.0 + 1.0) + (-4.0 + 2.0);  // h1_y terms
  CHECK(parts.h1 == pinned(expected));
  CHECK(parts.h2.isZero(0.0));
}

TEST_CASE("recomposition identity is bitwise") {
  const auto p2 = testsup::params2d();
  const auto p4 = testsup::params4d();
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto draw = [&](Eigen::Index n, std::uint64_t base) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = 0.05 + 12.0 * rng::uniform01(99, trial,
                                            base + static_cast<std::uint64_t>(i));
      }
      return v;
    };
    const State z2{draw(1, 0), draw(1, 8)};
    const auto h2 = hamiltonians(p2, z2);
    CHECK(h2.h1 == h2.h1_x + h2.h1_y);
    CHECK(h2.h2[0] == h2.h2_x[0] + h2.h2_y[0]);

    const State z4{draw(2, 16), draw(2, 24)};
    const auto h4 = hamiltonians(p4, z4);
    CHECK(h4.h1 == h4.h1_x + h4.h1_y);
    for (Eigen::Index k = 0; k < 3; ++k) {
      CHECK(h4.h2[k] == h4.h2_x[k] + h4.h2_y[k]);
    }
  }
}

TEST_CASE("logarithms demand positive states") {
  CHECK_THROWS_WITH_AS(
      hamiltonians(testsup::params2d(), testsup::state2d(0.0, 7.0)),
      doctest::Contains("log domain error"), DomainError);
}
