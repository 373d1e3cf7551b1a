#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splitlv/geometry.hpp"
#include "splitlv/rng.hpp"
#include "test_support.hpp"

using namespace splitlv;
using testsup::pinned;

namespace {

State random_state(std::uint64_t seed, std::uint64_t trial, Eigen::Index d) {
  // Log-uniform components in [0.1, 10].
  const double lo = std::log(0.1);
  const double span = std::log(10.0) - lo;
  State z;
  z.x.resize(d);
  z.y.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    z.x[i] = std::exp(
        lo + span * rng::uniform01(seed, trial, static_cast<std::uint64_t>(i)));
    z.y[i] = std::exp(
        lo +
        span * rng::uniform01(seed, trial, static_cast<std::uint64_t>(d + i)));
  }
  return z;
}

StepNoise random_noise(std::uint64_t seed, std::uint64_t trial, Eigen::Index m,
                       double h) {
  StepNoise noise;
  noise.first_half.resize(m);
  noise.second_half.resize(m);
  const double scale = std::sqrt(0.5 * h);
  for (Eigen::Index j = 0; j < m; ++j) {
    noise.first_half[j] =
        scale * rng::standard_normal(seed, trial, 100 + static_cast<std::uint64_t>(j));
    noise.second_half[j] =
        scale * rng::standard_normal(seed, trial, 200 + static_cast<std::uint64_t>(j));
  }
  return noise;
}

}  // namespace

TEST_CASE("skew form K") {
  SUBCASE("pinned entries") {
    const Eigen::MatrixXd k1 = k_matrix(testsup::state2d(1, 1));
    CHECK(k1(0, 0) == 0.0);
    CHECK(k1(0, 1) == -1.0);
    CHECK(k1(1, 0) == 1.0);
    CHECK(k1(1, 1) == 0.0);

    const Eigen::MatrixXd k2 = k_matrix(testsup::state2d(2, 4));
    CHECK(k2(0, 1) == pinned(-0.125));
    CHECK(k2(1, 0) == pinned(0.125));
  }
  SUBCASE("exactly skew-symmetric on random states") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      const State z = random_state(41, trial, 2);
      const Eigen::MatrixXd k = k_matrix(z);
      CHECK((k + k.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("undefined off the positive orthant") {
    CHECK_THROWS_WITH_AS(k_matrix(testsup::state2d(0, 1)),
                         doctest::Contains("K undefined"), DomainError);
    CHECK_THROWS_AS(k_matrix(testsup::state2d(1, -2)), DomainError);
  }
}

TEST_CASE("subflow Jacobians") {
  const auto p = testsup::params4d();
  const State z = testsup::state4d();
  Eigen::VectorXd dw(3);
  dw << 0.02, -0.05, 0.01;

  SUBCASE("zero time gives the identity exactly") {
    const Eigen::MatrixXd j1 =
        flow1_jacobian(p, z, 0.0, Eigen::VectorXd::Zero(3));
    const Eigen::MatrixXd j2 =
        flow2_jacobian(p, z, 0.0, Eigen::VectorXd::Zero(3));
    CHECK(j1 == Eigen::MatrixXd::Identity(4, 4));
    CHECK(j2 == Eigen::MatrixXd::Identity(4, 4));
  }
  SUBCASE("frozen blocks stay exact at finite time") {
    const Eigen::MatrixXd j1 = flow1_jacobian(p, z, 0.25, dw);
    CHECK(j1.topLeftCorner(2, 2) == Eigen::MatrixXd::Identity(2, 2));
    CHECK(j1.topRightCorner(2, 2) == Eigen::MatrixXd::Zero(2, 2));
    const Eigen::MatrixXd j2 = flow2_jacobian(p, z, 0.25, dw);
    CHECK(j2.bottomLeftCorner(2, 2) == Eigen::MatrixXd::Zero(2, 2));
    CHECK(j2.bottomRightCorner(2, 2) == Eigen::MatrixXd::Identity(2, 2));
  }
}

TEST_CASE("step Jacobians are the literal chain-rule products") {
  const auto p = testsup::params2d();
  const State z = testsup::state2d(1.3, 6.1);
  const double h = 0.0625;
  const StepNoise noise = random_noise(47, 0, 1, h);

  const Eigen::VectorXd dw = noise.full();
  const State mid = flow2(p, z, h, dw);
  const Eigen::MatrixXd lt_manual =
      flow1_jacobian(p, mid, h, dw) * flow2_jacobian(p, z, h, dw);
  CHECK(step_jacobian(p, z, h, noise, SchemeId::LieTrotter,
                      JacobianMode::Analytic) == lt_manual);

  const State first = flow2(p, z, 0.5 * h, noise.first_half);
  const State second = flow1(p, first, h, dw);
  const Eigen::MatrixXd strang_manual =
      flow2_jacobian(p, second, 0.5 * h, noise.second_half) *
      flow1_jacobian(p, first, h, dw) *
      flow2_jacobian(p, z, 0.5 * h, noise.first_half);
  CHECK(step_jacobian(p, z, h, noise, SchemeId::Strang,
                      JacobianMode::Analytic) == strang_manual);
}

TEST_CASE("analytic and finite-difference Jacobians agree") {
  const double h = 0.015625;  // 2^-6
  for (const bool wide : {false, true}) {
    const ModelParams p = wide ? testsup::params4d() : testsup::params2d();
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const State z = random_state(wide ? 52 : 51, trial, p.d);
      const StepNoise noise = random_noise(wide ? 54 : 53, trial, p.m, h);
      for (const SchemeId scheme : {SchemeId::LieTrotter, SchemeId::Strang}) {
        const Eigen::MatrixXd analytic =
            step_jacobian(p, z, h, noise, scheme, JacobianMode::Analytic);
        const Eigen::MatrixXd fd = step_jacobian(
            p, z, h, noise, scheme, JacobianMode::FiniteDifference);
        const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
        CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5 * scale);
      }
    }
  }
}

TEST_CASE("the Euler baseline has no analytic Jacobian") {
  const auto p = testsup::params2d();
  const StepNoise noise{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  CHECK_THROWS_WITH_AS(
      step_jacobian(p, testsup::state2d(1, 7), 0.03125, noise,
                    SchemeId::EulerMaruyama, JacobianMode::Analytic),
      doctest::Contains("analytic Jacobian unavailable"), std::invalid_argument);
  // Finite differences remain available.
  const Eigen::MatrixXd fd =
      step_jacobian(p, testsup::state2d(1, 7), 0.03125, noise,
                    SchemeId::EulerMaruyama, JacobianMode::FiniteDifference);
  CHECK(fd.allFinite());
}

TEST_CASE("splitting steps satisfy the discrete conservation law") {
  for (const bool wide : {false, true}) {
    const ModelParams p = wide ? testsup::params4d() : testsup::params2d();
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const State z = random_state(wide ? 62 : 61, trial, p.d);
      const double h =
          std::exp2(-(4.0 + 6.0 * rng::uniform01(wide ? 64 : 63, trial, 0)));
      const StepNoise noise = random_noise(wide ? 66 : 65, trial, p.m, h);
      for (const SchemeId scheme : {SchemeId::LieTrotter, SchemeId::Strang}) {
        const SymplecticCheck check = symplectic_residual(p, z, h, noise, scheme);
        CHECK(check.relative_residual <= 1e-8);
        CHECK(check.z_after.strictly_positive());
      }
    }
  }
}

TEST_CASE("the Euler baseline breaks the conservation law") {
  const auto p = testsup::params2d();
  const State z = testsup::state2d(1, 7);
  // Small enough that the Euler step stays in the positive orthant (at
  // h = 2^-4 it already leaves it from this state).
  const double h = 0.015625;
  StepNoise noise;
  noise.first_half = Eigen::VectorXd::Constant(1, 0.01);
  noise.second_half = Eigen::VectorXd::Constant(1, 0.01);

  const SymplecticCheck em =
      symplectic_residual(p, z, h, noise, SchemeId::EulerMaruyama);
  const SymplecticCheck strang =
      symplectic_residual(p, z, h, noise, SchemeId::Strang);
  CHECK(std::isfinite(em.relative_residual));
  CHECK(em.relative_residual > 1e3 * strang.relative_residual);
}

TEST_CASE("conservation check requires diagonal interactions") {
  auto p = testsup::params4d();
  p.gamma1(0, 1) = 0.5;
  const StepNoise noise{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  CHECK_THROWS_WITH_AS(
      symplectic_residual(p, testsup::state4d(), 0.0625, noise,
                          SchemeId::Strang),
      doctest::Contains("symplectic form requires diagonal gamma"),
      DomainError);
}

TEST_CASE("triangle area") {
  using V = Eigen::Vector2d;
  CHECK(triangle_area(V(0, 0), V(4, 0), V(0, 5)) == pinned(10.0));
  CHECK(triangle_area(V(1, 1), V(2, 2), V(3, 3)) == 0.0);  // collinear
  CHECK(triangle_area(V(0, 0), V(1, 0), V(0, 1)) == pinned(0.5));

  // Invariant under vertex permutation and translation.
  const V a(1.2, 0.4), b(-0.3, 2.5), c(4.1, 1.7), shift(10.5, -3.25);
  const double base = triangle_area(a, b, c);
  CHECK(triangle_area(b, c, a) == doctest::Approx(base).epsilon(1e-12));
  CHECK(triangle_area(c, a, b) == doctest::Approx(base).epsilon(1e-12));
  CHECK(triangle_area(a + shift, b + shift, c + shift) ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("phase-area series") {
  const auto p = testsup::params2d();
  const std::array<State, 3> starts = {testsup::state2d(1, 7),
                                       testsup::state2d(2, 1),
                                       testsup::state2d(5, 3)};

  SUBCASE("self-comparison against the reference is exactly zero") {
    const PhaseAreaSeries series = phase_area_experiment(
        p, starts, {SchemeId::Strang}, 0.0625, 0.0625, 1.0, 2024);
    REQUIRE(series.times.size() == 17);
    CHECK(series.times.front() == 0.0);
    CHECK(series.times.back() == 1.0);
    CHECK(series.reference_areas.front() == 10.0);  // integer corners, exact
    for (const double e : series.abs_errors.at(0)) CHECK(e == 0.0);
  }

  SUBCASE("zero noise makes the series seed-independent") {
    auto det = p;
    det.sigma1.setZero();
    const PhaseAreaSeries a = phase_area_experiment(
        det, starts, {SchemeId::LieTrotter}, 0.125, 0.03125, 1.0, 1);
    const PhaseAreaSeries b = phase_area_experiment(
        det, starts, {SchemeId::LieTrotter}, 0.125, 0.03125, 1.0, 2);
    REQUIRE(a.areas.at(0).size() == b.areas.at(0).size());
    for (std::size_t n = 0; n < a.areas[0].size(); ++n) {
      CHECK(a.areas[0][n] == b.areas[0][n]);
    }
  }

  SUBCASE("scalar models only") {
    const std::array<State, 3> starts4 = {testsup::state4d(),
                                          testsup::state4d(),
                                          testsup::state4d()};
    CHECK_THROWS_AS(phase_area_experiment(testsup::params4d(), starts4,
                                          {SchemeId::Strang}, 0.0625, 0.0625,
                                          1.0, 1),
                    DomainError);
  }

  SUBCASE("steps must nest dyadically") {
    CHECK_THROWS_WITH_AS(
        phase_area_experiment(p, starts, {SchemeId::Strang}, 0.1, 0.05, 1.0, 1),
        doctest::Contains("incompatible step size"), GridError);
    CHECK_THROWS_AS(phase_area_experiment(p, starts, {SchemeId::Strang}, 0.03125,
                                          0.0625, 1.0, 1),
                    GridError);
  }
}
