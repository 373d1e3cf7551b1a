#include "splitlv/geometry.hpp"

#include <cmath>
#include <limits>

namespace splitlv {
namespace {

Eigen::MatrixXd fd_jacobian(const ModelParams& p, const State& z, double h,
                            const StepNoise& noise, SchemeId scheme) {
  const Eigen::Index n = 2 * p.d;
  const Eigen::VectorXd base = z.concatenated();
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bump = 1e-6 * std::max(std::abs(base[j]), 1.0);
    Eigen::VectorXd up = base;
    Eigen::VectorXd down = base;
    up[j] += bump;
    down[j] -= bump;
    const State z_up{up.head(p.d), up.tail(p.d)};
    const State z_down{down.head(p.d), down.tail(p.d)};
    const Eigen::VectorXd f_up =
        apply_scheme_step(p, z_up, h, noise, scheme).concatenated();
    const Eigen::VectorXd f_down =
        apply_scheme_step(p, z_down, h, noise, scheme).concatenated();
    jac.col(j) = (f_up - f_down) / (2.0 * bump);
  }
  return jac;
}

}  // namespace

Eigen::MatrixXd k_matrix(const State& z) {
  if (!z.strictly_positive()) {
    throw DomainError("K undefined: state must be strictly positive");
  }
  const Eigen::Index d = z.dim();
  const Eigen::VectorXd kstar =
      (z.x.array() * z.y.array()).inverse().matrix();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    k(i, d + i) = -kstar[i];
    k(d + i, i) = -k(i, d + i);
  }
  return k;
}

Eigen::MatrixXd flow1_jacobian(const ModelParams& p, const State& z, double t,
                               const Eigen::VectorXd& dw) {
  const State after = flow1(p, z, t, dw);
  const Eigen::Index d = p.d;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  jac.topLeftCorner(d, d).setIdentity();
  jac.bottomLeftCorner(d, d) = after.y.asDiagonal() * p.gamma1 * t;
  jac.bottomRightCorner(d, d) =
      (after.y.array() / z.y.array()).matrix().asDiagonal();
  return jac;
}

Eigen::MatrixXd flow2_jacobian(const ModelParams& p, const State& z, double t,
                               const Eigen::VectorXd& dw) {
  const State after = flow2(p, z, t, dw);
  const Eigen::Index d = p.d;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  jac.topLeftCorner(d, d) =
      (after.x.array() / z.x.array()).matrix().asDiagonal();
  jac.topRightCorner(d, d) = -(after.x.asDiagonal() * p.gamma2 * t);
  jac.bottomRightCorner(d, d).setIdentity();
  return jac;
}

State apply_scheme_step(const ModelParams& p, const State& z, double h,
                        const StepNoise& noise, SchemeId scheme) {
  switch (scheme) {
    case SchemeId::LieTrotter:
      return step_lie_trotter(p, z, h, noise.full());
    case SchemeId::Strang:
      return step_strang(p, z, h, noise.first_half, noise.second_half);
    case SchemeId::EulerMaruyama:
      return step_em(p, z, h, noise.full()).state;
  }
  throw std::logic_error("unknown scheme");
}

Eigen::MatrixXd step_jacobian(const ModelParams& p, const State& z, double h,
                              const StepNoise& noise, SchemeId scheme,
                              JacobianMode mode) {
  if (mode == JacobianMode::FiniteDifference) {
    return fd_jacobian(p, z, h, noise, scheme);
  }
  switch (scheme) {
    case SchemeId::LieTrotter: {
      const Eigen::VectorXd dw = noise.full();
      const State mid = flow2(p, z, h, dw);
      return flow1_jacobian(p, mid, h, dw) * flow2_jacobian(p, z, h, dw);
    }
    case SchemeId::Strang: {
      const Eigen::VectorXd dw_full = noise.full();
      const State first = flow2(p, z, 0.5 * h, noise.first_half);
      const State second = flow1(p, first, h, dw_full);
      return flow2_jacobian(p, second, 0.5 * h, noise.second_half) *
             flow1_jacobian(p, first, h, dw_full) *
             flow2_jacobian(p, z, 0.5 * h, noise.first_half);
    }
    case SchemeId::EulerMaruyama:
      throw std::invalid_argument(
          "analytic Jacobian unavailable for the Euler-Maruyama scheme; "
          "use finite differences");
  }
  throw std::logic_error("unknown scheme");
}

SymplecticCheck symplectic_residual(const ModelParams& p, const State& z,
                                    double h, const StepNoise& noise,
                                    SchemeId scheme) {
  if (!p.diagonal_gamma()) {
    throw DomainError("symplectic form requires diagonal gamma");
  }
  const Eigen::MatrixXd k_before = k_matrix(z);

  SymplecticCheck check;
  check.scheme = scheme;
  check.z_before = z;
  check.z_after = apply_scheme_step(p, z, h, noise, scheme);
  check.jacobian =
      step_jacobian(p, z, h, noise, scheme,
                    scheme == SchemeId::EulerMaruyama
                        ? JacobianMode::FiniteDifference
                        : JacobianMode::Analytic);
  const Eigen::MatrixXd k_after = k_matrix(check.z_after);
  check.residual_norm =
      (check.jacobian.transpose() * k_after * check.jacobian - k_before)
          .norm();
  check.relative_residual = check.residual_norm / k_before.norm();
  return check;
}

double triangle_area(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                     const Eigen::Vector2d& p3) {
  const double det = p1.x() * (p2.y() - p3.y()) - p1.y() * (p2.x() - p3.x()) +
                     (p2.x() * p3.y() - p3.x() * p2.y());
  return 0.5 * std::abs(det);
}

PhaseAreaSeries phase_area_experiment(const ModelParams& p,
                                      const std::array<State, 3>& starts,
                                      const std::vector<SchemeId>& schemes,
                                      double h, double h_ref, double horizon,
                                      std::uint64_t master_seed) {
  if (p.d != 1) {
    throw DomainError("phase area requires a scalar model (d = 1)");
  }
  const auto ref_level = dyadic_level(horizon, h_ref);
  const auto coarse_level = dyadic_level(horizon, h);
  if (!ref_level || !coarse_level || *coarse_level > *ref_level) {
    throw GridError("incompatible step size");
  }

  std::array<BrownianPath, 3> paths;
  std::array<TrajectoryRecord, 3> reference;
  for (int c = 0; c < 3; ++c) {
    paths[c] = generate_path(master_seed, static_cast<std::uint64_t>(c),
                             horizon, *ref_level + 1, p.m);
    reference[c] =
        integrate_trajectory(p, starts[c], SchemeId::Strang, h_ref, paths[c]);
    if (reference[c].overflow_at) {
      throw OverflowError("numerical overflow in the reference trajectory");
    }
  }

  const std::size_t n_nodes = (std::size_t{1} << *coarse_level) + 1;
  const std::size_t stride = std::size_t{1} << (*ref_level - *coarse_level);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  PhaseAreaSeries series;
  series.schemes = schemes;
  series.times.resize(n_nodes);
  series.reference_areas.resize(n_nodes);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    series.times[n] = static_cast<double>(n) * h;
    series.reference_areas[n] = triangle_area(
        {reference[0].states[n * stride].x[0],
         reference[0].states[n * stride].y[0]},
        {reference[1].states[n * stride].x[0],
         reference[1].states[n * stride].y[0]},
        {reference[2].states[n * stride].x[0],
         reference[2].states[n * stride].y[0]});
  }

  for (const SchemeId scheme : schemes) {
    std::array<TrajectoryRecord, 3> corner;
    for (int c = 0; c < 3; ++c) {
      corner[c] = integrate_trajectory(p, starts[c], scheme, h, paths[c]);
    }
    std::vector<double> area(n_nodes, nan);
    std::vector<double> err(n_nodes, nan);
    for (std::size_t n = 0; n < n_nodes; ++n) {
      if (corner[0].states.size() <= n || corner[1].states.size() <= n ||
          corner[2].states.size() <= n) {
        break;  // a corner trajectory overflowed; later nodes stay NaN
      }
      area[n] = triangle_area({corner[0].states[n].x[0], corner[0].states[n].y[0]},
                              {corner[1].states[n].x[0], corner[1].states[n].y[0]},
                              {corner[2].states[n].x[0], corner[2].states[n].y[0]});
      err[n] = std::abs(area[n] - series.reference_areas[n]);
    }
    series.areas.push_back(std::move(area));
    series.abs_errors.push_back(std::move(err));
  }
  return series;
}

}  // namespace splitlv
