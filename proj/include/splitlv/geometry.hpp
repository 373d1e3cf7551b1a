#pragma once

#include <array>
#include <cstdint>

#include "splitlv/integrators.hpp"

namespace splitlv {

// State-dependent skew-symmetric form [[0, -K*],[K*, 0]] with
// K* = diag(1/(x_i y_i)). The lower block is constructed as the exact
// negation of the upper one, so K + K^T is identically zero.
Eigen::MatrixXd k_matrix(const State& z);

// Analytic Jacobians of the subflows with the noise increment frozen,
// i.e. derivatives with respect to the initial state only.
Eigen::MatrixXd flow1_jacobian(const ModelParams& p, const State& z, double t,
                               const Eigen::VectorXd& dw);
Eigen::MatrixXd flow2_jacobian(const ModelParams& p, const State& z, double t,
                               const Eigen::VectorXd& dw);

// Noise for one step, kept as the two half-interval increments so that the
// symmetric scheme and the Jacobians can be driven by one draw. full()
// reproduces the full-interval increment bitwise when the halves come from
// increment_between on the same path.
struct StepNoise {
  Eigen::VectorXd first_half;
  Eigen::VectorXd second_half;
  Eigen::VectorXd full() const { return first_half + second_half; }
};

// One step of `scheme` from z under the frozen noise (the Euler baseline's
// positivity flag is dropped here; use step_em directly if you need it).
State apply_scheme_step(const ModelParams& p, const State& z, double h,
                        const StepNoise& noise, SchemeId scheme);

enum class JacobianMode { Analytic, FiniteDifference };

// d(Z_{n+1})/d(Z_n) of one scheme step under frozen noise. Analytic mode
// composes the subflow Jacobians by the chain rule and exists for the
// splitting schemes only; finite-difference mode uses central differences
// with a per-component bump of 1e-6 * max(|z_i|, 1).
Eigen::MatrixXd step_jacobian(const ModelParams& p, const State& z, double h,
                              const StepNoise& noise, SchemeId scheme,
                              JacobianMode mode);

struct SymplecticCheck {
  SchemeId scheme = SchemeId::Strang;
  State z_before;
  State z_after;
  Eigen::MatrixXd jacobian;
  double residual_norm = 0.0;      // ||J^T K(Z') J - K(Z)||_F
  double relative_residual = 0.0;  // residual_norm / ||K(Z)||_F
};

// One-step defect of the discrete conservation law J^T K(Z') J = K(Z).
// Splitting schemes use the analytic Jacobian; the Euler baseline falls
// back to finite differences. Requires diagonal interaction matrices.
SymplecticCheck symplectic_residual(const ModelParams& p, const State& z,
                                    double h, const StepNoise& noise,
                                    SchemeId scheme);

// Half the absolute value of the homogeneous-coordinate determinant.
double triangle_area(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                     const Eigen::Vector2d& p3);

struct PhaseAreaSeries {
  std::vector<double> times;
  std::vector<SchemeId> schemes;
  // areas[s][n]: triangle area of scheme s at times[n]. A node is NaN if
  // one of the scheme's corner trajectories overflowed earlier (the Euler
  // baseline can die at coarse steps; the series keeps going so the
  // surviving schemes remain comparable).
  std::vector<std::vector<double>> areas;
  std::vector<double> reference_areas;
  std::vector<std::vector<double>> abs_errors;  // |S_n - S_ref_n| per scheme
};

// Tracks the area of the triangle spanned by three coupled trajectories.
// Each corner has its own Wiener path (path_index 0/1/2 under the seed),
// shared across all schemes and the reference, which is the symmetric
// splitting at step h_ref. Scalar model only (d = 1); h and h_ref must be
// dyadic fractions of the horizon with h a multiple of h_ref.
PhaseAreaSeries phase_area_experiment(const ModelParams& p,
                                      const std::array<State, 3>& starts,
                                      const std::vector<SchemeId>& schemes,
                                      double h, double h_ref, double horizon,
                                      std::uint64_t master_seed);

}  // namespace splitlv
