#pragma once

#include <functional>

#include "splitlv/integrators.hpp"

namespace splitlv {

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of log2(error) against log2(step size).
// Needs at least two points; all inputs must be positive.
OrderFit fit_order(const std::vector<double>& step_sizes,
                   const std::vector<double>& rms_errors);

struct ConvergenceReport {
  SchemeId scheme = SchemeId::Strang;
  std::vector<double> step_sizes;  // strictly decreasing
  std::vector<double> rms_errors;  // endpoint L2(Omega) error per step size
  // Log-log least-squares fit; NaN when some rms error is zero (e.g. the
  // scheme coincides with the reference).
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  int n_paths = 0;          // paths requested
  int excluded_paths = 0;   // overflowed and dropped from the averages
  bool exclusion_warning = false;  // more than 1% of paths dropped
  std::uint64_t master_seed = 0;
  double reference_h = 0.0;
};

// Endpoint of one integration on `path` at step size h, as the
// concatenated (x, y) vector. Injection point for the study: tests drive
// it with synthetic maps whose error law is known exactly.
using EndpointFn =
    std::function<Eigen::VectorXd(const BrownianPath& path, double h)>;

// Core of the study, parameterized over the integrators. For each path
// index k in [0, n_paths): generate one path at level(h_ref) + 1, evaluate
// the reference endpoint and the scheme endpoint at every ladder step on
// that same path, and record Euclidean endpoint distances. Paths that
// overflow anywhere are excluded and counted. The per-path map runs on
// `workers` workers; the reduction is serial in path order, so reports are
// bit-identical for every worker count.
ConvergenceReport strong_error_study_fn(
    const EndpointFn& scheme_endpoint, const EndpointFn& reference_endpoint,
    const std::vector<double>& step_sizes, double h_ref, double horizon,
    Eigen::Index m, int n_paths, std::uint64_t master_seed, SchemeId label,
    int workers);

// The study proper: scheme endpoints vs the symmetric splitting at h_ref.
// step_sizes must be strictly decreasing dyadic fractions of the horizon
// with h_ref <= min(step_sizes).
ConvergenceReport strong_error_study(const ModelParams& p, const State& z0,
                                     SchemeId scheme,
                                     const std::vector<double>& step_sizes,
                                     double h_ref, double horizon, int n_paths,
                                     std::uint64_t master_seed,
                                     int workers = 1);

struct MomentReport {
  SchemeId scheme = SchemeId::Strang;
  double order = 2.0;  // moment exponent
  std::vector<double> times;
  std::vector<double> x_moment;  // sample mean of |X_n|^order per node
  std::vector<double> y_moment;
  double x_supremum = 0.0;
  double y_supremum = 0.0;
  int n_paths = 0;
  bool sigma2_zero = false;  // the Y bound is only claimed in this regime
};

// Sample moments of the block norms along the trajectory and their suprema
// over time. Overflow on any path propagates (no exclusion here).
MomentReport moment_supremum(const ModelParams& p, const State& z0,
                             SchemeId scheme, double h, double horizon,
                             int n_paths, std::uint64_t master_seed,
                             double order, int workers = 1);

struct BoundAudit {
  bool ok = true;
  // Index of the first recorded state exceeding its per-step cap.
  std::optional<std::size_t> first_violation;
};

// Replays a splitting-scheme record against its path and verifies the
// per-step prey growth cap
//   X_{n+1} <= X_n * exp{eta2 h + sigma2 dW_n} * (1 + 4 eps)
// elementwise, with dW_n the full-step increment and eps the double-
// precision machine epsilon. Euler records are rejected: the cap comes
// from the splitting closed form.
BoundAudit pathwise_bound_check(const ModelParams& p,
                                const TrajectoryRecord& record,
                                const BrownianPath& path);

}  // namespace splitlv
