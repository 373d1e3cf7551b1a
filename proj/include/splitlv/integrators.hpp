#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "splitlv/brownian.hpp"
#include "splitlv/model.hpp"

namespace splitlv {

enum class SchemeId { LieTrotter, Strang, EulerMaruyama };

// Canonical lowercase names used by the CLI and in output file names:
// "lie_trotter", "strang", "euler_maruyama".
std::string_view scheme_name(SchemeId scheme);
std::optional<SchemeId> parse_scheme(std::string_view name);

// Exact solution of the predator subsystem over an interval of length t
// whose Wiener increment is dw: x is held fixed and
//   y' = y * exp{(gamma1 x - eta1 - lambda1/2) t + sigma1 dw}.
// The full exponent vector is formed first and exponentiated once per
// component, so each output component has a single rounding site.
State flow1(const ModelParams& p, const State& z, double t,
            const Eigen::VectorXd& dw);

// Mirror image for the prey subsystem: y held fixed and
//   x' = x * exp{(-gamma2 y + eta2 - lambda2/2) t + sigma2 dw}.
State flow2(const ModelParams& p, const State& z, double t,
            const Eigen::VectorXd& dw);

// First-order splitting step: prey flow over h, then predator flow over h,
// both driven by the same full-interval increment dw. Implemented literally
// as flow1(flow2(z)), so the composition identity is bitwise.
State step_lie_trotter(const ModelParams& p, const State& z, double h,
                       const Eigen::VectorXd& dw);

// Symmetric splitting step: half prey flow with the first half-interval
// increment, full predator flow with the whole increment, half prey flow
// with the second half-interval increment.
State step_strang(const ModelParams& p, const State& z, double h,
                  const Eigen::VectorXd& dw_first,
                  const Eigen::VectorXd& dw_second);

struct EmResult {
  State state;
  bool positivity_ok = true;
};

// Euler-Maruyama on the Ito form. May leave the positive orthant; that is
// reported through positivity_ok and never repaired.
EmResult step_em(const ModelParams& p, const State& z, double h,
                 const Eigen::VectorXd& dw);

struct PathKey {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

struct TrajectoryRecord {
  SchemeId scheme = SchemeId::Strang;
  double h = 0.0;
  std::vector<double> times;   // 0, h, ..., up to horizon (or overflow)
  std::vector<State> states;   // states[0] is the initial state
  PathKey path_key;
  // One flag per recorded state; entry 0 describes the initial state.
  // Splitting schemes keep these true; the Euler baseline may not.
  std::vector<std::uint8_t> positivity_ok;
  // Index n of the step [t_n, t_{n+1}) that overflowed; no states are
  // recorded past t_n.
  std::optional<std::size_t> overflow_at;
};

// Applies the scheme's one-step map along steps_for(path, h), pulling
// increments from the path (half-interval increments for the symmetric
// scheme). Stops at the first overflow and records where.
TrajectoryRecord integrate_trajectory(const ModelParams& p, const State& z0,
                                      SchemeId scheme, double h,
                                      const BrownianPath& path);

}  // namespace splitlv
