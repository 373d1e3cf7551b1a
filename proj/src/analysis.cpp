#include "splitlv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splitlv/parallel.hpp"

namespace splitlv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int required_level(const std::vector<double>& step_sizes, double h_ref,
                   double horizon) {
  const auto ref_level = dyadic_level(horizon, h_ref);
  if (!ref_level) throw GridError("incompatible step size");
  double previous = std::numeric_limits<double>::infinity();
  for (const double h : step_sizes) {
    if (!dyadic_level(horizon, h)) throw GridError("incompatible step size");
    if (!(h < previous)) {
      throw std::invalid_argument(
          "step sizes must be strictly decreasing");
    }
    previous = h;
  }
  if (step_sizes.empty()) {
    throw std::invalid_argument("step size ladder is empty");
  }
  if (h_ref > step_sizes.back()) {
    throw std::invalid_argument(
        "reference step size must not exceed the smallest ladder step");
  }
  return *ref_level + 1;  // keeps the reference's half-steps on-grid
}

Eigen::VectorXd endpoint_of(const TrajectoryRecord& rec) {
  if (rec.overflow_at) {
    throw OverflowError("numerical overflow before the horizon");
  }
  return rec.states.back().concatenated();
}

}  // namespace

OrderFit fit_order(const std::vector<double>& step_sizes,
                   const std::vector<double>& rms_errors) {
  if (step_sizes.size() != rms_errors.size()) {
    throw std::invalid_argument("fit_order: length mismatch");
  }
  if (step_sizes.size() < 2) {
    throw std::invalid_argument("fit_order: need >= 2 points");
  }
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    if (!(step_sizes[i] > 0.0) || !(rms_errors[i] > 0.0)) {
      throw std::invalid_argument("fit_order: inputs must be positive");
    }
  }
  const auto n = static_cast<double>(step_sizes.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    mean_x += std::log2(step_sizes[i]);
    mean_y += std::log2(rms_errors[i]);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    const double dx = std::log2(step_sizes[i]) - mean_x;
    const double dy = std::log2(rms_errors[i]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_order: step sizes are all equal");
  }
  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

ConvergenceReport strong_error_study_fn(
    const EndpointFn& scheme_endpoint, const EndpointFn& reference_endpoint,
    const std::vector<double>& step_sizes, double h_ref, double horizon,
    Eigen::Index m, int n_paths, std::uint64_t master_seed, SchemeId label,
    int workers) {
  if (n_paths < 2) throw std::invalid_argument("need at least 2 paths");
  const int level = required_level(step_sizes, h_ref, horizon);
  const std::size_t n_steps = step_sizes.size();

  // Per-path result slots; reduced serially below in path order.
  std::vector<std::vector<double>> errors(
      static_cast<std::size_t>(n_paths), std::vector<double>(n_steps, kNaN));
  std::vector<std::uint8_t> excluded(static_cast<std::size_t>(n_paths), 0);

  parallel_for_index(n_paths, workers, [&](std::int64_t k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      const BrownianPath path = generate_path(
          master_seed, static_cast<std::uint64_t>(k), horizon, level, m);
      const Eigen::VectorXd ref = reference_endpoint(path, h_ref);
      for (std::size_t i = 0; i < n_steps; ++i) {
        errors[idx][i] = (scheme_endpoint(path, step_sizes[i]) - ref).norm();
      }
    } catch (const OverflowError&) {
      excluded[idx] = 1;
    }
  });

  ConvergenceReport report;
  report.scheme = label;
  report.step_sizes = step_sizes;
  report.n_paths = n_paths;
  report.master_seed = master_seed;
  report.reference_h = h_ref;
  for (const auto flag : excluded) report.excluded_paths += flag;
  const int included = n_paths - report.excluded_paths;
  if (included == 0) {
    throw OverflowError("all sample paths overflowed");
  }
  report.exclusion_warning =
      report.excluded_paths * 100 > n_paths;  // strictly more than 1%

  report.rms_errors.assign(n_steps, 0.0);
  for (std::size_t i = 0; i < n_steps; ++i) {
    double sum_sq = 0.0;
    for (int k = 0; k < n_paths; ++k) {
      if (!excluded[static_cast<std::size_t>(k)]) {
        const double e = errors[static_cast<std::size_t>(k)][i];
        sum_sq += e * e;
      }
    }
    report.rms_errors[i] = std::sqrt(sum_sq / static_cast<double>(included));
  }

  bool fittable = true;
  for (const double e : report.rms_errors) {
    if (!(e > 0.0)) fittable = false;
  }
  if (fittable && n_steps >= 2) {
    const OrderFit fit = fit_order(report.step_sizes, report.rms_errors);
    report.fitted_slope = fit.slope;
    report.fitted_intercept = fit.intercept;
  } else {
    report.fitted_slope = kNaN;
    report.fitted_intercept = kNaN;
  }
  return report;
}

ConvergenceReport strong_error_study(const ModelParams& p, const State& z0,
                                     SchemeId scheme,
                                     const std::vector<double>& step_sizes,
                                     double h_ref, double horizon, int n_paths,
                                     std::uint64_t master_seed, int workers) {
  ensure_valid(p);
  const EndpointFn scheme_fn = [&p, &z0, scheme](const BrownianPath& path,
                                                 double h) {
    return endpoint_of(integrate_trajectory(p, z0, scheme, h, path));
  };
  const EndpointFn ref_fn = [&p, &z0](const BrownianPath& path, double h) {
    return endpoint_of(
        integrate_trajectory(p, z0, SchemeId::Strang, h, path));
  };
  return strong_error_study_fn(scheme_fn, ref_fn, step_sizes, h_ref, horizon,
                               p.m, n_paths, master_seed, scheme, workers);
}

MomentReport moment_supremum(const ModelParams& p, const State& z0,
                             SchemeId scheme, double h, double horizon,
                             int n_paths, std::uint64_t master_seed,
                             double order, int workers) {
  ensure_valid(p);
  if (n_paths < 1) throw std::invalid_argument("need at least 1 path");
  if (!(order >= 1.0)) {
    throw std::invalid_argument("moment order must be at least 1");
  }
  const auto level = dyadic_level(horizon, h);
  if (!level) throw GridError("incompatible step size");
  const std::size_t n_nodes = (std::size_t{1} << *level) + 1;

  std::vector<std::vector<double>> x_pow(
      static_cast<std::size_t>(n_paths), std::vector<double>(n_nodes, 0.0));
  std::vector<std::vector<double>> y_pow = x_pow;

  parallel_for_index(n_paths, workers, [&](std::int64_t k) {
    const auto idx = static_cast<std::size_t>(k);
    const BrownianPath path =
        generate_path(master_seed, static_cast<std::uint64_t>(k), horizon,
                      *level + 1, p.m);
    const TrajectoryRecord rec =
        integrate_trajectory(p, z0, scheme, h, path);
    if (rec.overflow_at) {
      throw OverflowError("numerical overflow before the horizon");
    }
    for (std::size_t n = 0; n < n_nodes; ++n) {
      x_pow[idx][n] = std::pow(rec.states[n].x.norm(), order);
      y_pow[idx][n] = std::pow(rec.states[n].y.norm(), order);
    }
  });

  MomentReport report;
  report.scheme = scheme;
  report.order = order;
  report.n_paths = n_paths;
  report.sigma2_zero = p.sigma2.isZero(0.0);
  report.times.resize(n_nodes);
  report.x_moment.assign(n_nodes, 0.0);
  report.y_moment.assign(n_nodes, 0.0);
  for (std::size_t n = 0; n < n_nodes; ++n) {
    report.times[n] = static_cast<double>(n) * h;
    double sx = 0.0;
    double sy = 0.0;
    for (int k = 0; k < n_paths; ++k) {
      sx += x_pow[static_cast<std::size_t>(k)][n];
      sy += y_pow[static_cast<std::size_t>(k)][n];
    }
    report.x_moment[n] = sx / static_cast<double>(n_paths);
    report.y_moment[n] = sy / static_cast<double>(n_paths);
  }
  report.x_supremum =
      *std::max_element(report.x_moment.begin(), report.x_moment.end());
  report.y_supremum =
      *std::max_element(report.y_moment.begin(), report.y_moment.end());
  return report;
}

BoundAudit pathwise_bound_check(const ModelParams& p,
                                const TrajectoryRecord& record,
                                const BrownianPath& path) {
  if (record.scheme == SchemeId::EulerMaruyama) {
    throw std::invalid_argument(
        "pathwise_bound_check requires a splitting-scheme record");
  }
  if (record.path_key.master_seed != path.master_seed ||
      record.path_key.path_index != path.path_index) {
    throw std::invalid_argument("record was not produced from this path");
  }
  const auto schedule = steps_for(path, record.h);
  const double slack =
      1.0 + 4.0 * std::numeric_limits<double>::epsilon();

  BoundAudit audit;
  for (std::size_t n = 0; n + 1 < record.states.size(); ++n) {
    const Eigen::VectorXd dw =
        increment_between(path, schedule[n].begin, schedule[n].end);
    const Eigen::ArrayXd cap =
        record.states[n].x.array() *
        (p.eta2.array() * record.h + (p.sigma2 * dw).array()).exp() * slack;
    if ((record.states[n + 1].x.array() > cap).any()) {
      audit.ok = false;
      audit.first_violation = n + 1;
      return audit;
    }
  }
  return audit;
}

}  // namespace splitlv
