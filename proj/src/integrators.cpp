#include "splitlv/integrators.hpp"

#include <cmath>

namespace splitlv {
namespace {

void require_increment_size(const ModelParams& p, const Eigen::VectorXd& dw) {
  if (dw.size() != p.m) {
    throw std::invalid_argument("Wiener increment has wrong dimension");
  }
}

// Componentwise y * exp(exponent) with overflow reporting. `offset` maps
// the local component index into the concatenated (x, y) coordinates.
Eigen::VectorXd exp_scale(const Eigen::VectorXd& base,
                          const Eigen::VectorXd& exponent,
                          Eigen::Index offset) {
  Eigen::VectorXd out(base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    out[i] = base[i] * std::exp(exponent[i]);
    if (!std::isfinite(out[i])) {
      throw OverflowError("numerical overflow", offset + i);
    }
  }
  return out;
}

}  // namespace

std::string_view scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::LieTrotter:
      return "lie_trotter";
    case SchemeId::Strang:
      return "strang";
    case SchemeId::EulerMaruyama:
      return "euler_maruyama";
  }
  return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  if (name == "lie_trotter") return SchemeId::LieTrotter;
  if (name == "strang") return SchemeId::Strang;
  if (name == "euler_maruyama") return SchemeId::EulerMaruyama;
  return std::nullopt;
}

State flow1(const ModelParams& p, const State& z, double t,
            const Eigen::VectorXd& dw) {
  require_increment_size(p, dw);
  const Eigen::VectorXd exponent =
      (p.gamma1 * z.x - p.eta1 - 0.5 * ito_correction(p, 1)) * t +
      p.sigma1 * dw;
  State out;
  out.x = z.x;
  out.y = exp_scale(z.y, exponent, p.d);
  return out;
}

State flow2(const ModelParams& p, const State& z, double t,
            const Eigen::VectorXd& dw) {
  require_increment_size(p, dw);
  const Eigen::VectorXd exponent =
      (-(p.gamma2 * z.y) + p.eta2 - 0.5 * ito_correction(p, 2)) * t +
      p.sigma2 * dw;
  State out;
  out.x = exp_scale(z.x, exponent, 0);
  out.y = z.y;
  return out;
}

State step_lie_trotter(const ModelParams& p, const State& z, double h,
                       const Eigen::VectorXd& dw) {
  return flow1(p, flow2(p, z, h, dw), h, dw);
}

State step_strang(const ModelParams& p, const State& z, double h,
                  const Eigen::VectorXd& dw_first,
                  const Eigen::VectorXd& dw_second) {
  const State half = flow2(p, z, 0.5 * h, dw_first);
  const State full = flow1(p, half, h, dw_first + dw_second);
  return flow2(p, full, 0.5 * h, dw_second);
}

EmResult step_em(const ModelParams& p, const State& z, double h,
                 const Eigen::VectorXd& dw) {
  require_increment_size(p, dw);
  const ItoCoefficients co = ito_coefficients(p, z);
  const Eigen::VectorXd next =
      z.concatenated() + co.drift * h + co.diffusion * dw;
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    if (!std::isfinite(next[i])) {
      throw OverflowError("numerical overflow", i);
    }
  }
  EmResult out;
  out.state.x = next.head(p.d);
  out.state.y = next.tail(p.d);
  out.positivity_ok = (next.array() > 0.0).all();
  return out;
}

TrajectoryRecord integrate_trajectory(const ModelParams& p, const State& z0,
                                      SchemeId scheme, double h,
                                      const BrownianPath& path) {
  if (!z0.strictly_positive()) {
    throw DomainError("initial state must be strictly positive");
  }
  const auto schedule = steps_for(path, h);

  TrajectoryRecord rec;
  rec.scheme = scheme;
  rec.h = h;
  rec.path_key = {path.master_seed, path.path_index};
  rec.times.reserve(schedule.size() + 1);
  rec.states.reserve(schedule.size() + 1);
  rec.positivity_ok.reserve(schedule.size() + 1);
  rec.times.push_back(0.0);
  rec.states.push_back(z0);
  rec.positivity_ok.push_back(1);

  State z = z0;
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    const StepWindow& w = schedule[n];
    bool positive = true;
    try {
      switch (scheme) {
        case SchemeId::LieTrotter: {
          const Eigen::VectorXd dw = increment_between(path, w.begin, w.end);
          z = step_lie_trotter(p, z, h, dw);
          positive = z.strictly_positive();
          break;
        }
        case SchemeId::Strang: {
          const Eigen::VectorXd dw1 = increment_between(path, w.begin, w.mid);
          const Eigen::VectorXd dw2 = increment_between(path, w.mid, w.end);
          z = step_strang(p, z, h, dw1, dw2);
          positive = z.strictly_positive();
          break;
        }
        case SchemeId::EulerMaruyama: {
          const Eigen::VectorXd dw = increment_between(path, w.begin, w.end);
          EmResult res = step_em(p, z, h, dw);
          z = res.state;
          positive = res.positivity_ok;
          break;
        }
      }
    } catch (const OverflowError&) {
      rec.overflow_at = n;
      break;
    }
    rec.times.push_back(static_cast<double>(n + 1) * h);
    rec.states.push_back(z);
    rec.positivity_ok.push_back(positive ? 1 : 0);
  }
  return rec;
}

}  // namespace splitlv
