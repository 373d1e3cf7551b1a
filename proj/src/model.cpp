#include "splitlv/model.hpp"

#include <cmath>
#include <sstream>

namespace splitlv {
namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

bool ModelParams::diagonal_gamma() const {
  return gamma1.isDiagonal(0.0) && gamma2.isDiagonal(0.0);
}

bool State::strictly_positive() const {
  return x.size() > 0 && y.size() > 0 && (x.array() > 0.0).all() &&
         (y.array() > 0.0).all();
}

bool State::finite() const { return x.allFinite() && y.allFinite(); }

Eigen::VectorXd State::concatenated() const {
  Eigen::VectorXd z(x.size() + y.size());
  z << x, y;
  return z;
}

std::vector<std::string> validate(const ModelParams& p) {
  std::vector<std::string> violations;
  if (p.d < 1 || p.m < 1) {
    violations.emplace_back("dimension mismatch: d and m must be at least 1");
    return violations;
  }
  const auto shape = [&](const Eigen::MatrixXd& a, Eigen::Index rows,
                         Eigen::Index cols, const char* name) {
    if (a.rows() != rows || a.cols() != cols) {
      std::ostringstream os;
      os << "dimension mismatch: " << name << " must be " << rows << "x"
         << cols << ", got " << a.rows() << "x" << a.cols();
      violations.push_back(os.str());
      return false;
    }
    return true;
  };
  const bool g1_ok = shape(p.gamma1, p.d, p.d, "gamma1");
  const bool g2_ok = shape(p.gamma2, p.d, p.d, "gamma2");
  const bool e1_ok = shape(p.eta1, p.d, 1, "eta1");
  const bool e2_ok = shape(p.eta2, p.d, 1, "eta2");
  const bool s1_ok = shape(p.sigma1, p.d, p.m, "sigma1");
  const bool s2_ok = shape(p.sigma2, p.d, p.m, "sigma2");

  const auto finite = [&](const Eigen::MatrixXd& a, bool shaped,
                          const char* name) {
    if (shaped && !all_finite(a)) {
      violations.push_back(std::string("non-finite entry in ") + name);
      return false;
    }
    return shaped;
  };
  const bool g1_fin = finite(p.gamma1, g1_ok, "gamma1");
  const bool g2_fin = finite(p.gamma2, g2_ok, "gamma2");
  const bool e1_fin = finite(p.eta1, e1_ok, "eta1");
  const bool e2_fin = finite(p.eta2, e2_ok, "eta2");
  finite(p.sigma1, s1_ok, "sigma1");
  finite(p.sigma2, s2_ok, "sigma2");

  const auto gamma_signs = [&](const Eigen::MatrixXd& g, bool usable,
                               const char* name) {
    if (!usable) return;
    if ((g.diagonal().array() <= 0.0).any()) {
      violations.push_back(std::string("nonpositive gamma diagonal entry in ") +
                           name);
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        if (i != j && g(i, j) < 0.0) {
          violations.push_back(
              std::string("negative gamma off-diagonal entry in ") + name);
          return;
        }
      }
    }
  };
  gamma_signs(p.gamma1, g1_fin, "gamma1");
  gamma_signs(p.gamma2, g2_fin, "gamma2");

  if (e1_fin && (p.eta1.array() <= 0.0).any()) {
    violations.emplace_back("nonpositive eta entry in eta1");
  }
  if (e2_fin && (p.eta2.array() <= 0.0).any()) {
    violations.emplace_back("nonpositive eta entry in eta2");
  }
  return violations;
}

void ensure_valid(const ModelParams& p) {
  const auto violations = validate(p);
  if (violations.empty()) return;
  std::string msg = "invalid model parameters:";
  for (const auto& v : violations) {
    msg += "\n  - ";
    msg += v;
  }
  throw ConfigError(msg);
}

Eigen::VectorXd ito_correction(const ModelParams& p, int k) {
  if (k != 1 && k != 2) throw DomainError("ito_correction: k must be 1 or 2");
  const Eigen::MatrixXd& sigma = (k == 1) ? p.sigma1 : p.sigma2;
  return sigma.array().square().rowwise().sum();
}

ItoCoefficients ito_coefficients(const ModelParams& p, const State& z) {
  ItoCoefficients out;
  out.drift.resize(2 * p.d);
  out.drift.head(p.d) =
      z.x.array() * (-(p.gamma2 * z.y) + p.eta2).array();
  out.drift.tail(p.d) =
      z.y.array() * ((p.gamma1 * z.x) - p.eta1).array();
  out.diffusion.resize(2 * p.d, p.m);
  out.diffusion.topRows(p.d) = z.x.asDiagonal() * p.sigma2;
  out.diffusion.bottomRows(p.d) = z.y.asDiagonal() * p.sigma1;
  if (!out.drift.allFinite()) {
    Eigen::Index bad = 0;
    for (; bad < out.drift.size(); ++bad) {
      if (!std::isfinite(out.drift[bad])) break;
    }
    throw OverflowError("numerical overflow in drift evaluation", bad);
  }
  if (!out.diffusion.allFinite()) {
    throw OverflowError("numerical overflow in diffusion evaluation");
  }
  return out;
}

HamiltonianParts hamiltonians(const ModelParams& p, const State& z) {
  if (!z.strictly_positive()) {
    throw DomainError("log domain error: state must be strictly positive");
  }
  const Eigen::VectorXd lam1 = ito_correction(p, 1);
  const Eigen::VectorXd lam2 = ito_correction(p, 2);
  const Eigen::ArrayXd log_x = z.x.array().log();
  const Eigen::ArrayXd log_y = z.y.array().log();

  HamiltonianParts parts;
  parts.h1_x = (-p.gamma1.diagonal().array() * z.x.array() +
                (p.eta1.array() + 0.5 * lam1.array() * log_x))
                   .sum();
  parts.h1_y = (-p.gamma2.diagonal().array() * z.y.array() +
                (p.eta2.array() - 0.5 * lam2.array() * log_y))
                   .sum();
  parts.h1 = parts.h1_x + parts.h1_y;
  parts.h2_x = -(p.sigma1.transpose() * log_x.matrix());
  parts.h2_y = p.sigma2.transpose() * log_y.matrix();
  parts.h2 = parts.h2_x + parts.h2_y;
  return parts;
}

}  // namespace splitlv
