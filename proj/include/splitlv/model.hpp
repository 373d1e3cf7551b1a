#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "splitlv/errors.hpp"

namespace splitlv {

// Coefficients of the 2d-dimensional predator-prey system
//
//   dX = X * [(-gamma2 Y + eta2) dt + sigma2 dW]
//   dY = Y * [( gamma1 X - eta1) dt + sigma1 dW]
//
// with d prey components X, d predator components Y, m Wiener components W,
// and * the componentwise product.
struct ModelParams {
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  Eigen::MatrixXd gamma1;  // d x d predator gain from prey, positive diagonal
  Eigen::MatrixXd gamma2;  // d x d prey loss to predators, positive diagonal
  Eigen::VectorXd eta1;    // d   predator decay rates, positive
  Eigen::VectorXd eta2;    // d   prey growth rates, positive
  Eigen::MatrixXd sigma1;  // d x m noise acting on the predator block
  Eigen::MatrixXd sigma2;  // d x m noise acting on the prey block

  // The conserved-form machinery is only defined when the interaction
  // matrices are diagonal; geometry entry points refuse anything else.
  bool diagonal_gamma() const;
};

// Phase point: prey block x, predator block y.
struct State {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  Eigen::Index dim() const { return x.size(); }
  bool strictly_positive() const;
  bool finite() const;
  Eigen::VectorXd concatenated() const;  // (x^T, y^T)^T, length 2d
};

// Names every violated parameter invariant; empty result means valid.
std::vector<std::string> validate(const ModelParams& p);

// Throws ConfigError listing all violations found by validate().
void ensure_valid(const ModelParams& p);

// Row sums of squared noise magnitudes: lambda_i = sum_j sigma_ij^2.
// k = 1 selects sigma1, k = 2 selects sigma2. This is the drift correction
// appearing in the closed-form flows and the conserved quantities.
Eigen::VectorXd ito_correction(const ModelParams& p, int k);

struct ItoCoefficients {
  Eigen::VectorXd drift;      // length 2d, prey block first
  Eigen::MatrixXd diffusion;  // 2d x m
};

// Drift and diffusion of the Ito form at z. Positivity of z is not
// required: the Euler baseline evaluates this wherever it lands.
ItoCoefficients ito_coefficients(const ModelParams& p, const State& z);

// Conserved quantities of the deterministic/stochastic split, broken into
// the part depending only on x and the part depending only on y. The
// totals are formed literally as part_x + part_y, so the recomposition
// identity h1 == h1_x + h1_y holds bitwise.
struct HamiltonianParts {
  double h1 = 0.0;
  double h1_x = 0.0;
  double h1_y = 0.0;
  Eigen::VectorXd h2;    // length m
  Eigen::VectorXd h2_x;  // length m
  Eigen::VectorXd h2_y;  // length m
};

// Requires a strictly positive state (logarithms). Only the diagonal
// interaction strengths gamma_ii enter the formulas.
HamiltonianParts hamiltonians(const ModelParams& p, const State& z);

}  // namespace splitlv
