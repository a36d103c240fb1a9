// SPDX-License-Identifier: MIT
//
// Smooth convex test functions with exact gradient Lipschitz constants and,
// where possible, exact minimizers. These drive the benchmark runs and the
// worst-case attainment checks.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "common.hpp"

namespace pepfo {

struct FunctionOracle {
  std::string family;
  int d = 0;
  double L = 0.0;  // Lipschitz constant of the gradient
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  std::optional<Eigen::VectorXd> minimizer;
  double min_value = 0.0;  // value(*minimizer) when the minimizer is known
};

// phi(x) = (L/2)||x||^2. The single quadratic on which the momentum method
// with the doubled-final rule attains its gradient bound exactly.
FunctionOracle make_quadratic_phi(double L, int d);

// The radially symmetric Huber function with kink radius R/(N+1):
//   psi(x) = (L/2)||x||^2                                   for ||x|| <= R/(N+1)
//   psi(x) = (LR/(N+1))||x|| - LR^2/(2(N+1)^2)              otherwise
// Its gradient norm is the constant LR/(N+1) outside the kink, which makes
// plain gradient descent started at distance R attain that value at every
// iterate 0..N.
FunctionOracle make_huber_psi(double L, double R, int N, int d);

// f(x) = (1/2) x'Qx + p'x with Q PSD; L = lambda_max(Q), minimizer solves
// Qx = -p (p must lie in the range of Q for the minimizer to exist).
FunctionOracle make_psd_quadratic(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p);

// Seeded quadratic f(x) = (1/2)(x - c)'Q(x - c) whose largest eigenvalue is
// exactly L (the rest drawn uniformly in [0, L]) and whose eigenbasis comes
// from seeded Givens rotations. Gradient at the minimizer is exactly zero.
FunctionOracle make_random_psd_quadratic(std::uint64_t seed, int d, double L);

// f(x) = (1/2)||Ax - b||^2; L = sigma_max(A)^2.
FunctionOracle make_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Seeded consistent least squares: A is rescaled so sigma_max(A)^2 equals the
// stored L, and b = A c makes the minimizer exact with optimal value zero.
FunctionOracle make_random_least_squares(std::uint64_t seed, int rows, int d, double L);

// f(x) = mu * (logsumexp((Ax - b)/mu) - log n), rows of A centered so the
// known stationary point c (with b = A c) is the exact minimizer; the
// carried constant is L = sigma_max(A)^2 / mu.
FunctionOracle make_random_log_sum_exp(std::uint64_t seed, int d, double mu);

struct OracleCheck {
  bool ok = true;
  double max_fd_rel_err = 0.0;        // gradient vs central differences
  double max_lipschitz_excess = 0.0;  // ||g(u)-g(v)|| - L||u-v||, relative
  double grad_at_min_norm = 0.0;
  std::string detail;
};

// Samples random points/pairs and confirms the oracle's own consistency:
// finite-difference gradient match (1e-5 relative), the Lipschitz inequality
// (1e-8 relative slack), and stationarity at the minimizer (1e-10 * L scale).
OracleCheck check_oracle(const FunctionOracle& f, std::uint64_t seed, int samples = 10);

}  // namespace pepfo
