// SPDX-License-Identifier: MIT
//
// Algorithm runners. Every method here is a fixed-step first-order scheme;
// the momentum boxes are implemented exactly as stated (primary sequence y,
// secondary sequence x, optional averaging sequence z) and the generic
// runner replays any step-coefficient matrix. Traces record every point,
// gradient, and value so that equivalence and bound checks can replay runs
// without re-evaluating the oracle.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "oracles.hpp"
#include "params.hpp"
#include "steps.hpp"

namespace pepfo {

enum class Family {
  Gm,
  Fgm1,
  Fgm2,
  Ogm1,
  Ogm2,
  Gogm1,
  Gogm2,
  Gogm1Prime,
  Gogm2Prime,
  OgmM,
  OgmOg,
  OgmA,
  FoGeneric,
};

const char* to_string(Family f);
std::optional<Family> family_from_string(const std::string& s);

struct MethodSpec {
  Family family = Family::Gm;
  int N = 0;
  int m = -1;        // OgmM: momentum iterations before plain gradient steps
  double a = 0.0;    // OgmA
  double gm_step = 1.0;
  std::optional<ParamSeq> params;  // sequence override for the momentum boxes
  std::optional<StepMatrix> h;     // FoGeneric
};

struct IterateTrace {
  int N = 0;
  double L = 0.0;
  std::vector<Eigen::VectorXd> x, y;          // size N+1; y[0] = x[0]
  std::vector<Eigen::VectorXd> grad_x, grad_y;
  std::vector<double> f_x, f_y;
  std::vector<Eigen::VectorXd> z;             // only for the averaging forms
  // One gradient step past the end: y_post = x_N - (1/L) grad f(x_N). The
  // post-step cost bounds refer to this point.
  Eigen::VectorXd y_post;
  double f_y_post = 0.0;
  Eigen::VectorXd grad_y_post;

  double grad_norm_x(int i) const { return grad_x[i].norm(); }
  double grad_norm_y(int i) const { return grad_y[i].norm(); }
  double min_grad_norm_x() const;
};

// x_{i+1} = x_i - (1/L) sum_k h_{i+1,k} grad f(x_k), gradients evaluated
// once per point. Throws std::runtime_error naming the iteration if the
// oracle returns a non-finite value or gradient.
IterateTrace run_fo(const StepMatrix& h, const FunctionOracle& f, const Eigen::VectorXd& x0);

IterateTrace run(const MethodSpec& spec, const FunctionOracle& f, const Eigen::VectorXd& x0);

struct EquivReport {
  double max_rel_deviation = 0.0;
  int argmax_index = 0;
};

// Max relative deviation over the shared x and y iterates of two runs on the
// same oracle and start point, scaled by max(1, ||iterate||).
EquivReport check_equivalence(const MethodSpec& A, const MethodSpec& B,
                              const FunctionOracle& f, const Eigen::VectorXd& x0);

}  // namespace pepfo
