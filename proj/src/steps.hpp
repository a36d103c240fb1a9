// SPDX-License-Identifier: MIT
//
// Fixed step-coefficient matrices.
//
// A fixed-step first-order method is fully described by a lower-triangular
// array h_{i+1,k} (rows i = 0..N-1, columns k = 0..i):
//
//   x_{i+1} = x_i - (1/L) * sum_{k=0}^{i} h_{i+1,k} * grad f(x_k)
//
// This module produces h for every momentum rule in the library, in closed
// form and in recursive form, and exposes the column sums that the PEP
// matrices are built from.
#pragma once

#include <iosfwd>
#include <vector>

#include "params.hpp"

namespace pepfo {

enum class StepOrigin {
  Gm,
  Fgm,
  Ogm,
  OgmPrime,
  Gogm,
  GogmPrime,
  GogmRecursive,
  OgmFinalRecursive,
  Custom,
};

const char* to_string(StepOrigin o);

struct StepMatrix {
  int N = 0;
  StepOrigin origin = StepOrigin::Custom;
  // rows[i] holds h_{i+1,k} for k = 0..i.
  std::vector<std::vector<double>> rows;

  // h_{i+1,k} with 1 <= i_plus_1 <= N and 0 <= k < i_plus_1.
  double entry(int i_plus_1, int k) const;

  // w[i][k] = sum_{j=k+1}^{i} h_{j,k} for k < i, with rows i = 0..N.
  // w[i] is the weight of grad f(x_k) accumulated in x_0 - x_i, times L.
  std::vector<std::vector<double>> column_sum_table() const;
};

// Constant diagonal h_{i+1,i} = step (plain gradient descent).
StepMatrix h_gm(int N, double step = 1.0);

// Closed forms driven by a sequence. Each builder checks that the sequence
// satisfies the rule the formula was derived under and throws RuleViolation
// on mismatch:
//   h_fgm             exact plain-rule recursion (zero slack)
//   h_ogm             exact doubled-final recursion (zero slack)
//   h_ogm_prime       exact plain-rule recursion, final step included
//   h_gogm            any doubled-final-rule sequence
//   h_gogm_prime      any plain-rule sequence
StepMatrix h_fgm(const ParamSeq& t);
StepMatrix h_ogm(const ParamSeq& theta);
StepMatrix h_ogm_prime(const ParamSeq& t);
StepMatrix h_gogm(const ParamSeq& theta);
StepMatrix h_gogm_prime(const ParamSeq& t);

// Row-recursive equivalent of h_gogm (each row is a scaled copy of the
// previous row except for its last two entries).
StepMatrix h_gogm_recursive(const ParamSeq& theta);

// The same recursion specialized to the exact doubled-final sequence, where
// the scale factor simplifies to (theta_i - 1)/theta_{i+1}.
StepMatrix h_ogm_final_recursive(const ParamSeq& theta);

StepMatrix h_custom(std::vector<std::vector<double>> rows);

// Largest relative entrywise gap, scaled by max(1, |a|).
double max_rel_gap(const StepMatrix& a, const StepMatrix& b);

// CSV with header "i,k,h": one line per coefficient h_{i,k}, i = 1..N.
void write_step_csv(const StepMatrix& h, std::ostream& os);

}  // namespace pepfo
