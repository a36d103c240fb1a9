// SPDX-License-Identifier: MIT
//
// Momentum-parameter sequences and their validity rules.
//
// Every accelerated method in this library is driven by a scalar sequence
// v_0..v_N (written t_i or theta_i depending on the rule) together with its
// partial sums. Two rules exist:
//
//   plain rule:          v_i^2 <= S_i  with  S_i = sum_{l<=i} v_l
//   doubled-final rule:  same for i < N, but S_N = 2*sum_{l<N} v_l + v_N
//                        and v_N^2 <= S_N
//
// The square-root recursion v_{i+1} = (1 + sqrt(1 + 4 v_i^2))/2 satisfies the
// plain rule with equality; replacing 4 by 8 at the final step satisfies the
// doubled-final rule with equality. All step-coefficient formulas, worst-case
// bounds, and dual certificates in this library are parameterized by such a
// sequence.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace pepfo {

enum class SeqKind { FgmT, OgmTheta, OgmA, OgmOg, Custom };

const char* to_string(SeqKind k);
std::optional<SeqKind> seq_kind_from_string(const std::string& s);

struct ParamSeq {
  SeqKind kind = SeqKind::Custom;
  int N = 0;
  double a = 0.0;  // only meaningful for OgmA
  bool final_rule_doubled = false;
  std::vector<double> values;        // size N+1, values[0] == 1
  std::vector<double> partial_sums;  // size N+1, per the rule above
};

// The square-root recursion applied N times; plain rule holds with equality.
ParamSeq make_fgm_t(int N);

// Same recursion for i <= N-2, the 8-factor step at i = N-1; doubled-final
// rule holds with equality.
ParamSeq make_ogm_theta(int N);

// Recursion for i = 1..m-1 with m = floor(N/2), then the linear tail
// v_i = (N-i+1)/2. Plain rule holds with strict slack in the tail; this is
// the sequence whose slack sum maximizes the smallest-gradient certificate.
ParamSeq make_ogm_og(int N);

// Arithmetic sequence v_i = (i+a)/a for a >= 2; plain rule holds.
ParamSeq make_ogm_a(double a, int N);

// Admits caller-provided values iff every rule inequality holds; throws
// RuleViolation otherwise. values[0] must be exactly 1.
ParamSeq make_custom(const std::vector<double>& values, bool final_rule_doubled);

// Seeded generator of valid Custom sequences: each element is drawn as a
// uniform fraction in [0.35, 0.98] of the largest value the rule allows.
ParamSeq make_random_valid(std::uint64_t seed, int N, bool final_rule_doubled);

// Reinterpret a plain-rule sequence under the doubled-final rule (the final
// partial sum can only grow, so validity is preserved).
ParamSeq as_doubled_final(const ParamSeq& seq);

struct RuleCheck {
  int index = -1;
  double slack = 0.0;  // negative when violated
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<RuleCheck> violations;
  std::string summary() const;
};

// Report-style check of every invariant: values[0] == 1, positivity, stored
// partial sums consistent with the rule, v_i^2 <= S_i with relative
// tolerance 1e-9 scaled by max(1, S_i).
ValidationReport validate(const ParamSeq& seq);

// partial_sums[i] - values[i]^2 for every i.
std::vector<double> rule_slacks(const ParamSeq& seq);
double slack_sum(const ParamSeq& seq);

// JSON round trip: {kind, N, a?, final_rule_doubled, values, partial_sums}.
std::string to_json(const ParamSeq& seq);
ParamSeq param_seq_from_json(const std::string& text);

}  // namespace pepfo
