// SPDX-License-Identifier: MIT
#include "steps.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace pepfo {

namespace {

void require_valid_rule(const ParamSeq& seq, bool doubled, const char* who) {
  if (seq.final_rule_doubled != doubled) {
    throw RuleViolation(std::string(who) + ": sequence uses the " +
                        (seq.final_rule_doubled ? "doubled-final" : "plain") +
                        " rule but this formula needs the " +
                        (doubled ? "doubled-final" : "plain") + " rule");
  }
  ValidationReport r = validate(seq);
  if (!r.ok) throw RuleViolation(std::string(who) + ": " + r.summary());
}

void require_zero_slack(const ParamSeq& seq, const char* who) {
  for (int i = 0; i <= seq.N; ++i) {
    const double slack = seq.partial_sums[i] - seq.values[i] * seq.values[i];
    if (std::fabs(slack) > 1e-9 * std::max(1.0, seq.partial_sums[i])) {
      std::ostringstream os;
      os << who << ": formula needs the exact square-root recursion, but the rule slack at i="
         << i << " is " << slack;
      throw RuleViolation(os.str());
    }
  }
}

// Shared closed-form core. Row i is
//   h_{i+1,k} = (wmul*v_k - colsum_k) * r_i      for k < i
//   h_{i+1,i} = 1 + (wmul*v_i - 1) * r_i
// with colsum_k the sum of column k over earlier rows and r_i either
// 1/v_{i+1} (exact recursions) or v_{i+1}/S_{i+1} (general rule).
StepMatrix build_closed_form(const ParamSeq& seq, double wmul, bool ratio_from_sums,
                             StepOrigin origin) {
  const int N = seq.N;
  StepMatrix h;
  h.N = N;
  h.origin = origin;
  h.rows.resize(N);
  std::vector<double> colsum(N, 0.0);
  for (int i = 0; i < N; ++i) {
    const double r =
        ratio_from_sums ? seq.values[i + 1] / seq.partial_sums[i + 1] : 1.0 / seq.values[i + 1];
    h.rows[i].resize(i + 1);
    for (int k = 0; k < i; ++k) h.rows[i][k] = (wmul * seq.values[k] - colsum[k]) * r;
    h.rows[i][i] = 1.0 + (wmul * seq.values[i] - 1.0) * r;
    for (int k = 0; k <= i; ++k) colsum[k] += h.rows[i][k];
  }
  return h;
}

// Shared row-recursive core: rows[i] = fac_i * (previous row with its
// diagonal reduced by one), then a fresh diagonal entry.
StepMatrix build_recursive(const ParamSeq& seq, bool simplified_factor, StepOrigin origin) {
  const int N = seq.N;
  StepMatrix h;
  h.N = N;
  h.origin = origin;
  h.rows.resize(N);
  for (int i = 0; i < N; ++i) {
    const double v = seq.values[i];
    const double vn = seq.values[i + 1];
    const double sn = seq.partial_sums[i + 1];
    h.rows[i].resize(i + 1);
    if (i > 0) {
      const double fac = simplified_factor ? (v - 1.0) / vn
                                           : (seq.partial_sums[i] - v) * vn / (v * sn);
      for (int k = 0; k + 1 < i; ++k) h.rows[i][k] = fac * h.rows[i - 1][k];
      h.rows[i][i - 1] = fac * (h.rows[i - 1][i - 1] - 1.0);
    }
    h.rows[i][i] = simplified_factor ? 1.0 + (2.0 * v - 1.0) / vn
                                     : 1.0 + (2.0 * v - 1.0) * vn / sn;
  }
  return h;
}

}  // namespace

const char* to_string(StepOrigin o) {
  switch (o) {
    case StepOrigin::Gm: return "gm";
    case StepOrigin::Fgm: return "fgm";
    case StepOrigin::Ogm: return "ogm";
    case StepOrigin::OgmPrime: return "ogm_prime";
    case StepOrigin::Gogm: return "gogm";
    case StepOrigin::GogmPrime: return "gogm_prime";
    case StepOrigin::GogmRecursive: return "gogm_recursive";
    case StepOrigin::OgmFinalRecursive: return "ogm_final_recursive";
    case StepOrigin::Custom: return "custom";
  }
  return "custom";
}

double StepMatrix::entry(int i_plus_1, int k) const {
  if (i_plus_1 < 1 || i_plus_1 > N || k < 0 || k >= i_plus_1)
    throw std::out_of_range("StepMatrix::entry: index outside the lower triangle");
  return rows[i_plus_1 - 1][k];
}

std::vector<std::vector<double>> StepMatrix::column_sum_table() const {
  std::vector<std::vector<double>> w(N + 1);
  for (int i = 1; i <= N; ++i) {
    w[i].resize(i);
    for (int k = 0; k < i; ++k)
      w[i][k] = (k < i - 1 ? w[i - 1][k] : 0.0) + rows[i - 1][k];
  }
  return w;
}

StepMatrix h_gm(int N, double step) {
  if (N < 1) throw std::invalid_argument("h_gm: N must be >= 1");
  StepMatrix h;
  h.N = N;
  h.origin = StepOrigin::Gm;
  h.rows.resize(N);
  for (int i = 0; i < N; ++i) {
    h.rows[i].assign(i + 1, 0.0);
    h.rows[i][i] = step;
  }
  return h;
}

StepMatrix h_fgm(const ParamSeq& t) {
  require_valid_rule(t, false, "h_fgm");
  require_zero_slack(t, "h_fgm");
  return build_closed_form(t, 1.0, false, StepOrigin::Fgm);
}

StepMatrix h_ogm(const ParamSeq& theta) {
  require_valid_rule(theta, true, "h_ogm");
  require_zero_slack(theta, "h_ogm");
  return build_closed_form(theta, 2.0, false, StepOrigin::Ogm);
}

StepMatrix h_ogm_prime(const ParamSeq& t) {
  require_valid_rule(t, false, "h_ogm_prime");
  require_zero_slack(t, "h_ogm_prime");
  return build_closed_form(t, 2.0, false, StepOrigin::OgmPrime);
}

StepMatrix h_gogm(const ParamSeq& theta) {
  require_valid_rule(theta, true, "h_gogm");
  return build_closed_form(theta, 2.0, true, StepOrigin::Gogm);
}

StepMatrix h_gogm_prime(const ParamSeq& t) {
  require_valid_rule(t, false, "h_gogm_prime");
  return build_closed_form(t, 2.0, true, StepOrigin::GogmPrime);
}

StepMatrix h_gogm_recursive(const ParamSeq& theta) {
  require_valid_rule(theta, true, "h_gogm_recursive");
  return build_recursive(theta, false, StepOrigin::GogmRecursive);
}

StepMatrix h_ogm_final_recursive(const ParamSeq& theta) {
  require_valid_rule(theta, true, "h_ogm_final_recursive");
  require_zero_slack(theta, "h_ogm_final_recursive");
  return build_recursive(theta, true, StepOrigin::OgmFinalRecursive);
}

StepMatrix h_custom(std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw std::invalid_argument("h_custom: need at least one row");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != i + 1)
      throw std::invalid_argument("h_custom: row " + std::to_string(i) +
                                  " must have exactly " + std::to_string(i + 1) + " entries");
  }
  StepMatrix h;
  h.N = static_cast<int>(rows.size());
  h.origin = StepOrigin::Custom;
  h.rows = std::move(rows);
  return h;
}

double max_rel_gap(const StepMatrix& a, const StepMatrix& b) {
  if (a.N != b.N) throw std::invalid_argument("max_rel_gap: size mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.N; ++i)
    for (int k = 0; k <= i; ++k) {
      const double gap =
          std::fabs(a.rows[i][k] - b.rows[i][k]) / std::max(1.0, std::fabs(a.rows[i][k]));
      worst = std::max(worst, gap);
    }
  return worst;
}

void write_step_csv(const StepMatrix& h, std::ostream& os) {
  os << "i,k,h\n";
  for (int i = 1; i <= h.N; ++i)
    for (int k = 0; k < i; ++k) os << i << ',' << k << ',' << format_double(h.rows[i - 1][k]) << '\n';
}

}  // namespace pepfo
