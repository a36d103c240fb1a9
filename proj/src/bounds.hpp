// SPDX-License-Identifier: MIT
//
// Closed-form worst-case bounds. Every bound is an exact function of
// (N, L, R) and, where applicable, the method's parameter sequence. When a
// sequence form and a weaker closed form both exist, `value` carries the
// sequence form and `simplified` the closed form (always >= value).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "params.hpp"

namespace pepfo {

enum class BoundMethod { Gm, Fgm, Ogm, OgmM, OgmOg, OgmA, Gogm, GogmPrime, AnyFo };
const char* to_string(BoundMethod m);
std::optional<BoundMethod> bound_method_from_string(const std::string& s);

enum class Metric { CostFinalX, CostPrimaryY, GradSmallest, GradFinal, LowerBound };
const char* to_string(Metric m);
std::optional<Metric> metric_from_string(const std::string& s);

struct BoundSpec {
  BoundMethod method = BoundMethod::Gm;
  Metric metric = Metric::CostFinalX;
  int N = 0;
  double L = 1.0;
  double R = 1.0;
  double value = 0.0;                      // sequence-form (sharpest) bound
  std::optional<double> simplified;        // weaker closed form when one exists
  std::string formula;                     // closed form behind `value`
  std::string simplified_formula;
  std::string iterate;                     // point the bound constrains
};

struct BoundQuery {
  int N = 0;
  double L = 1.0;
  double R = 1.0;
  int m = -1;                    // OgmM; -1 means floor(2N/3)
  double a = 0.0;                // OgmA
  const ParamSeq* seq = nullptr; // override / required for Gogm kinds
};

// Throws NotAvailable for (method, metric) pairs with no analytical bound.
BoundSpec bound(BoundMethod method, Metric metric, const BoundQuery& q);

// Proof inequalities used by the gradient bounds, exposed for checking.
double fgm_sum_sq_lower(int N);     // (N+1)(2N^2+13N+24)/24 <= sum t_k^2
double ogm_og_slack_lower(int N);   // N^2(N+1)/24 <= sum (T_k - t_k^2)
double ogm_a_slack_closed_form(double a, int N);  // exact sum (T_k - t_k^2)

struct AsymptoticRow {
  std::string label;
  double cost_constant = 0.0;  // bound ~ constant * N^power * L R^2
  double cost_power = 0.0;
  double grad_constant = 0.0;  // bound ~ constant * N^power * L R
  double grad_power = 0.0;
  bool requires_N = false;     // method needs N fixed in advance
  double cost_ratio = 0.0;     // exact/asymptotic at the probe N
  double grad_ratio = 0.0;
};

// Six rows (GM, FGM, OGM, OGM-m, OGM-OG, OGM-a); each ratio compares the
// exact bound at probe_N against the asymptotic form and should be within
// 1% of 1 at probe_N = 10^4.
std::vector<AsymptoticRow> asymptotic_table(double a = 4.0, int probe_N = 10000);

}  // namespace pepfo
