// SPDX-License-Identifier: MIT
#include "bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "common.hpp"

namespace pepfo {

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Gm: return "gm";
    case BoundMethod::Fgm: return "fgm";
    case BoundMethod::Ogm: return "ogm";
    case BoundMethod::OgmM: return "ogm-m";
    case BoundMethod::OgmOg: return "ogm-og";
    case BoundMethod::OgmA: return "ogm-a";
    case BoundMethod::Gogm: return "gogm";
    case BoundMethod::GogmPrime: return "gogm-prime";
    case BoundMethod::AnyFo: return "any-fo";
  }
  return "?";
}

std::optional<BoundMethod> bound_method_from_string(const std::string& s) {
  for (BoundMethod m : {BoundMethod::Gm, BoundMethod::Fgm, BoundMethod::Ogm, BoundMethod::OgmM,
                        BoundMethod::OgmOg, BoundMethod::OgmA, BoundMethod::Gogm,
                        BoundMethod::GogmPrime, BoundMethod::AnyFo}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::CostFinalX: return "cost-final-x";
    case Metric::CostPrimaryY: return "cost-primary-y";
    case Metric::GradSmallest: return "grad-smallest";
    case Metric::GradFinal: return "grad-final";
    case Metric::LowerBound: return "lower-bound";
  }
  return "?";
}

std::optional<Metric> metric_from_string(const std::string& s) {
  for (Metric m : {Metric::CostFinalX, Metric::CostPrimaryY, Metric::GradSmallest,
                   Metric::GradFinal, Metric::LowerBound}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

double fgm_sum_sq_lower(int N) {
  return (N + 1.0) * (2.0 * N * N + 13.0 * N + 24.0) / 24.0;
}

double ogm_og_slack_lower(int N) { return static_cast<double>(N) * N * (N + 1.0) / 24.0; }

double ogm_a_slack_closed_form(double a, int N) {
  return N * (N + 1.0) * ((a - 2.0) * N + (3.0 * a * a - 4.0 * a - 1.0)) / (6.0 * a * a);
}

namespace {

long double sum_sq(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += static_cast<long double>(x) * x;
  return s;
}

[[noreturn]] void undefined(BoundMethod m, Metric metric, const char* why) {
  throw NotAvailable(fmt::format("no analytical {} bound for {}: {}", to_string(metric),
                                 to_string(m), why));
}

const ParamSeq& resolve_seq(const BoundQuery& q, std::optional<ParamSeq>& stash,
                            bool doubled, const char* who) {
  if (q.seq) {
    if (q.seq->N != q.N) {
      throw RuleViolation(fmt::format("{}: sequence covers {} iterations, bound asks for {}",
                                      who, q.seq->N, q.N));
    }
    if (q.seq->final_rule_doubled != doubled) {
      throw RuleViolation(fmt::format("{} expects a {} rule sequence", who,
                                      doubled ? "doubled-final" : "plain"));
    }
    ValidationReport rep = validate(*q.seq);
    if (!rep.ok) throw RuleViolation(fmt::format("{}: {}", who, rep.summary()));
    return *q.seq;
  }
  return *stash;
}

}  // namespace

BoundSpec bound(BoundMethod method, Metric metric, const BoundQuery& q) {
  if (q.N < 1) throw std::invalid_argument("bounds need N >= 1");
  const int N = q.N;
  const double L = q.L, R = q.R;
  BoundSpec b;
  b.method = method;
  b.metric = metric;
  b.N = N;
  b.L = L;
  b.R = R;

  const double LR2 = L * R * R;
  const double LR = L * R;

  switch (method) {
    case BoundMethod::Gm: {
      switch (metric) {
        case Metric::CostFinalX:
          b.value = LR2 / (4.0 * N + 2.0);
          b.formula = "L*R^2/(4*N+2)";
          b.iterate = "x_N";
          return b;
        case Metric::GradFinal:
        case Metric::GradSmallest:
          b.value = std::sqrt(2.0) * LR / std::sqrt(static_cast<double>(N) * (N + 2.0));
          b.formula = "sqrt(2)*L*R/sqrt(N*(N+2))";
          b.iterate = metric == Metric::GradFinal ? "x_N" : "min over x_0..x_N";
          return b;
        case Metric::LowerBound:
          b.value = LR / (N + 1.0);
          b.formula = "L*R/(N+1)";
          b.iterate = "worst-case min over x_0..x_N is at least this";
          return b;
        case Metric::CostPrimaryY:
          undefined(method, metric, "the plain gradient method has no separate primary sequence");
      }
      break;
    }
    case BoundMethod::Fgm: {
      std::optional<ParamSeq> def;
      if (!q.seq) def = make_fgm_t(N);
      const ParamSeq& t = resolve_seq(q, def, false, "fgm bound");
      for (int i = 0; i <= N; ++i) {
        double gap = std::abs(t.partial_sums[i] - t.values[i] * t.values[i]);
        if (gap > 1e-9 * std::max(1.0, t.partial_sums[i])) {
          throw RuleViolation("fgm bounds need the exact momentum recursion (zero slack)");
        }
      }
      switch (metric) {
        case Metric::CostPrimaryY:
          b.value = LR2 / (2.0 * t.values[N - 1] * t.values[N - 1]);
          b.formula = "L*R^2/(2*t_(N-1)^2)";
          b.simplified = 2.0 * LR2 / ((N + 1.0) * (N + 1.0));
          b.simplified_formula = "2*L*R^2/(N+1)^2";
          b.iterate = "y_N";
          return b;
        case Metric::CostFinalX:
          b.value = LR2 / (2.0 * t.values[N] * t.values[N]);
          b.formula = "L*R^2/(2*t_N^2)";
          b.simplified = 2.0 * LR2 / ((N + 2.0) * (N + 2.0));
          b.simplified_formula = "2*L*R^2/(N+2)^2";
          b.iterate = "x_N";
          return b;
        case Metric::GradFinal:
          b.value = LR / t.values[N];
          b.formula = "L*R/t_N";
          b.simplified = 2.0 * LR / (N + 2.0);
          b.simplified_formula = "2*L*R/(N+2)";
          b.iterate = "x_N";
          return b;
        case Metric::GradSmallest:
          b.value = LR / std::sqrt(static_cast<double>(sum_sq(t.values)));
          b.formula = "L*R/sqrt(sum_k t_k^2)";
          b.simplified = 2.0 * std::sqrt(3.0) * LR /
                         std::sqrt((N + 1.0) * (static_cast<double>(N) * N + 6.0 * N + 12.0));
          b.simplified_formula = "2*sqrt(3)*L*R/sqrt((N+1)*(N^2+6N+12))";
          b.iterate = "min over x_0..x_N";
          return b;
        case Metric::LowerBound:
          undefined(method, metric, "only the method-independent lower bound applies");
      }
      break;
    }
    case BoundMethod::Ogm: {
      std::optional<ParamSeq> def;
      if (!q.seq) def = make_ogm_theta(N);
      const ParamSeq& th = resolve_seq(q, def, true, "ogm bound");
      switch (metric) {
        case Metric::CostPrimaryY:
          b.value = LR2 / (4.0 * th.values[N - 1] * th.values[N - 1]);
          b.formula = "L*R^2/(4*theta_(N-1)^2)";
          b.simplified = LR2 / ((N + 1.0) * (N + 1.0));
          b.simplified_formula = "L*R^2/(N+1)^2";
          b.iterate = "y_N";
          return b;
        case Metric::CostFinalX:
          b.value = LR2 / (2.0 * th.values[N] * th.values[N]);
          b.formula = "L*R^2/(2*theta_N^2)";
          b.simplified = LR2 / ((N + 1.0) * (N + 1.0 + std::sqrt(2.0)));
          b.simplified_formula = "L*R^2/((N+1)*(N+1+sqrt(2)))";
          b.iterate = "x_N";
          return b;
        case Metric::GradFinal:
        case Metric::GradSmallest:
          b.value = LR / th.values[N];
          b.formula = "L*R/theta_N";
          b.simplified = std::sqrt(2.0) * LR / (N + 1.0);
          b.simplified_formula = "sqrt(2)*L*R/(N+1)";
          b.iterate = metric == Metric::GradFinal ? "x_N" : "min over x_0..x_N";
          return b;
        case Metric::LowerBound:
          undefined(method, metric, "only the method-independent lower bound applies");
      }
      break;
    }
    case BoundMethod::OgmM: {
      int m = q.m < 0 ? (2 * N) / 3 : q.m;
      if (m < 1 || m > N - 1) {
        throw RuleViolation(fmt::format("ogm-m bounds need 1 <= m <= N-1, got m = {}", m));
      }
      switch (metric) {
        case Metric::GradFinal:
        case Metric::GradSmallest:
          b.value = std::sqrt(2.0) * LR / ((m + 1.0) * std::sqrt(N - m + 1.0));
          b.formula = "sqrt(2)*L*R/((m+1)*sqrt(N-m+1))";
          b.iterate = metric == Metric::GradFinal ? "x_N" : "min over x_0..x_N";
          return b;
        default:
          undefined(method, metric, "no analytical cost bound exists at the final iterate");
      }
      break;
    }
    case BoundMethod::OgmOg: {
      std::optional<ParamSeq> def;
      if (!q.seq) def = make_ogm_og(N);
      const ParamSeq& t = resolve_seq(q, def, false, "ogm-og bound");
      switch (metric) {
        case Metric::CostPrimaryY:
          b.value = LR2 / (4.0 * t.partial_sums[N]);
          b.formula = "L*R^2/(4*T_N)";
          b.simplified = 2.0 * LR2 / ((N + 2.0) * (N + 2.0));
          b.simplified_formula = "2*L*R^2/(N+2)^2";
          b.iterate = "y_(N+1)";
          return b;
        case Metric::GradSmallest:
          b.value = LR / (2.0 * std::sqrt(slack_sum(t)));
          b.formula = "L*R/(2*sqrt(sum_k (T_k - t_k^2)))";
          b.simplified = std::sqrt(6.0) * LR / (N * std::sqrt(N + 1.0));
          b.simplified_formula = "sqrt(6)*L*R/(N*sqrt(N+1))";
          b.iterate = "min over x_0..x_N";
          return b;
        default:
          undefined(method, metric, "only the post-step cost and smallest-gradient bounds exist");
      }
      break;
    }
    case BoundMethod::OgmA: {
      if (!(q.a >= 2.0)) throw RuleViolation("ogm-a bounds need a >= 2");
      const double a = q.a;
      std::optional<ParamSeq> def;
      if (!q.seq) def = make_ogm_a(a, N);
      const ParamSeq& t = resolve_seq(q, def, false, "ogm-a bound");
      switch (metric) {
        case Metric::CostPrimaryY:
          b.value = LR2 / (4.0 * t.partial_sums[N - 1]);
          b.formula = "L*R^2/(4*T_(N-1))";
          b.simplified = a * LR2 / (2.0 * N * (N + 2.0 * a - 1.0));
          b.simplified_formula = "a*L*R^2/(2*N*(N+2a-1))";
          b.iterate = "y_N";
          return b;
        case Metric::GradSmallest: {
          double total = slack_sum(t);
          if (!(total > 0.0)) undefined(method, metric, "zero slack leaves no gradient certificate");
          b.value = LR / (2.0 * std::sqrt(total));
          b.formula = "L*R/(2*sqrt(sum_k (T_k - t_k^2)))";
          b.simplified =
              a * std::sqrt(6.0) * LR /
              (2.0 * std::sqrt(N * (N + 1.0) * ((a - 2.0) * N + 3.0 * a * a - 4.0 * a - 1.0)));
          b.simplified_formula = "a*sqrt(6)*L*R/(2*sqrt(N*(N+1)*((a-2)N+3a^2-4a-1)))";
          b.iterate = "min over x_0..x_N";
          return b;
        }
        default:
          undefined(method, metric, "only the primary cost and smallest-gradient bounds exist");
      }
      break;
    }
    case BoundMethod::Gogm: {
      std::optional<ParamSeq> none;
      if (!q.seq) throw RuleViolation("gogm bounds need an explicit doubled-final-rule sequence");
      const ParamSeq& th = resolve_seq(q, none, true, "gogm bound");
      switch (metric) {
        case Metric::CostFinalX:
          b.value = LR2 / (2.0 * th.partial_sums[N]);
          b.formula = "L*R^2/(2*Theta_N)";
          b.iterate = "x_N";
          return b;
        case Metric::CostPrimaryY:
          b.value = LR2 / (4.0 * th.partial_sums[N - 1]);
          b.formula = "L*R^2/(4*Theta_(N-1))";
          b.iterate = "y_N";
          return b;
        default:
          undefined(method, metric, "only the cost bounds exist for the doubled-final rule");
      }
      break;
    }
    case BoundMethod::GogmPrime: {
      std::optional<ParamSeq> none;
      if (!q.seq) throw RuleViolation("gogm-prime bounds need an explicit plain-rule sequence");
      const ParamSeq& t = resolve_seq(q, none, false, "gogm-prime bound");
      switch (metric) {
        case Metric::CostPrimaryY:
          b.value = LR2 / (4.0 * t.partial_sums[N]);
          b.formula = "L*R^2/(4*T_N)";
          b.iterate = "y_(N+1)";
          return b;
        case Metric::GradSmallest: {
          double total = slack_sum(t);
          if (!(total > 1e-9 * std::max(1.0, t.partial_sums[N]))) {
            undefined(method, metric, "zero slack leaves no gradient certificate");
          }
          b.value = LR / (2.0 * std::sqrt(total));
          b.formula = "L*R/(2*sqrt(sum_k (T_k - t_k^2)))";
          b.iterate = "min over x_0..x_N";
          return b;
        }
        default:
          undefined(method, metric, "only the post-step cost and smallest-gradient bounds exist");
      }
      break;
    }
    case BoundMethod::AnyFo: {
      if (metric == Metric::LowerBound) {
        double e = std::exp(1.0);
        b.value = LR / (4.0 * e * e * (N + 1.0) * (N + 1.0));
        b.formula = "L*R/(4*e^2*(N+1)^2)";
        b.iterate = "worst-case final gradient of any fixed-step scheme, needs d >= 2N+3";
        return b;
      }
      undefined(method, metric, "only the lower bound applies to the whole class");
    }
  }
  undefined(method, metric, "unhandled combination");
}

std::vector<AsymptoticRow> asymptotic_table(double a, int probe_N) {
  if (!(a > 2.0)) throw RuleViolation("the asymptotic gradient constant needs a > 2");
  const int N = probe_N;
  BoundQuery q{N, 1.0, 1.0, -1, a, nullptr};
  std::vector<AsymptoticRow> rows;
  auto push = [&](std::string label, double cc, double cp, double gc, double gp, bool reqN,
                  double cost_exact, double grad_exact) {
    AsymptoticRow r;
    r.label = std::move(label);
    r.cost_constant = cc;
    r.cost_power = cp;
    r.grad_constant = gc;
    r.grad_power = gp;
    r.requires_N = reqN;
    r.cost_ratio = cost_exact / (cc * std::pow(N, cp));
    r.grad_ratio = grad_exact / (gc * std::pow(N, gp));
    rows.push_back(std::move(r));
  };

  push("gm", 0.25, -1.0, std::sqrt(2.0), -1.0, false,
       bound(BoundMethod::Gm, Metric::CostFinalX, q).value,
       bound(BoundMethod::Gm, Metric::GradSmallest, q).value);
  push("fgm", 2.0, -2.0, 2.0 * std::sqrt(3.0), -1.5, false,
       bound(BoundMethod::Fgm, Metric::CostFinalX, q).value,
       bound(BoundMethod::Fgm, Metric::GradSmallest, q).value);
  push("ogm", 1.0, -2.0, std::sqrt(2.0), -1.0, false,
       bound(BoundMethod::Ogm, Metric::CostFinalX, q).value,
       bound(BoundMethod::Ogm, Metric::GradFinal, q).value);
  {
    // The cost entry is the bound after the m momentum iterations; no
    // analytical final-iterate cost bound exists.
    int m = (2 * N) / 3;
    BoundQuery qm{m, 1.0, 1.0, -1, 0.0, nullptr};
    push("ogm-m", 2.25, -2.0, 1.5 * std::sqrt(6.0), -1.5, true,
         bound(BoundMethod::Ogm, Metric::CostFinalX, qm).value,
         bound(BoundMethod::OgmM, Metric::GradFinal, q).value);
  }
  push("ogm-og", 2.0, -2.0, std::sqrt(6.0), -1.5, true,
       bound(BoundMethod::OgmOg, Metric::CostPrimaryY, q).value,
       bound(BoundMethod::OgmOg, Metric::GradSmallest, q).value);
  push(fmt::format("ogm-a={}", a), 0.5 * a, -2.0,
       a * std::sqrt(6.0) / (2.0 * std::sqrt(a - 2.0)), -1.5, false,
       bound(BoundMethod::OgmA, Metric::CostPrimaryY, q).value,
       bound(BoundMethod::OgmA, Metric::GradSmallest, q).value);
  return rows;
}

}  // namespace pepfo
