// SPDX-License-Identifier: MIT
#include "methods.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace pepfo {

const char* to_string(Family f) {
  switch (f) {
    case Family::Gm: return "gm";
    case Family::Fgm1: return "fgm1";
    case Family::Fgm2: return "fgm2";
    case Family::Ogm1: return "ogm1";
    case Family::Ogm2: return "ogm2";
    case Family::Gogm1: return "gogm1";
    case Family::Gogm2: return "gogm2";
    case Family::Gogm1Prime: return "gogm1p";
    case Family::Gogm2Prime: return "gogm2p";
    case Family::OgmM: return "ogm-m";
    case Family::OgmOg: return "ogm-og";
    case Family::OgmA: return "ogm-a";
    case Family::FoGeneric: return "fo";
  }
  return "?";
}

std::optional<Family> family_from_string(const std::string& s) {
  for (Family f : {Family::Gm, Family::Fgm1, Family::Fgm2, Family::Ogm1, Family::Ogm2,
                   Family::Gogm1, Family::Gogm2, Family::Gogm1Prime, Family::Gogm2Prime,
                   Family::OgmM, Family::OgmOg, Family::OgmA, Family::FoGeneric}) {
    if (s == to_string(f)) return f;
  }
  if (s == "fgm") return Family::Fgm1;
  if (s == "ogm") return Family::Ogm1;
  return std::nullopt;
}

double IterateTrace::min_grad_norm_x() const {
  double best = grad_x.empty() ? 0.0 : grad_x[0].norm();
  for (const auto& g : grad_x) best = std::min(best, g.norm());
  return best;
}

namespace {

void eval_at(const FunctionOracle& f, const Eigen::VectorXd& p, double& val,
             Eigen::VectorXd& grad, int iter, const char* what) {
  val = f.value(p);
  grad = f.grad(p);
  if (!std::isfinite(val) || !grad.allFinite()) {
    throw std::runtime_error(
        fmt::format("oracle returned a non-finite value or gradient at {} of iteration {}", what, iter));
  }
}

struct TraceBuilder {
  IterateTrace t;
  const FunctionOracle* f = nullptr;

  TraceBuilder(int N, const FunctionOracle& fn, const Eigen::VectorXd& x0) {
    if (x0.size() != fn.d) {
      throw std::invalid_argument(fmt::format("start point has dimension {} but the oracle expects {}",
                                              x0.size(), fn.d));
    }
    f = &fn;
    t.N = N;
    t.L = fn.L;
    t.x.resize(N + 1);
    t.y.resize(N + 1);
    t.grad_x.resize(N + 1);
    t.grad_y.resize(N + 1);
    t.f_x.resize(N + 1);
    t.f_y.resize(N + 1);
    t.x[0] = x0;
    eval_at(fn, t.x[0], t.f_x[0], t.grad_x[0], 0, "x");
    t.y[0] = t.x[0];
    t.f_y[0] = t.f_x[0];
    t.grad_y[0] = t.grad_x[0];
  }

  // y_{i+1} = x_i - (1/L) grad f(x_i)
  void gradient_step_y(int i) {
    t.y[i + 1] = t.x[i] - t.grad_x[i] / t.L;
    eval_at(*f, t.y[i + 1], t.f_y[i + 1], t.grad_y[i + 1], i + 1, "y");
  }

  void set_x(int i1, const Eigen::VectorXd& p) {
    t.x[i1] = p;
    // Plain gradient steps land x_{i+1} exactly on y_{i+1}; reuse the
    // evaluation so each distinct point costs one oracle call.
    if ((t.x[i1].array() == t.y[i1].array()).all()) {
      t.f_x[i1] = t.f_y[i1];
      t.grad_x[i1] = t.grad_y[i1];
      return;
    }
    eval_at(*f, t.x[i1], t.f_x[i1], t.grad_x[i1], i1, "x");
  }

  IterateTrace finish() {
    const int N = t.N;
    t.y_post = t.x[N] - t.grad_x[N] / t.L;
    eval_at(*f, t.y_post, t.f_y_post, t.grad_y_post, N + 1, "y");
    return std::move(t);
  }
};

const ParamSeq& pick_seq(const MethodSpec& spec, std::optional<ParamSeq>& stash,
                         bool want_doubled, const char* who) {
  if (spec.params) {
    if (spec.params->N != spec.N) {
      throw RuleViolation(fmt::format("{}: sequence covers {} iterations but the run asks for {}",
                                      who, spec.params->N, spec.N));
    }
    if (spec.params->final_rule_doubled != want_doubled) {
      throw RuleViolation(fmt::format("{} expects a sequence obeying the {} rule", who,
                                      want_doubled ? "doubled-final" : "plain"));
    }
    ValidationReport rep = validate(*spec.params);
    if (!rep.ok) throw RuleViolation(fmt::format("{}: {}", who, rep.summary()));
    return *spec.params;
  }
  if (!stash) {
    throw RuleViolation(fmt::format("{} needs an explicit parameter sequence", who));
  }
  return *stash;
}

IterateTrace run_momentum(const MethodSpec& spec, const FunctionOracle& f,
                          const Eigen::VectorXd& x0) {
  const int N = spec.N;
  std::optional<ParamSeq> def;
  bool averaged = false;  // z-based form
  bool doubled = false;
  double zmul = 2.0;      // multiplier on v_k inside the z update
  switch (spec.family) {
    case Family::Fgm1:
      def = make_fgm_t(N);
      break;
    case Family::Fgm2:
      def = make_fgm_t(N);
      averaged = true;
      zmul = 1.0;
      break;
    case Family::Ogm1:
      def = make_ogm_theta(N);
      doubled = true;
      break;
    case Family::Ogm2:
      def = make_ogm_theta(N);
      doubled = true;
      averaged = true;
      break;
    case Family::Gogm1:
      def = make_ogm_theta(N);
      doubled = true;
      break;
    case Family::Gogm2:
      def = make_ogm_theta(N);
      doubled = true;
      averaged = true;
      break;
    case Family::Gogm1Prime:
      def = make_fgm_t(N);
      break;
    case Family::Gogm2Prime:
      def = make_fgm_t(N);
      averaged = true;
      break;
    case Family::OgmOg:
      def = make_ogm_og(N);
      break;
    case Family::OgmA:
      if (spec.params) {
        def.reset();
      } else {
        def = make_ogm_a(spec.a, N);
      }
      break;
    default:
      throw std::logic_error("run_momentum: unexpected family");
  }
  const ParamSeq& seq = pick_seq(spec, def, doubled, to_string(spec.family));
  const std::vector<double>& v = seq.values;
  const std::vector<double>& S = seq.partial_sums;

  TraceBuilder tb(N, f, x0);
  Eigen::VectorXd z;
  if (averaged) {
    tb.t.z.resize(N + 1);
    tb.t.z[0] = x0;
    z = x0;
  }
  const bool fgm_style = spec.family == Family::Fgm1 || spec.family == Family::Fgm2;
  const bool ogm_style = spec.family == Family::Ogm1 || spec.family == Family::Ogm2;
  for (int i = 0; i < N; ++i) {
    tb.gradient_step_y(i);
    const Eigen::VectorXd& y1 = tb.t.y[i + 1];
    Eigen::VectorXd xn;
    if (averaged) {
      z -= (zmul * v[i] / f.L) * tb.t.grad_x[i];
      tb.t.z[i + 1] = z;
      double mix;
      if (fgm_style || ogm_style) {
        mix = 1.0 / v[i + 1];
      } else {
        mix = v[i + 1] / S[i + 1];
      }
      xn = (1.0 - mix) * y1 + mix * z;
    } else if (fgm_style) {
      xn = y1 + ((v[i] - 1.0) / v[i + 1]) * (y1 - tb.t.y[i]);
    } else if (ogm_style) {
      xn = y1 + ((v[i] - 1.0) / v[i + 1]) * (y1 - tb.t.y[i]) +
           (v[i] / v[i + 1]) * (y1 - tb.t.x[i]);
    } else {
      double c = v[i + 1] / (v[i] * S[i + 1]);
      xn = y1 + ((S[i] - v[i]) * c) * (y1 - tb.t.y[i]) +
           ((2.0 * v[i] * v[i] - S[i]) * c) * (y1 - tb.t.x[i]);
    }
    tb.set_x(i + 1, xn);
  }
  return tb.finish();
}

IterateTrace run_ogm_m(const MethodSpec& spec, const FunctionOracle& f,
                       const Eigen::VectorXd& x0) {
  const int N = spec.N;
  int m = spec.m;
  if (m < 0) m = (2 * N) / 3;
  if (m < 1 || m > N - 1) {
    throw RuleViolation(fmt::format("ogm-m needs 1 <= m <= N-1, got m = {} with N = {}", m, N));
  }
  ParamSeq th = make_ogm_theta(m);
  const std::vector<double>& v = th.values;
  TraceBuilder tb(N, f, x0);
  for (int i = 0; i < N; ++i) {
    tb.gradient_step_y(i);
    const Eigen::VectorXd& y1 = tb.t.y[i + 1];
    if (i < m) {
      tb.set_x(i + 1, y1 + ((v[i] - 1.0) / v[i + 1]) * (y1 - tb.t.y[i]) +
                          (v[i] / v[i + 1]) * (y1 - tb.t.x[i]));
    } else {
      tb.set_x(i + 1, y1);
    }
  }
  return tb.finish();
}

}  // namespace

IterateTrace run_fo(const StepMatrix& h, const FunctionOracle& f, const Eigen::VectorXd& x0) {
  const int N = h.N;
  TraceBuilder tb(N, f, x0);
  for (int i = 0; i < N; ++i) {
    tb.gradient_step_y(i);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(f.d);
    for (int k = 0; k <= i; ++k) s += h.rows[i][k] * tb.t.grad_x[k];
    tb.set_x(i + 1, tb.t.x[i] - s / f.L);
  }
  return tb.finish();
}

IterateTrace run(const MethodSpec& spec, const FunctionOracle& f, const Eigen::VectorXd& x0) {
  if (spec.N < 1) throw std::invalid_argument("iteration count must be at least 1");
  switch (spec.family) {
    case Family::Gm:
      return run_fo(h_gm(spec.N, spec.gm_step), f, x0);
    case Family::FoGeneric:
      if (!spec.h) throw std::invalid_argument("fo runs need a step matrix");
      if (spec.h->N != spec.N) {
        throw std::invalid_argument(fmt::format("step matrix covers {} iterations, run asks for {}",
                                                spec.h->N, spec.N));
      }
      return run_fo(*spec.h, f, x0);
    case Family::OgmM:
      return run_ogm_m(spec, f, x0);
    default:
      return run_momentum(spec, f, x0);
  }
}

EquivReport check_equivalence(const MethodSpec& A, const MethodSpec& B,
                              const FunctionOracle& f, const Eigen::VectorXd& x0) {
  IterateTrace ta = run(A, f, x0);
  IterateTrace tb = run(B, f, x0);
  if (ta.N != tb.N) throw std::invalid_argument("equivalence check needs matching iteration counts");
  EquivReport rep;
  for (int i = 0; i <= ta.N; ++i) {
    double dx = (ta.x[i] - tb.x[i]).norm() / std::max(1.0, ta.x[i].norm());
    double dy = (ta.y[i] - tb.y[i]).norm() / std::max(1.0, ta.y[i].norm());
    double d = std::max(dx, dy);
    if (d > rep.max_rel_deviation) {
      rep.max_rel_deviation = d;
      rep.argmax_index = i;
    }
  }
  return rep;
}

}  // namespace pepfo
