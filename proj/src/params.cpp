// SPDX-License-Identifier: MIT
#include "params.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace pepfo {

namespace {

// Recursions run in long double and are stored as 64-bit doubles, so the
// stored values are within one rounding of the exact recursion.
long double next_plain(long double v) { return (1.0L + sqrtl(1.0L + 4.0L * v * v)) / 2.0L; }
long double next_doubled(long double v) { return (1.0L + sqrtl(1.0L + 8.0L * v * v)) / 2.0L; }

std::vector<double> plain_sums(const std::vector<double>& v) {
  std::vector<double> s(v.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    s[i] = static_cast<double>(acc);
  }
  return s;
}

std::vector<double> doubled_sums(const std::vector<double>& v) {
  std::vector<double> s = plain_sums(v);
  const std::size_t n = v.size() - 1;
  long double prefix = 0.0L;
  for (std::size_t i = 0; i < n; ++i) prefix += v[i];
  s[n] = static_cast<double>(2.0L * prefix + v[n]);
  return s;
}

std::vector<double> sums_for(const std::vector<double>& v, bool doubled) {
  return doubled ? doubled_sums(v) : plain_sums(v);
}

void require_iterations(int N, const char* who) {
  if (N < 1) throw std::invalid_argument(std::string(who) + ": iteration count N must be >= 1");
}

void require_valid(const ParamSeq& seq, const char* who) {
  ValidationReport r = validate(seq);
  if (!r.ok) throw RuleViolation(std::string(who) + ": " + r.summary());
}

}  // namespace

const char* to_string(SeqKind k) {
  switch (k) {
    case SeqKind::FgmT: return "fgm_t";
    case SeqKind::OgmTheta: return "ogm_theta";
    case SeqKind::OgmA: return "ogm_a";
    case SeqKind::OgmOg: return "ogm_og";
    case SeqKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<SeqKind> seq_kind_from_string(const std::string& s) {
  if (s == "fgm_t") return SeqKind::FgmT;
  if (s == "ogm_theta") return SeqKind::OgmTheta;
  if (s == "ogm_a") return SeqKind::OgmA;
  if (s == "ogm_og") return SeqKind::OgmOg;
  if (s == "custom") return SeqKind::Custom;
  return std::nullopt;
}

ParamSeq make_fgm_t(int N) {
  require_iterations(N, "make_fgm_t");
  ParamSeq seq;
  seq.kind = SeqKind::FgmT;
  seq.N = N;
  seq.final_rule_doubled = false;
  seq.values.resize(N + 1);
  seq.values[0] = 1.0;
  long double v = 1.0L;
  for (int i = 1; i <= N; ++i) {
    v = next_plain(v);
    seq.values[i] = static_cast<double>(v);
  }
  seq.partial_sums = plain_sums(seq.values);
  require_valid(seq, "make_fgm_t");
  return seq;
}

ParamSeq make_ogm_theta(int N) {
  require_iterations(N, "make_ogm_theta");
  ParamSeq seq;
  seq.kind = SeqKind::OgmTheta;
  seq.N = N;
  seq.final_rule_doubled = true;
  seq.values.resize(N + 1);
  seq.values[0] = 1.0;
  long double v = 1.0L;
  for (int i = 1; i < N; ++i) {
    v = next_plain(v);
    seq.values[i] = static_cast<double>(v);
  }
  seq.values[N] = static_cast<double>(next_doubled(v));
  seq.partial_sums = doubled_sums(seq.values);
  require_valid(seq, "make_ogm_theta");
  return seq;
}

ParamSeq make_ogm_og(int N) {
  require_iterations(N, "make_ogm_og");
  const int m = N / 2;
  ParamSeq seq;
  seq.kind = SeqKind::OgmOg;
  seq.N = N;
  seq.final_rule_doubled = false;
  seq.values.resize(N + 1);
  seq.values[0] = 1.0;
  long double v = 1.0L;
  for (int i = 1; i <= N; ++i) {
    if (i <= m - 1) {
      v = next_plain(v);
      seq.values[i] = static_cast<double>(v);
    } else {
      seq.values[i] = static_cast<double>(N - i + 1) / 2.0;
    }
  }
  seq.partial_sums = plain_sums(seq.values);
  require_valid(seq, "make_ogm_og");
  return seq;
}

ParamSeq make_ogm_a(double a, int N) {
  require_iterations(N, "make_ogm_a");
  if (!(a >= 2.0))
    throw RuleViolation("make_ogm_a: requires a >= 2 (smaller a breaks the rule slack nonnegativity)");
  ParamSeq seq;
  seq.kind = SeqKind::OgmA;
  seq.N = N;
  seq.a = a;
  seq.final_rule_doubled = false;
  seq.values.resize(N + 1);
  for (int i = 0; i <= N; ++i) seq.values[i] = (static_cast<double>(i) + a) / a;
  seq.partial_sums = plain_sums(seq.values);
  require_valid(seq, "make_ogm_a");
  return seq;
}

ParamSeq make_custom(const std::vector<double>& values, bool final_rule_doubled) {
  if (values.size() < 2) throw std::invalid_argument("make_custom: need at least v_0 and v_1");
  if (values[0] != 1.0) throw RuleViolation("make_custom: values[0] must be exactly 1");
  ParamSeq seq;
  seq.kind = SeqKind::Custom;
  seq.N = static_cast<int>(values.size()) - 1;
  seq.final_rule_doubled = final_rule_doubled;
  seq.values = values;
  seq.partial_sums = sums_for(values, final_rule_doubled);
  require_valid(seq, "make_custom");
  return seq;
}

ParamSeq make_random_valid(std::uint64_t seed, int N, bool final_rule_doubled) {
  require_iterations(N, "make_random_valid");
  Rng rng(seed);
  std::vector<double> v(N + 1);
  v[0] = 1.0;
  long double prefix = 1.0L;
  for (int i = 1; i <= N; ++i) {
    // Largest admissible value is the positive root of v^2 - v - S = 0 with
    // S the (possibly doubled) sum of earlier elements.
    const long double s = (final_rule_doubled && i == N) ? 2.0L * prefix : prefix;
    const double cap = static_cast<double>((1.0L + sqrtl(1.0L + 4.0L * s)) / 2.0L);
    v[i] = rng.uniform(0.35, 0.98) * cap;
    prefix += v[i];
  }
  ParamSeq seq = make_custom(v, final_rule_doubled);
  return seq;
}

ParamSeq as_doubled_final(const ParamSeq& seq) {
  if (seq.final_rule_doubled)
    throw std::invalid_argument("as_doubled_final: sequence already uses the doubled-final rule");
  ParamSeq out;
  out.kind = SeqKind::Custom;
  out.N = seq.N;
  out.final_rule_doubled = true;
  out.values = seq.values;
  out.partial_sums = doubled_sums(seq.values);
  require_valid(out, "as_doubled_final");
  return out;
}

std::string ValidationReport::summary() const {
  if (ok) return "valid";
  std::ostringstream os;
  os << violations.size() << " rule violation(s):";
  for (const RuleCheck& c : violations) os << " [i=" << c.index << "] " << c.message << ";";
  return os.str();
}

ValidationReport validate(const ParamSeq& seq) {
  ValidationReport rep;
  auto fail = [&rep](int index, double slack, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({index, slack, std::move(msg)});
  };

  const int N = seq.N;
  if (N < 1 || seq.values.size() != static_cast<std::size_t>(N + 1) ||
      seq.partial_sums.size() != static_cast<std::size_t>(N + 1)) {
    fail(-1, 0.0, "inconsistent sizes: need values and partial_sums of length N+1 with N >= 1");
    return rep;
  }
  if (seq.values[0] != 1.0) fail(0, 0.0, "values[0] must be exactly 1");
  for (int i = 0; i <= N; ++i) {
    if (!(seq.values[i] > 0.0)) {
      std::ostringstream os;
      os << "values[" << i << "] = " << seq.values[i] << " is not positive";
      fail(i, seq.values[i], os.str());
    }
  }

  const std::vector<double> expect = sums_for(seq.values, seq.final_rule_doubled);
  for (int i = 0; i <= N; ++i) {
    const double tol = 1e-9 * std::max(1.0, std::fabs(expect[i]));
    if (std::fabs(seq.partial_sums[i] - expect[i]) > tol) {
      std::ostringstream os;
      os << "partial_sums[" << i << "] = " << seq.partial_sums[i]
         << " does not match the rule sum " << expect[i];
      fail(i, expect[i] - seq.partial_sums[i], os.str());
    }
  }

  for (int i = 0; i <= N; ++i) {
    const double slack = seq.partial_sums[i] - seq.values[i] * seq.values[i];
    const double tol = 1e-9 * std::max(1.0, seq.partial_sums[i]);
    if (slack < -tol) {
      std::ostringstream os;
      os << "values[" << i << "]^2 = " << seq.values[i] * seq.values[i]
         << " exceeds partial_sums[" << i << "] = " << seq.partial_sums[i];
      fail(i, slack, os.str());
    }
  }

  // Generator-specific growth facts, implied by the rules above but cheap to
  // confirm independently.
  if (seq.kind == SeqKind::FgmT) {
    for (int i = 0; i <= N; ++i) {
      const double lo = (i + 2) / 2.0;
      if (seq.values[i] < lo - 1e-9 * lo) {
        std::ostringstream os;
        os << "t[" << i << "] = " << seq.values[i] << " below the growth floor " << lo;
        fail(i, seq.values[i] - lo, os.str());
      }
    }
  }
  if (seq.kind == SeqKind::OgmTheta) {
    const double lo = (N + 1) / std::sqrt(2.0);
    if (seq.values[N] < lo - 1e-9 * lo) {
      std::ostringstream os;
      os << "theta[" << N << "] = " << seq.values[N] << " below the growth floor " << lo;
      fail(N, seq.values[N] - lo, os.str());
    }
  }
  return rep;
}

std::vector<double> rule_slacks(const ParamSeq& seq) {
  std::vector<double> s(seq.values.size());
  for (std::size_t i = 0; i < seq.values.size(); ++i)
    s[i] = seq.partial_sums[i] - seq.values[i] * seq.values[i];
  return s;
}

double slack_sum(const ParamSeq& seq) {
  long double acc = 0.0L;
  for (double s : rule_slacks(seq)) acc += s;
  return static_cast<double>(acc);
}

std::string to_json(const ParamSeq& seq) {
  nlohmann::json j;
  j["kind"] = to_string(seq.kind);
  j["N"] = seq.N;
  if (seq.kind == SeqKind::OgmA) j["a"] = seq.a;
  j["final_rule_doubled"] = seq.final_rule_doubled;
  j["values"] = seq.values;
  j["partial_sums"] = seq.partial_sums;
  return j.dump();
}

ParamSeq param_seq_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ParamSeq seq;
  const auto kind = seq_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("param_seq_from_json: unknown kind");
  seq.kind = *kind;
  seq.N = j.at("N").get<int>();
  seq.a = j.value("a", 0.0);
  seq.final_rule_doubled = j.at("final_rule_doubled").get<bool>();
  seq.values = j.at("values").get<std::vector<double>>();
  seq.partial_sums = j.at("partial_sums").get<std::vector<double>>();
  require_valid(seq, "param_seq_from_json");
  return seq;
}

}  // namespace pepfo
