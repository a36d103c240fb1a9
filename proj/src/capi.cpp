// SPDX-License-Identifier: MIT
//
// C binding. Every entry point traps exceptions and converts them to status
// codes; the message stays in thread-local storage for pepfo_last_error().
#include "pepfo/pepfo.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <ios>
#include <new>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "bounds.hpp"
#include "common.hpp"
#include "methods.hpp"
#include "oracles.hpp"
#include "params.hpp"
#include "pep.hpp"
#include "sdpa.hpp"
#include "steps.hpp"
#include "tables.hpp"
#include "trace_io.hpp"

struct pepfo_seq {
  pepfo::ParamSeq v;
};
struct pepfo_steps {
  pepfo::StepMatrix v;
};
struct pepfo_oracle {
  pepfo::FunctionOracle v;
};
struct pepfo_trace {
  pepfo::IterateTrace v;
};
struct pepfo_cert {
  pepfo::DualCertificate v;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
pepfo_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return PEPFO_OK;
  } catch (const pepfo::RuleViolation& e) {
    set_error(e.what());
    return PEPFO_ERROR_RULE_VIOLATION;
  } catch (const pepfo::NotAvailable& e) {
    set_error(e.what());
    return PEPFO_ERROR_NOT_AVAILABLE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return PEPFO_ERROR_INVALID_ARGUMENT;
  } catch (const std::ios_base::failure& e) {
    set_error(e.what());
    return PEPFO_ERROR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PEPFO_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return PEPFO_ERROR_INTERNAL;
  }
}

pepfo_status fail_invalid(const std::string& msg) {
  set_error(msg);
  return PEPFO_ERROR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

Eigen::Map<const Eigen::VectorXd> as_vector(const double* x, int d) {
  return Eigen::Map<const Eigen::VectorXd>(x, d);
}

pepfo::ParamSeq make_named_seq(const std::string& kind, int N, double a) {
  if (kind == "fgm-t") return pepfo::make_fgm_t(N);
  if (kind == "ogm-theta") return pepfo::make_ogm_theta(N);
  if (kind == "ogm-og") return pepfo::make_ogm_og(N);
  if (kind == "ogm-a") return pepfo::make_ogm_a(a, N);
  throw std::invalid_argument("unknown sequence kind: " + kind);
}

}  // namespace

extern "C" {

const char* pepfo_version(void) { return "0.1.0"; }

const char* pepfo_last_error(void) { return g_last_error.c_str(); }

void pepfo_string_free(char* s) { std::free(s); }

/* ---------------------------- sequences ---------------------------- */

pepfo_status pepfo_seq_make(const char* kind, int N, double a, pepfo_seq** out) {
  if (!kind || !out) return fail_invalid("pepfo_seq_make: kind and out must be non-null");
  return guarded([&] { *out = new pepfo_seq{make_named_seq(kind, N, a)}; });
}

pepfo_status pepfo_seq_make_custom(const double* values, int N, int doubled_final,
                                   pepfo_seq** out) {
  if (!values || !out) return fail_invalid("pepfo_seq_make_custom: values and out must be non-null");
  if (N < 0) return fail_invalid("pepfo_seq_make_custom: N must be >= 0");
  return guarded([&] {
    std::vector<double> v(values, values + N + 1);
    *out = new pepfo_seq{pepfo::make_custom(v, doubled_final != 0)};
  });
}

pepfo_status pepfo_seq_make_random(uint64_t seed, int N, int doubled_final, pepfo_seq** out) {
  if (!out) return fail_invalid("pepfo_seq_make_random: out must be non-null");
  return guarded([&] { *out = new pepfo_seq{pepfo::make_random_valid(seed, N, doubled_final != 0)}; });
}

pepfo_status pepfo_seq_as_doubled(const pepfo_seq* s, pepfo_seq** out) {
  if (!s || !out) return fail_invalid("pepfo_seq_as_doubled: s and out must be non-null");
  return guarded([&] { *out = new pepfo_seq{pepfo::as_doubled_final(s->v)}; });
}

int pepfo_seq_count(const pepfo_seq* s) { return s ? s->v.N : 0; }

const char* pepfo_seq_kind(const pepfo_seq* s) { return s ? pepfo::to_string(s->v.kind) : ""; }

int pepfo_seq_is_doubled(const pepfo_seq* s) { return s && s->v.final_rule_doubled ? 1 : 0; }

pepfo_status pepfo_seq_values(const pepfo_seq* s, double* out, int len) {
  if (!s || !out) return fail_invalid("pepfo_seq_values: s and out must be non-null");
  if (len != s->v.N + 1) return fail_invalid("pepfo_seq_values: len must be N + 1");
  std::memcpy(out, s->v.values.data(), sizeof(double) * static_cast<size_t>(len));
  return PEPFO_OK;
}

pepfo_status pepfo_seq_partial_sums(const pepfo_seq* s, double* out, int len) {
  if (!s || !out) return fail_invalid("pepfo_seq_partial_sums: s and out must be non-null");
  if (len != s->v.N + 1) return fail_invalid("pepfo_seq_partial_sums: len must be N + 1");
  std::memcpy(out, s->v.partial_sums.data(), sizeof(double) * static_cast<size_t>(len));
  return PEPFO_OK;
}

double pepfo_seq_slack_sum(const pepfo_seq* s) { return s ? pepfo::slack_sum(s->v) : 0.0; }

pepfo_status pepfo_seq_validate(const pepfo_seq* s, int* ok, char** detail) {
  if (!s || !ok) return fail_invalid("pepfo_seq_validate: s and ok must be non-null");
  return guarded([&] {
    pepfo::ValidationReport rep = pepfo::validate(s->v);
    *ok = rep.ok ? 1 : 0;
    if (detail) *detail = dup_string(rep.summary());
  });
}

pepfo_status pepfo_seq_json(const pepfo_seq* s, char** out_json) {
  if (!s || !out_json) return fail_invalid("pepfo_seq_json: s and out_json must be non-null");
  return guarded([&] { *out_json = dup_string(pepfo::to_json(s->v)); });
}

void pepfo_seq_free(pepfo_seq* s) { delete s; }

/* ------------------------------ steps ------------------------------ */

pepfo_status pepfo_steps_make(const char* rule, const pepfo_seq* s, pepfo_steps** out) {
  if (!rule || !s || !out) return fail_invalid("pepfo_steps_make: rule, s, out must be non-null");
  return guarded([&] {
    std::string r = rule;
    pepfo::StepMatrix h;
    if (r == "fgm") {
      h = pepfo::h_fgm(s->v);
    } else if (r == "ogm") {
      h = pepfo::h_ogm(s->v);
    } else if (r == "ogm-prime") {
      h = pepfo::h_ogm_prime(s->v);
    } else if (r == "gogm") {
      h = pepfo::h_gogm(s->v);
    } else if (r == "gogm-prime") {
      h = pepfo::h_gogm_prime(s->v);
    } else if (r == "gogm-recursive") {
      h = pepfo::h_gogm_recursive(s->v);
    } else {
      throw std::invalid_argument("unknown step rule: " + r);
    }
    *out = new pepfo_steps{std::move(h)};
  });
}

pepfo_status pepfo_steps_make_gm(int N, double step, pepfo_steps** out) {
  if (!out) return fail_invalid("pepfo_steps_make_gm: out must be non-null");
  return guarded([&] { *out = new pepfo_steps{pepfo::h_gm(N, step)}; });
}

pepfo_status pepfo_steps_for_method(const char* method, int N, double a, double gm_step,
                                    const pepfo_seq* seq_or_null, pepfo_steps** out) {
  if (!method || !out) return fail_invalid("pepfo_steps_for_method: method and out must be non-null");
  return guarded([&] {
    std::string name = method;
    pepfo::StepMatrix h;
    if (name == "gm") {
      h = pepfo::h_gm(N, gm_step);
    } else if (name == "fgm" || name == "fgm1" || name == "fgm2") {
      h = pepfo::h_fgm(seq_or_null ? seq_or_null->v : pepfo::make_fgm_t(N));
    } else if (name == "ogm" || name == "ogm1" || name == "ogm2") {
      h = pepfo::h_ogm(seq_or_null ? seq_or_null->v : pepfo::make_ogm_theta(N));
    } else if (name == "gogm" || name == "gogm1" || name == "gogm2") {
      h = pepfo::h_gogm(seq_or_null ? seq_or_null->v : pepfo::make_ogm_theta(N));
    } else if (name == "gogm-prime" || name == "gogm1p" || name == "gogm2p") {
      h = pepfo::h_gogm_prime(seq_or_null ? seq_or_null->v : pepfo::make_fgm_t(N));
    } else if (name == "ogm-og") {
      h = pepfo::h_gogm_prime(seq_or_null ? seq_or_null->v : pepfo::make_ogm_og(N));
    } else if (name == "ogm-a") {
      h = pepfo::h_gogm_prime(seq_or_null ? seq_or_null->v : pepfo::make_ogm_a(a, N));
    } else {
      throw std::invalid_argument("no canonical step matrix for method: " + name);
    }
    *out = new pepfo_steps{std::move(h)};
  });
}

int pepfo_steps_count(const pepfo_steps* h) { return h ? h->v.N : 0; }

pepfo_status pepfo_steps_entry(const pepfo_steps* h, int i_plus_1, int k, double* out) {
  if (!h || !out) return fail_invalid("pepfo_steps_entry: h and out must be non-null");
  return guarded([&] { *out = h->v.entry(i_plus_1, k); });
}

pepfo_status pepfo_steps_csv(const pepfo_steps* h, char** out_csv) {
  if (!h || !out_csv) return fail_invalid("pepfo_steps_csv: h and out_csv must be non-null");
  return guarded([&] {
    std::ostringstream os;
    pepfo::write_step_csv(h->v, os);
    *out_csv = dup_string(os.str());
  });
}

void pepfo_steps_free(pepfo_steps* h) { delete h; }

/* ----------------------------- oracles ----------------------------- */

pepfo_status pepfo_oracle_make(const char* family, uint64_t seed, int d, double L, double R, int N,
                               pepfo_oracle** out) {
  if (!family || !out) return fail_invalid("pepfo_oracle_make: family and out must be non-null");
  return guarded([&] {
    std::string f = family;
    pepfo::FunctionOracle oracle;
    if (f == "quadratic") {
      oracle = pepfo::make_quadratic_phi(L, d);
    } else if (f == "huber") {
      oracle = pepfo::make_huber_psi(L, R, N, d);
    } else if (f == "psd-quadratic") {
      oracle = pepfo::make_random_psd_quadratic(seed, d, L);
    } else if (f == "least-squares") {
      oracle = pepfo::make_random_least_squares(seed, d + 2, d, L);
    } else if (f == "log-sum-exp") {
      oracle = pepfo::make_random_log_sum_exp(seed, d, 1.0);
    } else {
      throw std::invalid_argument("unknown oracle family: " + f);
    }
    *out = new pepfo_oracle{std::move(oracle)};
  });
}

int pepfo_oracle_dim(const pepfo_oracle* f) { return f ? f->v.d : 0; }

double pepfo_oracle_lipschitz(const pepfo_oracle* f) { return f ? f->v.L : 0.0; }

pepfo_status pepfo_oracle_value(const pepfo_oracle* f, const double* x, int d, double* out) {
  if (!f || !x || !out) return fail_invalid("pepfo_oracle_value: f, x, out must be non-null");
  if (d != f->v.d) return fail_invalid("pepfo_oracle_value: d does not match the oracle");
  return guarded([&] { *out = f->v.value(as_vector(x, d)); });
}

pepfo_status pepfo_oracle_grad(const pepfo_oracle* f, const double* x, int d, double* out) {
  if (!f || !x || !out) return fail_invalid("pepfo_oracle_grad: f, x, out must be non-null");
  if (d != f->v.d) return fail_invalid("pepfo_oracle_grad: d does not match the oracle");
  return guarded([&] {
    Eigen::VectorXd g = f->v.grad(as_vector(x, d));
    std::memcpy(out, g.data(), sizeof(double) * static_cast<size_t>(d));
  });
}

pepfo_status pepfo_oracle_minimizer(const pepfo_oracle* f, double* out, int d) {
  if (!f || !out) return fail_invalid("pepfo_oracle_minimizer: f and out must be non-null");
  if (d != f->v.d) return fail_invalid("pepfo_oracle_minimizer: d does not match the oracle");
  if (!f->v.minimizer) {
    set_error("oracle has no known minimizer");
    return PEPFO_ERROR_NOT_AVAILABLE;
  }
  std::memcpy(out, f->v.minimizer->data(), sizeof(double) * static_cast<size_t>(d));
  return PEPFO_OK;
}

double pepfo_oracle_min_value(const pepfo_oracle* f) { return f ? f->v.min_value : 0.0; }

pepfo_status pepfo_oracle_start_point(const pepfo_oracle* f, uint64_t seed, double R, double* out,
                                      int d) {
  if (!f || !out) return fail_invalid("pepfo_oracle_start_point: f and out must be non-null");
  if (d != f->v.d) return fail_invalid("pepfo_oracle_start_point: d does not match the oracle");
  if (!f->v.minimizer) {
    set_error("oracle has no known minimizer to anchor the start point");
    return PEPFO_ERROR_NOT_AVAILABLE;
  }
  return guarded([&] {
    // Stream-split so the direction never reuses the oracle's own draws.
    pepfo::Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
    Eigen::VectorXd x0 = *f->v.minimizer + R * rng.unit_vector(d);
    std::memcpy(out, x0.data(), sizeof(double) * static_cast<size_t>(d));
  });
}

void pepfo_oracle_free(pepfo_oracle* f) { delete f; }

/* ------------------------------ runs ------------------------------- */

pepfo_status pepfo_run(const char* method, int N, int m, double a, double gm_step,
                       const pepfo_seq* seq_or_null, const pepfo_oracle* f, const double* x0,
                       int d, pepfo_trace** out) {
  if (!method || !f || !x0 || !out)
    return fail_invalid("pepfo_run: method, f, x0, out must be non-null");
  return guarded([&] {
    auto family = pepfo::family_from_string(method);
    if (!family) throw std::invalid_argument(std::string("unknown method: ") + method);
    pepfo::MethodSpec spec;
    spec.family = *family;
    spec.N = N;
    spec.m = m;
    spec.a = a;
    spec.gm_step = gm_step;
    if (seq_or_null) spec.params = seq_or_null->v;
    pepfo::IterateTrace tr = pepfo::run(spec, f->v, as_vector(x0, d));
    *out = new pepfo_trace{std::move(tr)};
  });
}

pepfo_status pepfo_run_fo(const pepfo_steps* h, const pepfo_oracle* f, const double* x0, int d,
                          pepfo_trace** out) {
  if (!h || !f || !x0 || !out) return fail_invalid("pepfo_run_fo: h, f, x0, out must be non-null");
  return guarded([&] {
    pepfo::IterateTrace tr = pepfo::run_fo(h->v, f->v, as_vector(x0, d));
    *out = new pepfo_trace{std::move(tr)};
  });
}

int pepfo_trace_count(const pepfo_trace* t) { return t ? t->v.N : 0; }

int pepfo_trace_dim(const pepfo_trace* t) {
  return t && !t->v.x.empty() ? static_cast<int>(t->v.x[0].size()) : 0;
}

pepfo_status pepfo_trace_value(const pepfo_trace* t, const char* field, int i, double* out) {
  if (!t || !field || !out) return fail_invalid("pepfo_trace_value: t, field, out must be non-null");
  std::string name = field;
  if (name == "f_y_post") {
    *out = t->v.f_y_post;
    return PEPFO_OK;
  }
  if (name == "grad_norm_y_post") {
    *out = t->v.grad_y_post.norm();
    return PEPFO_OK;
  }
  if (i < 0 || i > t->v.N) return fail_invalid("pepfo_trace_value: index out of range");
  if (name == "f_x") {
    *out = t->v.f_x[i];
  } else if (name == "f_y") {
    *out = t->v.f_y[i];
  } else if (name == "grad_norm_x") {
    *out = t->v.grad_norm_x(i);
  } else if (name == "grad_norm_y") {
    *out = t->v.grad_norm_y(i);
  } else {
    return fail_invalid("pepfo_trace_value: unknown field " + name);
  }
  return PEPFO_OK;
}

pepfo_status pepfo_trace_point(const pepfo_trace* t, const char* which, int i, double* out,
                               int d) {
  if (!t || !which || !out) return fail_invalid("pepfo_trace_point: t, which, out must be non-null");
  const int dim = pepfo_trace_dim(t);
  if (d != dim) return fail_invalid("pepfo_trace_point: d does not match the trace");
  std::string name = which;
  const Eigen::VectorXd* p = nullptr;
  if (name == "y_post") {
    p = &t->v.y_post;
  } else {
    if (i < 0 || i > t->v.N) return fail_invalid("pepfo_trace_point: index out of range");
    if (name == "x") {
      p = &t->v.x[i];
    } else if (name == "y") {
      p = &t->v.y[i];
    } else {
      return fail_invalid("pepfo_trace_point: unknown point " + name);
    }
  }
  std::memcpy(out, p->data(), sizeof(double) * static_cast<size_t>(d));
  return PEPFO_OK;
}

pepfo_status pepfo_trace_csv(const pepfo_trace* t, char** out_csv) {
  if (!t || !out_csv) return fail_invalid("pepfo_trace_csv: t and out_csv must be non-null");
  return guarded([&] { *out_csv = dup_string(pepfo::trace_to_csv(t->v)); });
}

pepfo_status pepfo_trace_json(const pepfo_trace* t, int include_points, char** out_json) {
  if (!t || !out_json) return fail_invalid("pepfo_trace_json: t and out_json must be non-null");
  return guarded([&] { *out_json = dup_string(pepfo::trace_to_json(t->v, include_points != 0)); });
}

void pepfo_trace_free(pepfo_trace* t) { delete t; }

/* --------------------------- certificates -------------------------- */

pepfo_status pepfo_cert_make(const char* construction, const pepfo_seq* s, pepfo_cert** out) {
  if (!construction || !s || !out)
    return fail_invalid("pepfo_cert_make: construction, s, out must be non-null");
  return guarded([&] {
    auto kind = pepfo::cert_kind_from_string(construction);
    if (!kind)
      throw std::invalid_argument(std::string("unknown certificate construction: ") + construction);
    *out = new pepfo_cert{pepfo::make_cert(*kind, s->v)};
  });
}

const char* pepfo_cert_construction(const pepfo_cert* c) {
  return c ? pepfo::to_string(c->v.construction) : "";
}

pepfo_status pepfo_cert_cost_bound(const pepfo_cert* c, double L, double R, double* out) {
  if (!c || !out) return fail_invalid("pepfo_cert_cost_bound: c and out must be non-null");
  return guarded([&] { *out = c->v.cost_bound(L, R); });
}

pepfo_status pepfo_cert_grad_bound(const pepfo_cert* c, double L, double R, double* out) {
  if (!c || !out) return fail_invalid("pepfo_cert_grad_bound: c and out must be non-null");
  return guarded([&] { *out = c->v.grad_bound(L, R); });
}

pepfo_status pepfo_cert_verify(const pepfo_cert* c, pepfo_verify_report* out,
                               char** detail_or_null) {
  if (!c || !out) return fail_invalid("pepfo_cert_verify: c and out must be non-null");
  return guarded([&] {
    pepfo::StepMatrix h = pepfo::cert_step_matrix(c->v);
    pepfo::PepMatrices pm(std::move(h));
    pepfo::VerifyReport rep = pepfo::verify(c->v, pm);
    out->ok = rep.ok ? 1 : 0;
    out->membership_ok = rep.membership_ok ? 1 : 0;
    out->psd_ok = rep.psd_ok ? 1 : 0;
    out->identity_checked = rep.identity_checked ? 1 : 0;
    out->identity_ok = rep.identity_ok ? 1 : 0;
    out->max_membership_violation = rep.max_membership_violation;
    out->min_eigenvalue = rep.min_eigenvalue;
    out->psd_tolerance = rep.psd_tolerance;
    out->max_identity_gap = rep.max_identity_gap;
    if (detail_or_null) *detail_or_null = dup_string(rep.detail);
  });
}

void pepfo_cert_free(pepfo_cert* c) { delete c; }

/* ------------------------- bounds and tables ----------------------- */

pepfo_status pepfo_bound(const char* method, const char* metric, int N, double L, double R, int m,
                         double a, const pepfo_seq* seq_or_null, pepfo_bound_info* out,
                         char** formula_or_null, char** iterate_or_null) {
  if (!method || !metric || !out)
    return fail_invalid("pepfo_bound: method, metric, out must be non-null");
  return guarded([&] {
    auto bm = pepfo::bound_method_from_string(method);
    if (!bm) throw std::invalid_argument(std::string("unknown bound method: ") + method);
    auto mt = pepfo::metric_from_string(metric);
    if (!mt) throw std::invalid_argument(std::string("unknown metric: ") + metric);
    pepfo::BoundQuery q;
    q.N = N;
    q.L = L;
    q.R = R;
    q.m = m;
    q.a = a;
    q.seq = seq_or_null ? &seq_or_null->v : nullptr;
    pepfo::BoundSpec spec = pepfo::bound(*bm, *mt, q);
    out->value = spec.value;
    out->has_simplified = spec.simplified.has_value() ? 1 : 0;
    out->simplified = spec.simplified.value_or(0.0);
    if (formula_or_null) *formula_or_null = dup_string(spec.formula);
    if (iterate_or_null) *iterate_or_null = dup_string(spec.iterate);
  });
}

pepfo_status pepfo_table(int which, const int* Ns, int n_count, double L, double R,
                         const char* format, char** out_text) {
  if (!format || !out_text) return fail_invalid("pepfo_table: format and out_text must be non-null");
  if (Ns && n_count <= 0) return fail_invalid("pepfo_table: n_count must be positive with Ns");
  return guarded([&] {
    std::vector<int> ns;
    if (Ns) {
      ns.assign(Ns, Ns + n_count);
    } else {
      ns = {1, 2, 4, 10, 20, 30, 40, 47, 50};
    }
    pepfo::Table t = pepfo::make_table(which, ns, L, R);
    std::string fmt = format;
    if (fmt == "csv") {
      *out_text = dup_string(pepfo::table_to_csv(t));
    } else if (fmt == "json") {
      *out_text = dup_string(pepfo::table_to_json(t));
    } else {
      throw std::invalid_argument("format must be csv or json");
    }
  });
}

/* ---------------------------- worst cases -------------------------- */

pepfo_status pepfo_worstcase(const char* target, int N, double L, double R, int d, uint64_t seed,
                             pepfo_worstcase_report* out, pepfo_trace** trace_or_null) {
  if (!target || !out) return fail_invalid("pepfo_worstcase: target and out must be non-null");
  return guarded([&] {
    std::string t = target;
    pepfo::WorstCaseReport rep;
    if (t == "ogm-quadratic") {
      rep = pepfo::worstcase_ogm_quadratic(N, L, R, d, seed);
    } else if (t == "gm-huber") {
      rep = pepfo::worstcase_gm_huber(N, L, R, d, seed);
    } else {
      throw std::invalid_argument("unknown worst-case target: " + t);
    }
    out->ok = rep.ok ? 1 : 0;
    out->expected_final_grad = rep.expected_final_grad;
    out->max_rel_gap = rep.max_rel_gap;
    if (trace_or_null) *trace_or_null = new pepfo_trace{std::move(rep.trace)};
  });
}

/* ------------------------------ export ----------------------------- */

pepfo_status pepfo_export_sdpa(const char* kind, const pepfo_steps* h, const char* path) {
  if (!kind || !h || !path) return fail_invalid("pepfo_export_sdpa: kind, h, path must be non-null");
  return guarded([&] {
    auto pk = pepfo::pep_kind_from_string(kind);
    if (!pk) throw std::invalid_argument(std::string("unknown SDP kind: ") + kind);
    pepfo::export_sdpa(*pk, h->v, path);
  });
}

}  // extern "C"
