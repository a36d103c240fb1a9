// SPDX-License-Identifier: MIT
//
// Command-line front end. Deliberately written against the public C API
// only, so it doubles as a smoke test of the shared library surface.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pepfo/pepfo.h>

namespace {

// Owns a string allocated by the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { pepfo_string_free(p); }
  CStr() = default;
  CStr(const CStr&) = delete;
  CStr& operator=(const CStr&) = delete;
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &p; }
};

using SeqHandle = Handle<pepfo_seq, pepfo_seq_free>;
using StepsHandle = Handle<pepfo_steps, pepfo_steps_free>;
using OracleHandle = Handle<pepfo_oracle, pepfo_oracle_free>;
using TraceHandle = Handle<pepfo_trace, pepfo_trace_free>;
using CertHandle = Handle<pepfo_cert, pepfo_cert_free>;

// Domain/usage failures exit 2; failed assertions exit 1.
[[noreturn]] void die(pepfo_status st) {
  std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(st), pepfo_last_error());
  std::exit(2);
}

void check(pepfo_status st) {
  if (st != PEPFO_OK) die(st);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
    std::exit(2);
  }
  f << text;
}

// Builds the sequence a certificate construction expects: the "cost"
// construction needs the doubled-final rule, so plain named sequences are
// reinterpreted under it first.
pepfo_status build_cert_seq(const std::string& kind, const std::string& construction, int N,
                            double a, uint64_t seed, pepfo_seq** out) {
  const bool want_doubled = construction == "cost";
  if (kind == "random") return pepfo_seq_make_random(seed, N, want_doubled ? 1 : 0, out);

  SeqHandle base;
  pepfo_status st = pepfo_seq_make(kind.c_str(), N, a, base.out());
  if (st != PEPFO_OK) return st;
  if (want_doubled && !pepfo_seq_is_doubled(base.p)) return pepfo_seq_as_doubled(base.p, out);
  *out = base.p;
  base.p = nullptr;
  return PEPFO_OK;
}

int cmd_run(const std::string& method, int N, int m, double a, double step,
            const std::string& function, double L, double R, int d, uint64_t seed,
            const std::string& format, bool points, const std::string& out_path) {
  if (d < 0) d = N + 2;
  OracleHandle f;
  check(pepfo_oracle_make(function.c_str(), seed, d, L, R, N, f.out()));
  std::vector<double> x0(static_cast<size_t>(d));
  check(pepfo_oracle_start_point(f.p, seed, R, x0.data(), d));
  TraceHandle tr;
  check(pepfo_run(method.c_str(), N, m, a, step, nullptr, f.p, x0.data(), d, tr.out()));
  CStr text;
  if (format == "json") {
    check(pepfo_trace_json(tr.p, points ? 1 : 0, &text.p));
  } else {
    check(pepfo_trace_csv(tr.p, &text.p));
  }
  emit(text.p, out_path);
  return 0;
}

int cmd_certify(const std::string& construction, const std::string& kind, int N, int N_to,
                double a, uint64_t seed, double L, double R) {
  if (N_to < N) N_to = N;
  int failures = 0;
  for (int n = N; n <= N_to; ++n) {
    SeqHandle seq;
    pepfo_status st = build_cert_seq(kind, construction, n, a, seed, seq.out());
    if (st != PEPFO_OK) die(st);
    CertHandle cert;
    st = pepfo_cert_make(construction.c_str(), seq.p, cert.out());
    if (st != PEPFO_OK) die(st);

    double bound = 0.0;
    const char* bound_name = "cost";
    if (pepfo_cert_cost_bound(cert.p, L, R, &bound) != PEPFO_OK) {
      check(pepfo_cert_grad_bound(cert.p, L, R, &bound));
      bound_name = "grad";
    }

    pepfo_verify_report rep{};
    CStr detail;
    check(pepfo_cert_verify(cert.p, &rep, &detail.p));
    const bool pass = rep.ok != 0;
    if (!pass) ++failures;
    std::printf("N=%d %s_bound=%.12g min_eig=%.3e psd_tol=%.3e membership=%s identity=%s %s\n", n,
                bound_name, bound, rep.min_eigenvalue, rep.psd_tolerance,
                rep.membership_ok ? "ok" : "VIOLATED", rep.identity_ok ? "ok" : "VIOLATED",
                pass ? "PASS" : "FAIL");
    if (!pass && detail.p && detail.p[0]) std::printf("  detail: %s\n", detail.p);
  }
  return failures == 0 ? 0 : 1;
}

int cmd_table(int which, const std::vector<int>& Ns, double L, double R,
              const std::string& format, const std::string& out_path) {
  CStr text;
  check(pepfo_table(which, Ns.empty() ? nullptr : Ns.data(), static_cast<int>(Ns.size()), L, R,
                    format.c_str(), &text.p));
  emit(text.p, out_path);
  return 0;
}

int cmd_worstcase(const std::string& target, int N, double L, double R, int d, uint64_t seed,
                  const std::string& out_path) {
  if (d < 0) d = N + 2;
  pepfo_worstcase_report rep{};
  TraceHandle tr;
  check(pepfo_worstcase(target.c_str(), N, L, R, d, seed, &rep, tr.out()));

  double final_grad = 0.0;
  check(pepfo_trace_value(tr.p, "grad_norm_x", N, &final_grad));
  std::printf("target=%s N=%d expected_final_grad=%.12g measured=%.12g reciprocal=%.6g "
              "max_rel_gap=%.3e %s\n",
              target.c_str(), N, rep.expected_final_grad, final_grad, L * R / final_grad,
              rep.max_rel_gap, rep.ok ? "PASS" : "FAIL");
  if (!out_path.empty()) {
    CStr text;
    check(pepfo_trace_csv(tr.p, &text.p));
    emit(text.p, out_path);
  }
  return rep.ok ? 0 : 1;
}

int cmd_export_sdpa(const std::string& kind, const std::string& method, int N, double a,
                    double step, const std::string& out_path) {
  StepsHandle h;
  check(pepfo_steps_for_method(method.c_str(), N, a, step, nullptr, h.out()));
  check(pepfo_export_sdpa(kind.c_str(), h.p, out_path.c_str()));
  std::printf("wrote %s and %s.json\n", out_path.c_str(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-step first-order methods: runs, worst-case bounds, dual certificates"};
  app.set_version_flag("--version", std::string(pepfo_version()));
  app.require_subcommand(1);

  std::string method = "gm", function = "psd-quadratic", format = "csv", out_path;
  std::string construction, seq_kind = "fgm-t", target, sdp_kind = "d";
  int N = 1, N_to = -1, m = -1, d = -1, which = 2;
  double a = 4.0, L = 1.0, R = 1.0, step = 1.0;
  std::uint64_t seed = 1;
  bool points = false;
  std::vector<int> N_list;

  CLI::App* run = app.add_subcommand("run", "run a method and emit its trace");
  run->add_option("--method", method, "gm, fgm1, fgm2, ogm1, ogm2, gogm1, gogm2, gogm1p, gogm2p, "
                                      "ogm-m, ogm-og, ogm-a")
      ->required();
  run->add_option("--N", N, "iteration count")->required();
  run->add_option("--m", m, "switch index for ogm-m (default floor(2N/3))");
  run->add_option("--a", a, "parameter for ogm-a");
  run->add_option("--step", step, "step size for gm");
  run->add_option("--function", function, "quadratic, huber, psd-quadratic, least-squares, "
                                          "log-sum-exp");
  run->add_option("--L", L, "gradient Lipschitz constant");
  run->add_option("--R", R, "start distance to the minimizer");
  run->add_option("--d", d, "dimension (default N+2)");
  run->add_option("--seed", seed, "seed for the function and start point");
  run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--points", points, "include iterate coordinates in JSON");
  run->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* certify = app.add_subcommand("certify", "build and verify a dual certificate");
  certify->add_option("--certificate", construction, "cost, cost-post, grad-fgm, grad-slack")
      ->required()
      ->check(CLI::IsMember({"cost", "cost-post", "grad-fgm", "grad-slack"}));
  certify->add_option("--sequence", seq_kind, "fgm-t, ogm-theta, ogm-og, ogm-a, random");
  certify->add_option("--N", N, "horizon (or start of the sweep)")->required();
  certify->add_option("--N-to", N_to, "sweep end (inclusive)");
  certify->add_option("--a", a, "parameter for ogm-a sequences");
  certify->add_option("--seed", seed, "seed for random sequences");
  certify->add_option("--L", L, "gradient Lipschitz constant");
  certify->add_option("--R", R, "start distance to the minimizer");

  CLI::App* table = app.add_subcommand("table", "emit a worst-case bound table");
  table->add_option("--which", which, "1 rates, 2 cost, 3 smallest gradient, 4 final gradient")
      ->required()
      ->check(CLI::Range(1, 4));
  table->add_option("--N", N_list, "N values (default 1 2 4 10 20 30 40 47 50)");
  table->add_option("--L", L, "gradient Lipschitz constant");
  table->add_option("--R", R, "start distance to the minimizer");
  table->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* worstcase = app.add_subcommand("worstcase", "replay an exact worst-case trajectory");
  worstcase->add_option("--target", target, "ogm-quadratic or gm-huber")
      ->required()
      ->check(CLI::IsMember({"ogm-quadratic", "gm-huber"}));
  worstcase->add_option("--N", N, "iteration count")->required();
  worstcase->add_option("--L", L, "gradient Lipschitz constant");
  worstcase->add_option("--R", R, "start distance to the minimizer");
  worstcase->add_option("--d", d, "dimension (default N+2)");
  worstcase->add_option("--seed", seed, "seed for the start direction");
  worstcase->add_option("--out", out_path, "also write the trace CSV here");

  CLI::App* exporter = app.add_subcommand("export-sdpa", "write a dual SDP in SDPA sparse format");
  exporter->add_option("--kind", sdp_kind, "d (cost), dprime (post-step cost), ddprime (gradient)")
      ->required()
      ->check(CLI::IsMember({"d", "dprime", "ddprime"}));
  exporter->add_option("--method", method, "gm, fgm, ogm, gogm, gogm-prime, ogm-og, ogm-a")
      ->required();
  exporter->add_option("--N", N, "horizon")->required();
  exporter->add_option("--a", a, "parameter for ogm-a");
  exporter->add_option("--step", step, "step size for gm");
  exporter->add_option("--out", out_path, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(method, N, m, a, step, function, L, R, d, seed, format, points, out_path);
  if (certify->parsed()) return cmd_certify(construction, seq_kind, N, N_to, a, seed, L, R);
  if (table->parsed()) return cmd_table(which, N_list, L, R, format, out_path);
  if (worstcase->parsed()) return cmd_worstcase(target, N, L, R, d, seed, out_path);
  if (exporter->parsed()) return cmd_export_sdpa(sdp_kind, method, N, a, step, out_path);
  return 2;
}
