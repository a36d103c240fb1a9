// SPDX-License-Identifier: MIT
//
// Exercises the C interface end to end through the shared library surface:
// handles, error codes, string ownership, and the numeric paths underneath.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include <pepfo/pepfo.h>

namespace {

// Takes ownership of a char* returned by the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { pepfo_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  operator T*() const { return p; }
};

using Seq = Handle<pepfo_seq, pepfo_seq_free>;
using Steps = Handle<pepfo_steps, pepfo_steps_free>;
using Oracle = Handle<pepfo_oracle, pepfo_oracle_free>;
using Trace = Handle<pepfo_trace, pepfo_trace_free>;
using Cert = Handle<pepfo_cert, pepfo_cert_free>;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::string(pepfo_version()) == "0.1.0");
  pepfo_string_free(nullptr);  // must be a no-op

  Seq s;
  CHECK(pepfo_seq_make("no-such-kind", 3, 0.0, s.out()) == PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(pepfo_last_error()).find("no-such-kind") != std::string::npos);
  CHECK(pepfo_seq_make("ogm-a", 3, 1.0, s.out()) == PEPFO_ERROR_RULE_VIOLATION);
  CHECK(pepfo_seq_make(nullptr, 3, 0.0, s.out()) == PEPFO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("sequence handles") {
  Seq s;
  REQUIRE(pepfo_seq_make("ogm-theta", 5, 0.0, s.out()) == PEPFO_OK);
  CHECK(pepfo_seq_count(s) == 5);
  CHECK(std::string(pepfo_seq_kind(s)) == "ogm_theta");
  CHECK(pepfo_seq_is_doubled(s) == 1);

  std::vector<double> v(6), ps(6);
  REQUIRE(pepfo_seq_values(s, v.data(), 6) == PEPFO_OK);
  REQUIRE(pepfo_seq_partial_sums(s, ps.data(), 6) == PEPFO_OK);
  CHECK(v[0] == 1.0);
  CHECK(std::abs(v[1] - 1.6180339887498948482) < 1e-15);
  CHECK(std::abs(v[5] - 5.1864127202260882102) < 1e-14);
  CHECK(std::abs(pepfo_seq_slack_sum(s)) < 1e-12);
  CHECK(pepfo_seq_values(s, v.data(), 5) == PEPFO_ERROR_INVALID_ARGUMENT);

  int ok = 0;
  CStr detail;
  REQUIRE(pepfo_seq_validate(s, &ok, &detail.p) == PEPFO_OK);
  CHECK(ok == 1);

  CStr json;
  REQUIRE(pepfo_seq_json(s, &json.p) == PEPFO_OK);
  CHECK(json.str().find("ogm_theta") != std::string::npos);

  // Custom sequences obey the same rules as the named ones.
  const double bad[2] = {1.0, 2.0};
  Seq c1;
  CHECK(pepfo_seq_make_custom(bad, 1, 0, c1.out()) == PEPFO_ERROR_RULE_VIOLATION);
  Seq c2;
  REQUIRE(pepfo_seq_make_custom(bad, 1, 1, c2.out()) == PEPFO_OK);
  CHECK(pepfo_seq_is_doubled(c2) == 1);

  Seq r1, r2;
  REQUIRE(pepfo_seq_make_random(9, 6, 0, r1.out()) == PEPFO_OK);
  REQUIRE(pepfo_seq_make_random(9, 6, 0, r2.out()) == PEPFO_OK);
  std::vector<double> a(7), b(7);
  REQUIRE(pepfo_seq_values(r1, a.data(), 7) == PEPFO_OK);
  REQUIRE(pepfo_seq_values(r2, b.data(), 7) == PEPFO_OK);
  CHECK(std::memcmp(a.data(), b.data(), 7 * sizeof(double)) == 0);

  Seq plain, doubled;
  REQUIRE(pepfo_seq_make("fgm-t", 4, 0.0, plain.out()) == PEPFO_OK);
  REQUIRE(pepfo_seq_as_doubled(plain, doubled.out()) == PEPFO_OK);
  CHECK(pepfo_seq_is_doubled(doubled) == 1);
  std::vector<double> pv(5), dv(5);
  REQUIRE(pepfo_seq_values(plain, pv.data(), 5) == PEPFO_OK);
  REQUIRE(pepfo_seq_values(doubled, dv.data(), 5) == PEPFO_OK);
  CHECK(std::memcmp(pv.data(), dv.data(), 5 * sizeof(double)) == 0);
}

TEST_CASE("step-matrix handles") {
  Steps h;
  REQUIRE(pepfo_steps_for_method("ogm", 1, 0.0, 1.0, nullptr, h.out()) == PEPFO_OK);
  CHECK(pepfo_steps_count(h) == 1);
  double e = 0.0;
  REQUIRE(pepfo_steps_entry(h, 1, 0, &e) == PEPFO_OK);
  CHECK(e == 1.5);
  CHECK(pepfo_steps_entry(h, 5, 0, &e) != PEPFO_OK);

  Steps gm;
  REQUIRE(pepfo_steps_make_gm(3, 1.0, gm.out()) == PEPFO_OK);
  REQUIRE(pepfo_steps_entry(gm, 2, 1, &e) == PEPFO_OK);
  CHECK(e == 1.0);
  REQUIRE(pepfo_steps_entry(gm, 2, 0, &e) == PEPFO_OK);
  CHECK(e == 0.0);

  Seq t;
  REQUIRE(pepfo_seq_make("fgm-t", 2, 0.0, t.out()) == PEPFO_OK);
  Steps hf;
  REQUIRE(pepfo_steps_make("fgm", t, hf.out()) == PEPFO_OK);
  REQUIRE(pepfo_steps_entry(hf, 2, 1, &e) == PEPFO_OK);
  CHECK(std::abs(e - 1.2817535251253208182) < 1e-15);
  CStr csv;
  REQUIRE(pepfo_steps_csv(hf, &csv.p) == PEPFO_OK);
  CHECK(csv.str().rfind("i,k,h\n", 0) == 0);

  Steps bad;
  CHECK(pepfo_steps_for_method("newton", 3, 0.0, 1.0, nullptr, bad.out()) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_steps_make("ogm", t, bad.out()) == PEPFO_ERROR_RULE_VIOLATION);
}

TEST_CASE("oracle handles") {
  Oracle f;
  REQUIRE(pepfo_oracle_make("psd-quadratic", 3, 6, 2.0, 1.0, 0, f.out()) == PEPFO_OK);
  CHECK(pepfo_oracle_dim(f) == 6);
  CHECK(pepfo_oracle_lipschitz(f) == 2.0);

  std::vector<double> xs(6), g(6);
  REQUIRE(pepfo_oracle_minimizer(f, xs.data(), 6) == PEPFO_OK);
  double fv = 0.0;
  REQUIRE(pepfo_oracle_value(f, xs.data(), 6, &fv) == PEPFO_OK);
  CHECK(std::abs(fv - pepfo_oracle_min_value(f)) < 1e-12);
  REQUIRE(pepfo_oracle_grad(f, xs.data(), 6, g.data()) == PEPFO_OK);
  CHECK(norm(g) < 1e-12);

  std::vector<double> x0(6), x0b(6);
  REQUIRE(pepfo_oracle_start_point(f, 5, 1.5, x0.data(), 6) == PEPFO_OK);
  REQUIRE(pepfo_oracle_start_point(f, 5, 1.5, x0b.data(), 6) == PEPFO_OK);
  CHECK(std::memcmp(x0.data(), x0b.data(), 6 * sizeof(double)) == 0);
  std::vector<double> diff(6);
  for (int i = 0; i < 6; ++i) diff[i] = x0[i] - xs[i];
  CHECK(std::abs(norm(diff) - 1.5) < 1e-12);

  Oracle lse;
  REQUIRE(pepfo_oracle_make("log-sum-exp", 7, 5, 0.0, 1.0, 0, lse.out()) == PEPFO_OK);
  CHECK(pepfo_oracle_lipschitz(lse) > 0.0);

  Oracle none;
  CHECK(pepfo_oracle_make("cubic", 1, 4, 1.0, 1.0, 0, none.out()) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_oracle_value(f, xs.data(), 5, &fv) == PEPFO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("runs through the C surface match the step-matrix path") {
  Oracle f;
  REQUIRE(pepfo_oracle_make("quadratic", 0, 4, 1.0, 1.0, 0, f.out()) == PEPFO_OK);
  std::vector<double> x0(4);
  REQUIRE(pepfo_oracle_start_point(f, 2, 1.0, x0.data(), 4) == PEPFO_OK);

  Trace named;
  REQUIRE(pepfo_run("gm", 6, -1, 0.0, 1.0, nullptr, f, x0.data(), 4, named.out()) == PEPFO_OK);
  Steps gm;
  REQUIRE(pepfo_steps_make_gm(6, 1.0, gm.out()) == PEPFO_OK);
  Trace generic;
  REQUIRE(pepfo_run_fo(gm, f, x0.data(), 4, generic.out()) == PEPFO_OK);

  CStr csv_a, csv_b;
  REQUIRE(pepfo_trace_csv(named, &csv_a.p) == PEPFO_OK);
  REQUIRE(pepfo_trace_csv(generic, &csv_b.p) == PEPFO_OK);
  CHECK(csv_a.str() == csv_b.str());

  CHECK(pepfo_trace_count(named) == 6);
  CHECK(pepfo_trace_dim(named) == 4);
  double first = 0.0, last = 0.0;
  REQUIRE(pepfo_trace_value(named, "f_x", 0, &first) == PEPFO_OK);
  REQUIRE(pepfo_trace_value(named, "f_x", 6, &last) == PEPFO_OK);
  CHECK(last < first);
  std::vector<double> xN(4);
  REQUIRE(pepfo_trace_point(named, "x", 6, xN.data(), 4) == PEPFO_OK);
  CHECK(pepfo_trace_value(named, "f_x", 7, &last) == PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_trace_value(named, "speed", 0, &last) == PEPFO_ERROR_INVALID_ARGUMENT);

  CStr json;
  REQUIRE(pepfo_trace_json(named, 1, &json.p) == PEPFO_OK);
  nlohmann::json j = nlohmann::json::parse(json.str());
  CHECK(j.contains("f_x"));

  // The post-step families expose the extra averaged point.
  Trace post;
  REQUIRE(pepfo_run("gogm1p", 4, -1, 0.0, 1.0, nullptr, f, x0.data(), 4, post.out()) == PEPFO_OK);
  double fpost = 0.0;
  REQUIRE(pepfo_trace_value(post, "f_y_post", 0, &fpost) == PEPFO_OK);
  CHECK(std::isfinite(fpost));
  std::vector<double> ypost(4);
  REQUIRE(pepfo_trace_point(post, "y_post", 0, ypost.data(), 4) == PEPFO_OK);

  Trace bad;
  CHECK(pepfo_run("no-method", 4, -1, 0.0, 1.0, nullptr, f, x0.data(), 4, bad.out()) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_run("gm", 0, -1, 0.0, 1.0, nullptr, f, x0.data(), 4, bad.out()) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_run("gm", 4, -1, 0.0, 1.0, nullptr, f, x0.data(), 3, bad.out()) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("certificate handles") {
  Seq th;
  REQUIRE(pepfo_seq_make("ogm-theta", 5, 0.0, th.out()) == PEPFO_OK);
  Cert c;
  REQUIRE(pepfo_cert_make("cost", th, c.out()) == PEPFO_OK);
  CHECK(std::string(pepfo_cert_construction(c)) == "cost");

  double bound = 0.0;
  REQUIRE(pepfo_cert_cost_bound(c, 1.0, 1.0, &bound) == PEPFO_OK);
  CHECK(std::abs(bound - 1.0 / 53.797753809045943877) < 1e-14);
  double scaled = 0.0;
  REQUIRE(pepfo_cert_cost_bound(c, 2.0, 3.0, &scaled) == PEPFO_OK);
  CHECK(std::abs(scaled - 18.0 * bound) < 1e-14);
  CHECK(pepfo_cert_grad_bound(c, 1.0, 1.0, &bound) == PEPFO_ERROR_NOT_AVAILABLE);

  pepfo_verify_report rep{};
  CStr detail;
  REQUIRE(pepfo_cert_verify(c, &rep, &detail.p) == PEPFO_OK);
  CHECK(rep.ok == 1);
  CHECK(rep.membership_ok == 1);
  CHECK(rep.psd_ok == 1);
  CHECK(rep.identity_checked == 1);
  CHECK(rep.identity_ok == 1);
  CHECK(rep.max_identity_gap <= 1e-10);
  CHECK(rep.min_eigenvalue >= -rep.psd_tolerance);

  Seq plain;
  REQUIRE(pepfo_seq_make("fgm-t", 5, 0.0, plain.out()) == PEPFO_OK);
  Cert refuse;
  CHECK(pepfo_cert_make("cost", plain, refuse.out()) == PEPFO_ERROR_RULE_VIOLATION);

  Seq og;
  REQUIRE(pepfo_seq_make("ogm-og", 4, 0.0, og.out()) == PEPFO_OK);
  Cert gc;
  REQUIRE(pepfo_cert_make("grad-slack", og, gc.out()) == PEPFO_OK);
  double gb = 0.0;
  REQUIRE(pepfo_cert_grad_bound(gc, 1.0, 1.0, &gb) == PEPFO_OK);
  CHECK(std::abs(gb - 1.0 / 6.7391696717769866651) < 1e-14);
  CHECK(pepfo_cert_cost_bound(gc, 1.0, 1.0, &gb) == PEPFO_ERROR_NOT_AVAILABLE);
}

TEST_CASE("bounds and tables through the C surface") {
  pepfo_bound_info info{};
  CStr formula, iterate;
  REQUIRE(pepfo_bound("gm", "cost-final-x", 10, 1.0, 1.0, -1, 0.0, nullptr, &info, &formula.p,
                      &iterate.p) == PEPFO_OK);
  CHECK(info.value == 1.0 / 42.0);
  CHECK(info.has_simplified == 0);
  CHECK(!formula.str().empty());
  CHECK(!iterate.str().empty());

  REQUIRE(pepfo_bound("ogm", "cost-final-x", 4, 1.0, 1.0, -1, 0.0, nullptr, &info, nullptr,
                      nullptr) == PEPFO_OK);
  CHECK(info.has_simplified == 1);
  CHECK(info.simplified >= info.value);

  CHECK(pepfo_bound("ogm-m", "cost-final-x", 9, 1.0, 1.0, -1, 0.0, nullptr, &info, nullptr,
                    nullptr) == PEPFO_ERROR_NOT_AVAILABLE);
  CHECK(pepfo_bound("gogm", "cost-final-x", 9, 1.0, 1.0, -1, 0.0, nullptr, &info, nullptr,
                    nullptr) == PEPFO_ERROR_RULE_VIOLATION);
  CHECK(pepfo_bound("newton", "cost-final-x", 9, 1.0, 1.0, -1, 0.0, nullptr, &info, nullptr,
                    nullptr) == PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_bound("gm", "speed", 9, 1.0, 1.0, -1, 0.0, nullptr, &info, nullptr, nullptr) ==
        PEPFO_ERROR_INVALID_ARGUMENT);

  const int ns[2] = {1, 2};
  CStr csv;
  REQUIRE(pepfo_table(2, ns, 2, 1.0, 1.0, "csv", &csv.p) == PEPFO_OK);
  CHECK(csv.str().rfind("# ", 0) == 0);
  CHECK(csv.str().find("\n2,10,") != std::string::npos);

  CStr full;
  REQUIRE(pepfo_table(2, nullptr, 0, 1.0, 1.0, "csv", &full.p) == PEPFO_OK);
  std::string text = full.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);  // title + header + 9 rows

  CStr json;
  REQUIRE(pepfo_table(1, nullptr, 0, 1.0, 1.0, "json", &json.p) == PEPFO_OK);
  nlohmann::json j = nlohmann::json::parse(json.str());
  CHECK(j["rows"].size() == 7);

  CStr none;
  CHECK(pepfo_table(7, nullptr, 0, 1.0, 1.0, "csv", &none.p) == PEPFO_ERROR_INVALID_ARGUMENT);
  CHECK(pepfo_table(2, nullptr, 0, 1.0, 1.0, "yaml", &none.p) == PEPFO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("worst-case replays through the C surface") {
  pepfo_worstcase_report rep{};
  Trace tr;
  REQUIRE(pepfo_worstcase("ogm-quadratic", 4, 1.0, 1.0, 2, 17, &rep, tr.out()) == PEPFO_OK);
  CHECK(rep.ok == 1);
  CHECK(std::abs(rep.expected_final_grad - 1.0 / 4.4208041048237526038) < 1e-14);
  CHECK(pepfo_trace_count(tr) == 4);

  pepfo_worstcase_report huber{};
  REQUIRE(pepfo_worstcase("gm-huber", 3, 1.0, 1.0, 2, 17, &huber, nullptr) == PEPFO_OK);
  CHECK(huber.ok == 1);
  CHECK(huber.expected_final_grad == 0.25);

  CHECK(pepfo_worstcase("nothing", 3, 1.0, 1.0, 2, 17, &rep, nullptr) ==
        PEPFO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("SDP export through the C surface") {
  Steps h;
  REQUIRE(pepfo_steps_for_method("ogm-og", 3, 0.0, 1.0, nullptr, h.out()) == PEPFO_OK);

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pepfo_capi_export";
  fs::create_directories(dir);
  fs::path path = dir / "model.dat-s";
  REQUIRE(pepfo_export_sdpa("ddprime", h, path.string().c_str()) == PEPFO_OK);
  CHECK(fs::file_size(path) > 0);

  std::ifstream side(path.string() + ".json");
  REQUIRE(side.good());
  nlohmann::json j = nlohmann::json::parse(side);
  CHECK(j["kind"] == "ddprime");
  CHECK(j["N"] == 3);

  CHECK(pepfo_export_sdpa("ddprime", h, "/nonexistent-dir/x.dat-s") == PEPFO_ERROR_IO);
  CHECK(pepfo_export_sdpa("dd", h, path.string().c_str()) == PEPFO_ERROR_INVALID_ARGUMENT);
  fs::remove_all(dir);
}

TEST_CASE("null handles degrade gracefully") {
  CHECK(pepfo_seq_count(nullptr) == 0);
  CHECK(std::string(pepfo_seq_kind(nullptr)).empty());
  CHECK(pepfo_seq_is_doubled(nullptr) == 0);
  CHECK(pepfo_steps_count(nullptr) == 0);
  CHECK(pepfo_trace_count(nullptr) == 0);
  CHECK(pepfo_oracle_dim(nullptr) == 0);
  CHECK(std::string(pepfo_cert_construction(nullptr)).empty());
  pepfo_seq_free(nullptr);
  pepfo_steps_free(nullptr);
  pepfo_oracle_free(nullptr);
  pepfo_trace_free(nullptr);
  pepfo_cert_free(nullptr);
}
