// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "params.hpp"
#include "pep.hpp"
#include "sdpa.hpp"
#include "steps.hpp"

using namespace pepfo;

namespace {

double coeff(const SdpaModel& m, int mat, int blk, int i, int j) {
  for (const SdpaEntry& e : m.entries) {
    if (e.mat == mat && e.blk == blk && e.i == i && e.j == j) return e.value;
  }
  return 0.0;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("smallest cost dual has the documented shape") {
  SdpaExport ex = build_dual_sdp(PepKind::D, h_gm(1));
  const SdpaModel& m = ex.model;

  // Variables: lambda_1, tau_0, tau_1, gamma; LMI block of order 3.
  CHECK(m.m == 4);
  REQUIRE(static_cast<int>(m.block_sizes.size()) == 2);
  CHECK(m.block_sizes[0] == 3);
  CHECK(m.block_sizes[1] == -7);  // 3 sign slots + 2 equalities as 2 pairs
  REQUIRE(static_cast<int>(ex.variable_names.size()) == 4);
  CHECK(ex.variable_names[0] == "lambda_1");
  CHECK(ex.variable_names[3] == "gamma");

  // Objective: only gamma, with weight 1/2.
  CHECK(m.c[0] == 0.0);
  CHECK(m.c[3] == 0.5);

  // lambda_1 enters the LMI through A_{0,1} = diag(1/2, 1/2).
  CHECK(coeff(m, 1, 1, 1, 1) == 0.5);
  CHECK(coeff(m, 1, 1, 2, 2) == 0.5);
  CHECK(coeff(m, 1, 1, 1, 2) == 0.0);
  // tau_0: D_0 plus the border slot (1, N+2).
  CHECK(coeff(m, 2, 1, 1, 1) == 0.5);
  CHECK(coeff(m, 2, 1, 1, 3) == 0.5);
  // tau_1: D_1 plus the border slot (2, N+2).
  CHECK(coeff(m, 3, 1, 1, 2) == 0.5);
  CHECK(coeff(m, 3, 1, 2, 2) == 0.5);
  CHECK(coeff(m, 3, 1, 2, 3) == 0.5);
  // gamma sits in the corner.
  CHECK(coeff(m, 4, 1, 3, 3) == 0.5);

  // The normalization lambda_N + tau_N = 1 appears as a +/- pair with
  // matching right-hand sides in F_0.
  CHECK(coeff(m, 0, 2, 6, 6) == 1.0);
  CHECK(coeff(m, 0, 2, 7, 7) == -1.0);
  CHECK(coeff(m, 1, 2, 6, 6) == 1.0);
  CHECK(coeff(m, 3, 2, 6, 6) == 1.0);
  CHECK(coeff(m, 1, 2, 7, 7) == -1.0);
}

TEST_CASE("squared-gradient dual adds eta and the beta weights") {
  SdpaExport ex = build_dual_sdp(PepKind::DDoublePrime, h_gogm_prime(make_ogm_og(2)));
  // Variables: lambda_1..2, tau_0..2, eta, beta_0..2, gamma.
  CHECK(ex.model.m == 3 * 2 + 4);
  CHECK(ex.variable_names[5] == "eta");
  CHECK(ex.variable_names.back() == "gamma");
  // eta lands on the (N+1, N+1) diagonal slot of the LMI.
  CHECK(coeff(ex.model, 6, 1, 3, 3) == 0.5);
  // beta_0 subtracts from the (1,1) slot.
  CHECK(coeff(ex.model, 7, 1, 1, 1) == -1.0);
  CHECK(ex.model.block_sizes[1] == -(5 * 2 + 7));
}

TEST_CASE("text round trip preserves every coefficient") {
  for (PepKind kind : {PepKind::D, PepKind::DPrime, PepKind::DDoublePrime}) {
    for (const StepMatrix& h : {h_gm(3), h_gogm_prime(make_ogm_og(5))}) {
      SdpaExport ex = build_dual_sdp(kind, h);
      std::string text = render_sdpa(ex.model, "round trip");
      SdpaModel back = parse_sdpa_text(text);
      std::string why;
      CHECK_MESSAGE(models_identical(ex.model, back, &why), why);

      // Render is deterministic.
      CHECK(render_sdpa(ex.model, "round trip") == text);
    }
  }
}

TEST_CASE("certificates satisfy the exported constraints") {
  struct Case {
    PepKind kind;
    DualCertificate cert;
    StepMatrix h;
  };
  std::vector<Case> cases;
  cases.push_back({PepKind::D, cert_gogm_cost(make_ogm_theta(5)), h_gogm(make_ogm_theta(5))});
  cases.push_back(
      {PepKind::DPrime, cert_gogm_cost_post(make_fgm_t(4)), h_gogm_prime(make_fgm_t(4))});
  cases.push_back(
      {PepKind::DDoublePrime, cert_fgm_grad(make_fgm_t(4)), h_fgm(make_fgm_t(4))});
  cases.push_back(
      {PepKind::DDoublePrime, cert_gogm_grad(make_ogm_og(5)), h_gogm_prime(make_ogm_og(5))});

  for (const Case& c : cases) {
    SdpaExport ex = build_dual_sdp(c.kind, c.h);
    Eigen::VectorXd x = certificate_assignment(ex, c.cert);
    REQUIRE(x.size() == ex.model.m);
    AssignmentCheck chk = check_assignment(ex.model, x, 1e-9);
    INFO("detail: " << chk.detail);
    CHECK(chk.ok);

    // The optimal value of the assignment reproduces the certificate bound.
    double obj = 0.0;
    for (int v = 0; v < ex.model.m; ++v) obj += ex.model.c[v] * x[v];
    if (c.kind == PepKind::DDoublePrime) {
      CHECK(std::sqrt(obj) == doctest::Approx(c.cert.grad_bound(1.0, 1.0)).epsilon(1e-12));
    } else {
      CHECK(obj == doctest::Approx(c.cert.cost_bound(1.0, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("assignment checking flags infeasible points") {
  SdpaExport ex = build_dual_sdp(PepKind::D, h_gogm(make_ogm_theta(3)));
  Eigen::VectorXd x = certificate_assignment(ex, cert_gogm_cost(make_ogm_theta(3)));
  x[0] += 0.5;  // breaks the equality pair for tau_0 = lambda_1
  CHECK_FALSE(check_assignment(ex.model, x, 1e-9).ok);
}

TEST_CASE("file export writes the model and its sidecar") {
  StepMatrix h = h_gogm_prime(make_ogm_og(3));
  std::string path = "sdpa_test_out.dat-s";
  export_sdpa(PepKind::DDoublePrime, h, path);

  SdpaModel disk = parse_sdpa_file(path);
  SdpaExport ex = build_dual_sdp(PepKind::DDoublePrime, h);
  std::string why;
  CHECK_MESSAGE(models_identical(ex.model, disk, &why), why);

  nlohmann::json side = nlohmann::json::parse(slurp(path + ".json"));
  CHECK(side["kind"] == "ddprime");
  CHECK(side["N"] == 3);
  CHECK(side["variables"].size() == ex.variable_names.size());

  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS(parse_sdpa_text("not an sdpa file"));
  CHECK_THROWS(parse_sdpa_text("2\n1\n3\n0.5 0.5\n1 1 4 4 1.0\n"));  // index out of range
  CHECK_THROWS(parse_sdpa_file("no_such_file.dat-s"));
}

TEST_CASE("model comparison pinpoints differences") {
  SdpaExport ex = build_dual_sdp(PepKind::D, h_gm(2));
  SdpaModel other = ex.model;
  other.entries[0].value += 1e-3;
  std::string why;
  CHECK_FALSE(models_identical(ex.model, other, &why));
  CHECK_FALSE(why.empty());
}
