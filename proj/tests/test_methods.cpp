// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "common.hpp"
#include "methods.hpp"
#include "oracles.hpp"
#include "params.hpp"
#include "steps.hpp"

using namespace pepfo;

namespace {

MethodSpec ms(Family fam, int N) {
  MethodSpec s;
  s.family = fam;
  s.N = N;
  return s;
}

FunctionOracle seeded_quadratic(std::uint64_t seed, int d, double L = 1.0) {
  return make_random_psd_quadratic(seed, d, L);
}

Eigen::VectorXd start_at(const FunctionOracle& f, std::uint64_t seed, double R) {
  Rng rng(seed + 999);
  return *f.minimizer + R * rng.unit_vector(f.d);
}

FunctionOracle counted(FunctionOracle base, int* grad_calls) {
  auto inner = base.grad;
  base.grad = [inner, grad_calls](const Eigen::VectorXd& x) {
    ++*grad_calls;
    return inner(x);
  };
  return base;
}

}  // namespace

TEST_CASE("primary sequence is the plain gradient step from the last iterate") {
  FunctionOracle f = seeded_quadratic(3, 7);
  Eigen::VectorXd x0 = start_at(f, 3, 1.0);
  for (Family fam : {Family::Gm, Family::Ogm1, Family::Fgm2, Family::OgmOg}) {
    MethodSpec spec = ms(fam, 8);
    IterateTrace t = run(spec, f, x0);
    REQUIRE(t.N == 8);
    CHECK((t.y[0] - t.x[0]).norm() == 0.0);
    for (int i = 0; i < t.N; ++i) {
      Eigen::VectorXd expect = t.x[i] - t.grad_x[i] / t.L;
      CHECK((t.y[i + 1] - expect).norm() == 0.0);
    }
    Eigen::VectorXd post = t.x[t.N] - t.grad_x[t.N] / t.L;
    CHECK((t.y_post - post).norm() == 0.0);
  }
}

TEST_CASE("gradient steps never increase the gradient norm (up to tolerance)") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    FunctionOracle f = seeded_quadratic(seed, 9, 2.0);
    Eigen::VectorXd x0 = start_at(f, seed, 1.5);
    for (Family fam : {Family::Gm, Family::Fgm1, Family::Ogm1, Family::OgmOg, Family::OgmA}) {
      MethodSpec spec = ms(fam, 10);
      spec.a = 4.0;
      IterateTrace t = run(spec, f, x0);
      for (int i = 0; i < t.N; ++i) {
        CHECK(t.grad_norm_y(i + 1) <= t.grad_norm_x(i) + 1e-9 * f.L * 1.5);
      }
    }
  }
}

TEST_CASE("plain gradient descent decreases cost monotonically") {
  FunctionOracle f = seeded_quadratic(11, 8, 1.0);
  Eigen::VectorXd x0 = start_at(f, 11, 2.0);
  IterateTrace t = run(ms(Family::Gm, 20), f, x0);
  for (int i = 0; i < t.N; ++i) {
    CHECK(t.f_x[i + 1] <= t.f_x[i] + 1e-12 * f.L * 4.0);
  }
}

TEST_CASE("paired forms produce the same iterates") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    FunctionOracle f = seeded_quadratic(seed, 12);
    Eigen::VectorXd x0 = start_at(f, seed, 1.0);
    const int N = 20;

    CHECK(check_equivalence(ms(Family::Fgm1, N), ms(Family::Fgm2, N), f, x0)
              .max_rel_deviation <= 1e-9);
    CHECK(check_equivalence(ms(Family::Ogm1, N), ms(Family::Ogm2, N), f, x0)
              .max_rel_deviation <= 1e-9);

    MethodSpec fo = ms(Family::FoGeneric, N);
    fo.h = h_ogm(make_ogm_theta(N));
    CHECK(check_equivalence(ms(Family::Ogm1, N), fo, f, x0).max_rel_deviation <= 1e-9);

    ParamSeq doubled = make_random_valid(seed, N, true);
    MethodSpec g1 = ms(Family::Gogm1, N), g2 = ms(Family::Gogm2, N);
    g1.params = doubled;
    g2.params = doubled;
    CHECK(check_equivalence(g1, g2, f, x0).max_rel_deviation <= 1e-9);
    MethodSpec gfo = ms(Family::FoGeneric, N);
    gfo.h = h_gogm(doubled);
    CHECK(check_equivalence(g1, gfo, f, x0).max_rel_deviation <= 1e-9);
    gfo.h = h_gogm_recursive(doubled);
    CHECK(check_equivalence(g1, gfo, f, x0).max_rel_deviation <= 1e-9);

    ParamSeq plain = make_random_valid(seed, N, false);
    MethodSpec p1 = ms(Family::Gogm1Prime, N), p2 = ms(Family::Gogm2Prime, N);
    p1.params = plain;
    p2.params = plain;
    CHECK(check_equivalence(p1, p2, f, x0).max_rel_deviation <= 1e-9);
    MethodSpec pfo = ms(Family::FoGeneric, N);
    pfo.h = h_gogm_prime(plain);
    CHECK(check_equivalence(p1, pfo, f, x0).max_rel_deviation <= 1e-9);
  }
}

TEST_CASE("averaging forms carry their running average") {
  FunctionOracle f = seeded_quadratic(5, 6);
  Eigen::VectorXd x0 = start_at(f, 5, 1.0);
  IterateTrace avg = run(ms(Family::Fgm2, 6), f, x0);
  CHECK(static_cast<int>(avg.z.size()) == 7);
  IterateTrace direct = run(ms(Family::Fgm1, 6), f, x0);
  CHECK(direct.z.empty());
}

TEST_CASE("switched method: momentum prefix, plain tail") {
  FunctionOracle f = seeded_quadratic(7, 10);
  Eigen::VectorXd x0 = start_at(f, 7, 1.0);
  const int N = 12, m = 5;

  MethodSpec sw = ms(Family::OgmM, N);
  sw.m = m;
  IterateTrace t = run(sw, f, x0);

  // Iterates through the switch match the momentum method run to horizon m.
  IterateTrace head = run(ms(Family::Ogm1, m), f, x0);
  for (int i = 0; i <= m; ++i) CHECK((t.x[i] - head.x[i]).norm() == 0.0);

  // Past the switch every iterate is the plain gradient step.
  for (int i = m + 1; i <= N; ++i) CHECK((t.x[i] - t.y[i]).norm() == 0.0);

  // Default switch point is floor(2N/3).
  MethodSpec def = ms(Family::OgmM, N);
  MethodSpec expl = ms(Family::OgmM, N);
  expl.m = (2 * N) / 3;
  IterateTrace td = run(def, f, x0);
  IterateTrace te = run(expl, f, x0);
  CHECK((td.x[N] - te.x[N]).norm() == 0.0);

  MethodSpec bad = ms(Family::OgmM, 6);
  bad.m = 0;
  CHECK_THROWS_AS(run(bad, f, x0), RuleViolation);
  bad.m = 6;
  CHECK_THROWS_AS(run(bad, f, x0), RuleViolation);
}

TEST_CASE("each distinct point costs one gradient evaluation") {
  int calls = 0;
  FunctionOracle f = counted(seeded_quadratic(9, 6), &calls);
  Eigen::VectorXd x0 = start_at(f, 9, 1.0);
  const int N = 10;

  calls = 0;
  run(ms(Family::Gm, N), f, x0);
  CHECK(calls == N + 2);  // x_0, y_1..y_N (= x_1..x_N), y_post

  calls = 0;
  run(ms(Family::Ogm1, N), f, x0);
  CHECK(calls == 2 * N + 2);

  MethodSpec sw = ms(Family::OgmM, N);
  sw.m = 4;
  calls = 0;
  run(sw, f, x0);
  CHECK(calls == N + 4 + 2);
}

TEST_CASE("runs validate their inputs") {
  FunctionOracle f = seeded_quadratic(2, 5);
  Eigen::VectorXd x0 = start_at(f, 2, 1.0);

  CHECK_THROWS_AS(run(ms(Family::Gm, 0), f, x0), std::invalid_argument);
  CHECK_THROWS_AS(run(ms(Family::Ogm1, 3), f, Eigen::VectorXd::Zero(4)), std::invalid_argument);

  // Sequence override must match the horizon and the rule.
  MethodSpec spec = ms(Family::Ogm1, 5);
  spec.params = make_ogm_theta(4);
  CHECK_THROWS_AS(run(spec, f, x0), RuleViolation);
  spec.params = make_fgm_t(5);  // plain rule where doubled is required
  CHECK_THROWS_AS(run(spec, f, x0), RuleViolation);

  MethodSpec fo = ms(Family::FoGeneric, 5);
  CHECK_THROWS_AS(run(fo, f, x0), std::invalid_argument);

  FunctionOracle broken = f;
  broken.grad = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(x.size(), std::nan(""));
  };
  try {
    run(ms(Family::Gm, 3), broken, x0);
    FAIL("expected a non-finite oracle error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("equivalence report locates the largest deviation") {
  FunctionOracle f = seeded_quadratic(4, 6);
  Eigen::VectorXd x0 = start_at(f, 4, 1.0);
  EquivReport rep = check_equivalence(ms(Family::Gm, 5), ms(Family::Ogm1, 5), f, x0);
  CHECK(rep.max_rel_deviation > 1e-3);  // genuinely different methods
  CHECK(rep.argmax_index >= 0);
  CHECK(rep.argmax_index <= 5);
}

TEST_CASE("method names round trip") {
  for (Family fam : {Family::Gm, Family::Fgm1, Family::Fgm2, Family::Ogm1, Family::Ogm2,
                     Family::Gogm1, Family::Gogm2, Family::Gogm1Prime, Family::Gogm2Prime,
                     Family::OgmM, Family::OgmOg, Family::OgmA, Family::FoGeneric}) {
    auto back = family_from_string(to_string(fam));
    REQUIRE(back.has_value());
    CHECK(*back == fam);
  }
  CHECK(family_from_string("fgm") == Family::Fgm1);
  CHECK(family_from_string("ogm") == Family::Ogm1);
  CHECK_FALSE(family_from_string("nope").has_value());
}
