// SPDX-License-Identifier: MIT
#include <cstdlib>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "common.hpp"
#include "tables.hpp"

using namespace pepfo;

namespace {

int col(const Table& t, const std::string& name) {
  for (size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == name) return static_cast<int>(c);
  }
  FAIL("missing column " << name);
  return -1;
}

double cell(const Table& t, int row, const std::string& name) {
  const TableCell& c = t.rows[row][col(t, name)];
  return std::strtod(c.text.c_str(), nullptr);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("reciprocal cost table: analytic columns and the quadratic replay") {
  Table t = make_table(2, {1, 2, 4});
  REQUIRE(t.rows.size() == 3);
  REQUIRE(t.header[0] == "N");

  // Gradient descent: 4N+2, exact text.
  CHECK(t.rows[0][col(t, "gm")].text == "6");
  CHECK(t.rows[1][col(t, "gm")].text == "10");
  CHECK(t.rows[2][col(t, "gm")].text == "18");
  CHECK(t.rows[0][col(t, "gm")].tag == CellTag::Analytic);
  CHECK(t.rows[0][col(t, "N")].tag == CellTag::Label);

  // Momentum with the doubled final step: 2 theta_N^2.
  const double expect[3] = {8.0, 16.156607313648189893, 39.0870178664530812};
  for (int r = 0; r < 3; ++r) {
    CHECK(rel_gap(cell(t, r, "ogm"), expect[r]) < 1e-12);
    CHECK(rel_gap(cell(t, r, "ogm_measured"), expect[r]) < 1e-9);
    CHECK(t.rows[r][col(t, "ogm_measured")].tag == CellTag::Measured);
    // Columns whose reference values need an SDP solve are left external.
    for (const char* name : {"fgm", "ogm-m", "ogm-og", "ogm-a=4"}) {
      CHECK(t.rows[r][col(t, name)].text == "external");
      CHECK(t.rows[r][col(t, name)].tag == CellTag::External);
    }
  }
}

TEST_CASE("reciprocal smallest-gradient table") {
  Table t = make_table(3, {2});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][col(t, "gm")].text == "3");
  CHECK(rel_gap(cell(t, 0, "ogm"), 2.8422356793243052501) < 1e-12);
  CHECK(rel_gap(cell(t, 0, "gm_measured"), 3.0) < 1e-9);
  CHECK(rel_gap(cell(t, 0, "ogm_measured"), 2.8422356793243052501) < 1e-9);
}

TEST_CASE("reciprocal final-gradient table") {
  Table t = make_table(4, {2, 4});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][col(t, "gm")].text == "3");
  CHECK(t.rows[1][col(t, "gm")].text == "5");
  CHECK(rel_gap(cell(t, 0, "ogm_x"), 2.8422356793243052501) < 1e-12);
  CHECK(rel_gap(cell(t, 1, "ogm_x"), 4.4208041048237526038) < 1e-12);
  CHECK(rel_gap(cell(t, 0, "gm_measured"), 3.0) < 1e-9);
  CHECK(rel_gap(cell(t, 1, "ogm_x_measured"), 4.4208041048237526038) < 1e-9);
  for (const char* name : {"fgm_y", "fgm_x", "ogm_y", "ogm-m", "ogm-og", "ogm-a=4_y",
                           "ogm-a=4_x"}) {
    CHECK(t.rows[0][col(t, name)].tag == CellTag::External);
  }
}

TEST_CASE("asymptotic table lists every method plus the general arithmetic family") {
  Table t = make_table(1, {});
  REQUIRE(t.rows.size() == 7);
  REQUIRE(t.header.size() == 4);
  const char* names[7] = {"gm",     "fgm",          "ogm",         "ogm-m",
                          "ogm-og", "ogm-a (a=4)",  "ogm-a (a>2)"};
  for (int r = 0; r < 7; ++r) CHECK(t.rows[r][0].text == names[r]);
  CHECK(t.rows[0][1].text == "0.25*N^-1");
  CHECK(t.rows[2][1].text == "1*N^-2");
  CHECK(t.rows[3][3].text == "yes");
  CHECK(t.rows[5][3].text == "no");
  CHECK(t.rows[6][1].text == "a/2*N^-2");
  CHECK(t.rows[6][1].tag == CellTag::Analytic);
}

TEST_CASE("table index is validated") {
  CHECK_THROWS_AS((void)make_table(0, {1}), std::invalid_argument);
  CHECK_THROWS_AS((void)make_table(5, {1}), std::invalid_argument);
}

TEST_CASE("csv and json renderings are stable and well formed") {
  Table t = make_table(2, {1, 2});
  std::string csv = table_to_csv(t);
  CHECK(csv.rfind("# ", 0) == 0);
  CHECK(csv.find("\nN,gm,fgm,ogm,ogm-m,ogm-og,ogm-a=4,ogm_measured\n") != std::string::npos);
  CHECK(csv.find("\n2,10,") != std::string::npos);
  CHECK(csv == table_to_csv(make_table(2, {1, 2})));

  nlohmann::json j = nlohmann::json::parse(table_to_json(t));
  CHECK(j["title"].is_string());
  REQUIRE(j["header"].size() == t.header.size());
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0][0]["tag"] == "label");
  CHECK(j["rows"][0][1]["tag"] == "analytic");
  CHECK(j["rows"][0][2]["tag"] == "external");
  CHECK(j["rows"][0][1]["text"] == "6");
}

TEST_CASE("momentum worst case: alternating quadratic trajectory") {
  for (int N : {1, 5}) {
    WorstCaseReport rep = worstcase_ogm_quadratic(N, 1.0, 1.0, 2, 17);
    CHECK(rep.ok);
    CHECK(rep.max_rel_gap <= 1e-9);
    REQUIRE(rep.trace.x.size() == static_cast<size_t>(N + 1));
  }
  WorstCaseReport rep = worstcase_ogm_quadratic(5, 2.0, 0.5, 3, 4);
  CHECK(rep.ok);
  CHECK(rel_gap(rep.expected_final_grad, 2.0 * 0.5 / 5.1864127202260882102) < 1e-12);
}

TEST_CASE("gradient-descent worst case: constant-gradient ray walk") {
  WorstCaseReport rep = worstcase_gm_huber(7, 1.0, 1.0, 2, 17);
  CHECK(rep.ok);
  CHECK(rep.expected_final_grad == 1.0 / 8.0);
  WorstCaseReport scaled = worstcase_gm_huber(4, 3.0, 2.0, 5, 11);
  CHECK(scaled.ok);
  CHECK(scaled.expected_final_grad == 6.0 / 5.0);
}
