// SPDX-License-Identifier: MIT
#include "tables.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "bounds.hpp"
#include "common.hpp"
#include "oracles.hpp"
#include "trace_io.hpp"

namespace pepfo {

const char* to_string(CellTag t) {
  switch (t) {
    case CellTag::Label: return "label";
    case CellTag::Analytic: return "analytic";
    case CellTag::Measured: return "measured";
    case CellTag::External: return "external";
  }
  return "?";
}

namespace {

TableCell num(double v, CellTag tag) { return {format_double(v), tag}; }
TableCell ext() { return {"external", CellTag::External}; }
TableCell label(std::string s) { return {std::move(s), CellTag::Label}; }

double recip(double bound_value, double scale) { return scale / bound_value; }

Table table_asymptotic() {
  Table t;
  t.title =
      "asymptotic worst-case bounds: cost as multiples of L*R^2, gradient as multiples of L*R; "
      "constants checked against the exact bounds at N = 10^4";
  t.header = {"algorithm", "cost", "gradient", "requires_N"};
  std::vector<AsymptoticRow> rows = asymptotic_table(4.0);
  auto fmt_rate = [](double c, double p) { return fmt::format("{:g}*N^{:g}", c, p); };
  for (const AsymptoticRow& r : rows) {
    std::string name = r.label == "ogm-a=4" ? "ogm-a (a=4)" : r.label;
    t.rows.push_back({label(name),
                      {fmt_rate(r.cost_constant, r.cost_power), CellTag::Analytic},
                      {fmt_rate(r.grad_constant, r.grad_power), CellTag::Analytic},
                      label(r.requires_N ? "yes" : "no")});
  }
  t.rows.push_back({label("ogm-a (a>2)"),
                    {"a/2*N^-2", CellTag::Analytic},
                    {"a*sqrt(6)/(2*sqrt(a-2))*N^-1.5", CellTag::Analytic},
                    label("no")});
  return t;
}

Table table_cost(const std::vector<int>& Ns, double L, double R) {
  Table t;
  t.title = "reciprocal worst-case cost L*R^2/(f(x_N)-f(x*)); measured column replays the "
            "momentum method on its worst-case quadratic";
  t.header = {"N", "gm", "fgm", "ogm", "ogm-m", "ogm-og", "ogm-a=4", "ogm_measured"};
  const double LR2 = L * R * R;
  for (int N : Ns) {
    BoundQuery q{N, L, R, -1, 4.0, nullptr};
    double gm = recip(bound(BoundMethod::Gm, Metric::CostFinalX, q).value, LR2);
    double ogm = recip(bound(BoundMethod::Ogm, Metric::CostFinalX, q).value, LR2);
    WorstCaseReport wc = worstcase_ogm_quadratic(N, L, R, 2, 17);
    double measured = LR2 / wc.trace.f_x[N];
    t.rows.push_back({label(std::to_string(N)), num(gm, CellTag::Analytic), ext(),
                      num(ogm, CellTag::Analytic), ext(), ext(), ext(),
                      num(measured, CellTag::Measured)});
  }
  return t;
}

Table table_smallest_grad(const std::vector<int>& Ns, double L, double R) {
  Table t;
  t.title = "reciprocal worst-case smallest gradient L*R/min_i ||grad f(x_i)||; measured "
            "columns replay the known worst-case functions";
  t.header = {"N",      "gm",      "fgm",         "ogm",          "ogm-m",
              "ogm-og", "ogm-a=4", "gm_measured", "ogm_measured"};
  const double LR = L * R;
  for (int N : Ns) {
    BoundQuery q{N, L, R, -1, 4.0, nullptr};
    double gm = recip(bound(BoundMethod::Gm, Metric::LowerBound, q).value, LR);
    double ogm = recip(bound(BoundMethod::Ogm, Metric::GradSmallest, q).value, LR);
    WorstCaseReport huber = worstcase_gm_huber(N, L, R, 2, 17);
    WorstCaseReport quad = worstcase_ogm_quadratic(N, L, R, 2, 17);
    t.rows.push_back({label(std::to_string(N)), num(gm, CellTag::Analytic), ext(),
                      num(ogm, CellTag::Analytic), ext(), ext(), ext(),
                      num(LR / huber.trace.min_grad_norm_x(), CellTag::Measured),
                      num(LR / quad.trace.min_grad_norm_x(), CellTag::Measured)});
  }
  return t;
}

Table table_final_grad(const std::vector<int>& Ns, double L, double R) {
  Table t;
  t.title = "reciprocal worst-case final gradient L*R/||grad f(x_N)|| (and at y_N where the "
            "methods distinguish the two)";
  t.header = {"N",      "gm",     "fgm_y",   "fgm_x",       "ogm_y",
              "ogm_x",  "ogm-m",  "ogm-og",  "ogm-a=4_y",   "ogm-a=4_x",
              "gm_measured", "ogm_x_measured"};
  const double LR = L * R;
  for (int N : Ns) {
    BoundQuery q{N, L, R, -1, 4.0, nullptr};
    double gm = recip(bound(BoundMethod::Gm, Metric::LowerBound, q).value, LR);
    double ogm = recip(bound(BoundMethod::Ogm, Metric::GradFinal, q).value, LR);
    WorstCaseReport huber = worstcase_gm_huber(N, L, R, 2, 17);
    WorstCaseReport quad = worstcase_ogm_quadratic(N, L, R, 2, 17);
    t.rows.push_back({label(std::to_string(N)), num(gm, CellTag::Analytic), ext(), ext(), ext(),
                      num(ogm, CellTag::Analytic), ext(), ext(), ext(), ext(),
                      num(LR / huber.trace.grad_norm_x(N), CellTag::Measured),
                      num(LR / quad.trace.grad_norm_x(N), CellTag::Measured)});
  }
  return t;
}

}  // namespace

Table make_table(int which, const std::vector<int>& Ns, double L, double R) {
  switch (which) {
    case 1: return table_asymptotic();
    case 2: return table_cost(Ns, L, R);
    case 3: return table_smallest_grad(Ns, L, R);
    case 4: return table_final_grad(Ns, L, R);
    default: throw std::invalid_argument("table index must be 1, 2, 3, or 4");
  }
}

std::string table_to_csv(const Table& t) {
  std::string out = "# " + t.title + "\n";
  for (size_t c = 0; c < t.header.size(); ++c) {
    if (c) out += ',';
    out += t.header[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c].text;
    }
    out += '\n';
  }
  return out;
}

std::string table_to_json(const Table& t) {
  nlohmann::json j;
  j["title"] = t.title;
  j["header"] = t.header;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const TableCell& cell : row) {
      r.push_back({{"text", cell.text}, {"tag", to_string(cell.tag)}});
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

WorstCaseReport worstcase_ogm_quadratic(int N, double L, double R, int d, uint64_t seed) {
  FunctionOracle phi = make_quadratic_phi(L, d);
  Rng rng(seed);
  Eigen::VectorXd nu = rng.unit_vector(d);
  Eigen::VectorXd x0 = R * nu;

  MethodSpec spec;
  spec.family = Family::Ogm1;
  spec.N = N;
  IterateTrace tr = run(spec, phi, x0);

  ParamSeq th = make_ogm_theta(N);
  WorstCaseReport rep;
  rep.expected_final_grad = L * R / th.values[N];
  double worst = 0.0;
  for (int i = 0; i <= N; ++i) {
    Eigen::VectorXd expected = (i % 2 == 0 ? 1.0 : -1.0) * (R / th.values[i]) * nu;
    worst = std::max(worst, (tr.x[i] - expected).norm() / std::max(1.0, expected.norm()));
  }
  worst = std::max(worst, std::abs(tr.grad_norm_x(N) - rep.expected_final_grad) /
                              rep.expected_final_grad);
  rep.max_rel_gap = worst;
  rep.ok = worst <= 1e-9;
  rep.trace = std::move(tr);
  return rep;
}

WorstCaseReport worstcase_gm_huber(int N, double L, double R, int d, uint64_t seed) {
  FunctionOracle psi = make_huber_psi(L, R, N, d);
  Rng rng(seed);
  Eigen::VectorXd nu = rng.unit_vector(d);
  Eigen::VectorXd x0 = R * nu;

  MethodSpec spec;
  spec.family = Family::Gm;
  spec.N = N;
  IterateTrace tr = run(spec, psi, x0);

  WorstCaseReport rep;
  rep.expected_final_grad = L * R / (N + 1.0);
  double worst = 0.0;
  for (int i = 0; i <= N; ++i) {
    Eigen::VectorXd expected = (1.0 - static_cast<double>(i) / (N + 1.0)) * R * nu;
    worst = std::max(worst, (tr.x[i] - expected).norm() / std::max(1.0, expected.norm()));
    worst = std::max(worst, std::abs(tr.grad_norm_x(i) - rep.expected_final_grad) /
                                rep.expected_final_grad);
  }
  rep.max_rel_gap = worst;
  rep.ok = worst <= 1e-9;
  rep.trace = std::move(tr);
  return rep;
}

}  // namespace pepfo
