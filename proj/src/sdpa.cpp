// SPDX-License-Identifier: MIT
#include "sdpa.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "trace_io.hpp"

namespace pepfo {

namespace {

bool entry_less(const SdpaEntry& a, const SdpaEntry& b) {
  return std::tie(a.mat, a.blk, a.i, a.j) < std::tie(b.mat, b.blk, b.i, b.j);
}

// Collects the upper triangle of a dense symmetric matrix as block-1 entries.
void push_block1(std::vector<SdpaEntry>& out, int mat, const Eigen::MatrixXd& M) {
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = i; j < M.cols(); ++j) {
      if (M(i, j) != 0.0) out.push_back({mat, 1, i + 1, j + 1, M(i, j)});
    }
  }
}

struct EqRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable index 1..m, coefficient)
  double rhs = 0.0;
  std::string text;
};

}  // namespace

SdpaExport build_dual_sdp(PepKind kind, const StepMatrix& h) {
  PepMatrices pm(h);
  const int N = pm.N();
  const bool dpp = kind == PepKind::DDoublePrime;

  SdpaExport ex;
  ex.kind = kind;
  ex.N = N;

  // Variable layout: lambda_1..lambda_N, tau_0..tau_N, then eta and
  // beta_0..beta_N for the gradient variant, gamma last.
  auto var_lambda = [](int i) { return i; };                   // i = 1..N
  auto var_tau = [N](int i) { return N + 1 + i; };             // i = 0..N
  const int var_eta = 2 * N + 2;                               // D'' only
  auto var_beta = [N](int i) { return 2 * N + 3 + i; };        // i = 0..N, D'' only
  const int var_gamma = dpp ? 3 * N + 4 : 2 * N + 2;
  const int m = var_gamma;

  for (int i = 1; i <= N; ++i) ex.variable_names.push_back(fmt::format("lambda_{}", i));
  for (int i = 0; i <= N; ++i) ex.variable_names.push_back(fmt::format("tau_{}", i));
  if (dpp) {
    ex.variable_names.push_back("eta");
    for (int i = 0; i <= N; ++i) ex.variable_names.push_back(fmt::format("beta_{}", i));
  }
  ex.variable_names.push_back("gamma");

  SdpaModel& model = ex.model;
  model.m = m;
  model.c.assign(m, 0.0);
  model.c[var_gamma - 1] = 0.5;

  // Block 1: the LMI.
  std::vector<SdpaEntry>& E = model.entries;
  for (int i = 1; i <= N; ++i) push_block1(E, var_lambda(i), pm.A(i - 1, i));
  for (int i = 0; i <= N; ++i) {
    push_block1(E, var_tau(i), pm.D(i));
    E.push_back({var_tau(i), 1, i + 1, N + 2, 0.5});
  }
  E.push_back({var_gamma, 1, N + 2, N + 2, 0.5});
  if (kind == PepKind::DPrime) {
    E.push_back({0, 1, N + 1, N + 1, -0.5});
  } else if (dpp) {
    E.push_back({var_eta, 1, N + 1, N + 1, 0.5});
    for (int i = 0; i <= N; ++i) E.push_back({var_beta(i), 1, i + 1, i + 1, -1.0});
  }

  // Block 2: diagonal. Nonnegativity for every multiplier except gamma
  // (its sign is already forced by the LMI corner), then the equalities.
  int slot = 0;
  const int nonneg_count = dpp ? 3 * N + 3 : 2 * N + 1;
  for (int v = 1; v <= nonneg_count; ++v) {
    ++slot;
    E.push_back({v, 2, slot, slot, 1.0});
    ex.slot_meanings.push_back(fmt::format("{} >= 0", ex.variable_names[v - 1]));
  }

  std::vector<EqRow> eqs;
  {
    EqRow r;
    r.coeffs = {{var_tau(0), 1.0}, {var_lambda(1), -1.0}};
    r.text = "tau_0 - lambda_1 = 0";
    eqs.push_back(std::move(r));
  }
  for (int i = 1; i <= N - 1; ++i) {
    EqRow r;
    r.coeffs = {{var_lambda(i), 1.0}, {var_lambda(i + 1), -1.0}, {var_tau(i), 1.0}};
    r.text = fmt::format("lambda_{0} - lambda_{1} + tau_{0} = 0", i, i + 1);
    eqs.push_back(std::move(r));
  }
  {
    EqRow r;
    r.coeffs = {{var_lambda(N), 1.0}, {var_tau(N), 1.0}};
    if (dpp) {
      r.coeffs.emplace_back(var_eta, -1.0);
      r.text = fmt::format("lambda_{0} + tau_{0} - eta = 0", N);
    } else {
      r.rhs = 1.0;
      r.text = fmt::format("lambda_{0} + tau_{0} = 1", N);
    }
    eqs.push_back(std::move(r));
  }
  if (dpp) {
    EqRow r;
    for (int i = 0; i <= N; ++i) r.coeffs.emplace_back(var_beta(i), 1.0);
    r.rhs = 1.0;
    r.text = "sum_i beta_i = 1";
    eqs.push_back(std::move(r));
  }
  for (const EqRow& r : eqs) {
    for (double sign : {1.0, -1.0}) {
      ++slot;
      for (auto [v, a] : r.coeffs) E.push_back({v, 2, slot, slot, sign * a});
      if (r.rhs != 0.0) E.push_back({0, 2, slot, slot, sign * r.rhs});
      ex.slot_meanings.push_back(fmt::format("{} ({})", r.text, sign > 0 ? ">=" : "<="));
    }
  }

  model.block_sizes = {N + 2, -slot};
  std::sort(E.begin(), E.end(), entry_less);
  return ex;
}

std::string render_sdpa(const SdpaModel& model, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "\"" + comment + "\"\n";
  out += std::to_string(model.m) + "\n";
  out += std::to_string(model.block_sizes.size()) + "\n";
  for (size_t b = 0; b < model.block_sizes.size(); ++b) {
    if (b) out += ' ';
    out += std::to_string(model.block_sizes[b]);
  }
  out += '\n';
  for (int v = 0; v < model.m; ++v) {
    if (v) out += ' ';
    out += format_double(model.c[v]);
  }
  out += '\n';
  for (const SdpaEntry& e : model.entries) {
    out += fmt::format("{} {} {} {} {}\n", e.mat, e.blk, e.i, e.j, format_double(e.value));
  }
  return out;
}

std::string render_sidecar_json(const SdpaExport& ex) {
  nlohmann::json j;
  j["kind"] = to_string(ex.kind);
  j["N"] = ex.N;
  j["m"] = ex.model.m;
  j["objective"] = "minimize 0.5 * gamma";
  nlohmann::json vars = nlohmann::json::array();
  for (size_t v = 0; v < ex.variable_names.size(); ++v) {
    vars.push_back({{"index", v + 1}, {"name", ex.variable_names[v]}});
  }
  j["variables"] = std::move(vars);
  nlohmann::json blocks = nlohmann::json::array();
  blocks.push_back({{"block", 1},
                    {"type", "psd"},
                    {"order", ex.model.block_sizes[0]},
                    {"rows", "gradient basis u_0..u_N, then the border column"}});
  nlohmann::json slots = nlohmann::json::array();
  for (size_t s = 0; s < ex.slot_meanings.size(); ++s) {
    slots.push_back({{"slot", s + 1}, {"meaning", ex.slot_meanings[s]}});
  }
  blocks.push_back({{"block", 2},
                    {"type", "diagonal"},
                    {"size", -ex.model.block_sizes[1]},
                    {"slots", std::move(slots)}});
  j["blocks"] = std::move(blocks);
  return j.dump(2) + "\n";
}

void export_sdpa(PepKind kind, const StepMatrix& h, const std::string& path) {
  SdpaExport ex = build_dual_sdp(kind, h);
  std::string comment =
      fmt::format("performance-estimation dual ({}), N = {}, {} variables", to_string(kind),
                  ex.N, ex.model.m);
  write_text_file(path, render_sdpa(ex.model, comment));
  write_text_file(path + ".json", render_sidecar_json(ex));
}

SdpaModel parse_sdpa_text(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) {
    if (!cur.empty() && (cur[0] == '"' || cur[0] == '*')) continue;
    for (char& ch : cur) {
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    }
    lines.push_back(cur);
  }
  std::string joined;
  for (const std::string& l : lines) {
    joined += l;
    joined += '\n';
  }
  std::istringstream ts(joined);
  SdpaModel model;
  int nblocks = 0;
  if (!(ts >> model.m >> nblocks)) throw std::runtime_error("sdpa parse: missing header");
  if (model.m < 1 || nblocks < 1) throw std::runtime_error("sdpa parse: bad header");
  model.block_sizes.resize(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    if (!(ts >> model.block_sizes[b])) throw std::runtime_error("sdpa parse: missing block size");
  }
  model.c.resize(model.m);
  for (int v = 0; v < model.m; ++v) {
    if (!(ts >> model.c[v])) throw std::runtime_error("sdpa parse: missing objective entry");
  }
  SdpaEntry e;
  while (ts >> e.mat >> e.blk >> e.i >> e.j >> e.value) {
    if (e.mat < 0 || e.mat > model.m || e.blk < 1 || e.blk > nblocks) {
      throw std::runtime_error("sdpa parse: entry out of range");
    }
    const int order = std::abs(model.block_sizes[e.blk - 1]);
    if (e.i < 1 || e.j < 1 || e.i > order || e.j > order) {
      throw std::runtime_error("sdpa parse: entry out of range");
    }
    if (e.i > e.j) std::swap(e.i, e.j);  // normalize to upper triangle
    model.entries.push_back(e);
  }
  std::sort(model.entries.begin(), model.entries.end(), entry_less);
  return model;
}

SdpaModel parse_sdpa_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sdpa_text(buf.str());
}

bool models_identical(const SdpaModel& a, const SdpaModel& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.m != b.m) return fail("variable counts differ");
  if (a.block_sizes != b.block_sizes) return fail("block structures differ");
  if (a.c != b.c) return fail("objectives differ");
  if (a.entries.size() != b.entries.size()) {
    return fail(fmt::format("entry counts differ: {} vs {}", a.entries.size(), b.entries.size()));
  }
  for (size_t k = 0; k < a.entries.size(); ++k) {
    if (!(a.entries[k] == b.entries[k])) {
      return fail(fmt::format("entry {} differs", k));
    }
  }
  return true;
}

Eigen::VectorXd certificate_assignment(const SdpaExport& ex, const DualCertificate& cert) {
  if (cert.kind != ex.kind || cert.N != ex.N) {
    throw std::invalid_argument("certificate does not match the exported problem");
  }
  const int N = ex.N;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ex.model.m);
  for (int i = 1; i <= N; ++i) x(i - 1) = cert.lambda(i - 1);
  for (int i = 0; i <= N; ++i) x(N + i) = cert.tau(i);
  if (ex.kind == PepKind::DDoublePrime) {
    x(2 * N + 1) = cert.eta;
    for (int i = 0; i <= N; ++i) x(2 * N + 2 + i) = cert.beta(i);
    x(3 * N + 3) = cert.gamma;
  } else {
    x(2 * N + 1) = cert.gamma;
  }
  return x;
}

AssignmentCheck check_assignment(const SdpaModel& model, const Eigen::VectorXd& x, double tol) {
  if (x.size() != model.m) throw std::invalid_argument("assignment length mismatch");
  AssignmentCheck res;
  std::vector<Eigen::MatrixXd> blocks;
  for (int sz : model.block_sizes) blocks.emplace_back(Eigen::MatrixXd::Zero(std::abs(sz), std::abs(sz)));
  std::vector<Eigen::VectorXd> f0_diag;
  for (int sz : model.block_sizes) f0_diag.emplace_back(Eigen::VectorXd::Zero(std::abs(sz)));

  for (const SdpaEntry& e : model.entries) {
    double weight = e.mat == 0 ? -1.0 : x(e.mat - 1);
    Eigen::MatrixXd& B = blocks[e.blk - 1];
    B(e.i - 1, e.j - 1) += weight * e.value;
    if (e.i != e.j) B(e.j - 1, e.i - 1) += weight * e.value;
    if (e.mat == 0 && e.i == e.j) f0_diag[e.blk - 1](e.i - 1) = e.value;
  }

  res.ok = true;
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (model.block_sizes[b] > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[b], Eigen::EigenvaluesOnly);
      double lmin = es.eigenvalues().minCoeff();
      res.min_block_eigenvalue = lmin;
      double thresh = tol * std::max(1.0, std::abs(blocks[b].trace()));
      if (lmin < -thresh) {
        res.ok = false;
        if (res.detail.empty()) {
          res.detail = fmt::format("block {} eigenvalue {:.3e} below -{:.3e}", b + 1, lmin, thresh);
        }
      }
    } else {
      for (int s = 0; s < blocks[b].rows(); ++s) {
        double val = blocks[b](s, s);
        double scale = std::max(1.0, std::abs(f0_diag[b](s)));
        double violation = -val / scale;
        if (violation > res.worst_diag_violation) res.worst_diag_violation = violation;
        if (violation > tol) {
          res.ok = false;
          if (res.detail.empty()) {
            res.detail = fmt::format("diagonal slot {} of block {} is {:.3e}", s + 1, b + 1, val);
          }
        }
      }
    }
  }
  return res;
}

}  // namespace pepfo
