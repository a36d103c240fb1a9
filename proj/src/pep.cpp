// SPDX-License-Identifier: MIT
#include "pep.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "common.hpp"

namespace pepfo {

const char* to_string(PepKind k) {
  switch (k) {
    case PepKind::D: return "d";
    case PepKind::DPrime: return "dprime";
    case PepKind::DDoublePrime: return "ddprime";
  }
  return "?";
}

std::optional<PepKind> pep_kind_from_string(const std::string& s) {
  if (s == "d") return PepKind::D;
  if (s == "dprime") return PepKind::DPrime;
  if (s == "ddprime") return PepKind::DDoublePrime;
  return std::nullopt;
}

const char* to_string(CertKind k) {
  switch (k) {
    case CertKind::GogmCost: return "cost";
    case CertKind::GogmCostPost: return "cost-post";
    case CertKind::FgmGrad: return "grad-fgm";
    case CertKind::GogmGrad: return "grad-slack";
  }
  return "?";
}

std::optional<CertKind> cert_kind_from_string(const std::string& s) {
  for (CertKind k : {CertKind::GogmCost, CertKind::GogmCostPost, CertKind::FgmGrad,
                     CertKind::GogmGrad}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

PepMatrices::PepMatrices(StepMatrix h) : N_(h.N), h_(std::move(h)), w_(h_.column_sum_table()) {}

double PepMatrices::w(int i, int k) const {
  if (i < 0 || i > N_) throw std::out_of_range("iterate index");
  if (k < 0 || k >= i) return 0.0;
  return w_[i][k];
}

Eigen::MatrixXd PepMatrices::A(int i, int j) const {
  if (!(0 <= i && i < j && j <= N_)) throw std::out_of_range("A needs 0 <= i < j <= N");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  M(i, i) += 0.5;
  M(j, j) += 0.5;
  M(i, j) -= 0.5;
  M(j, i) -= 0.5;
  for (int k = 0; k < j; ++k) {
    double c = 0.5 * (w(j, k) - w(i, k));
    M(j, k) += c;
    M(k, j) += c;
  }
  return M;
}

Eigen::MatrixXd PepMatrices::B(int i, int j) const {
  if (!(0 <= j && j < i && i <= N_)) throw std::out_of_range("B needs 0 <= j < i <= N");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  M(i, i) += 0.5;
  M(j, j) += 0.5;
  M(i, j) -= 0.5;
  M(j, i) -= 0.5;
  for (int k = 0; k < i; ++k) {
    double c = -0.5 * (w(i, k) - w(j, k));
    M(j, k) += c;
    M(k, j) += c;
  }
  return M;
}

Eigen::MatrixXd PepMatrices::C(int i) const {
  if (i < 0 || i > N_) throw std::out_of_range("iterate index");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  M(i, i) = 0.5;
  return M;
}

Eigen::MatrixXd PepMatrices::D(int i) const {
  if (i < 0 || i > N_) throw std::out_of_range("iterate index");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N_ + 1, N_ + 1);
  M(i, i) = 0.5;
  for (int k = 0; k < i; ++k) {
    double c = 0.5 * w(i, k);
    M(i, k) += c;
    M(k, i) += c;
  }
  return M;
}

double DualCertificate::cost_bound(double L, double R) const {
  if (kind == PepKind::DDoublePrime) {
    throw NotAvailable("this certificate bounds the smallest gradient norm, not the cost");
  }
  return 0.5 * L * R * R * gamma;
}

double DualCertificate::grad_bound(double L, double R) const {
  if (kind != PepKind::DDoublePrime) {
    throw NotAvailable("this certificate bounds the cost, not the gradient norm");
  }
  return L * R * std::sqrt(0.5 * gamma);
}

Eigen::MatrixXd assemble_S(const PepMatrices& pm, const DualCertificate& cert) {
  const int N = pm.N();
  if (cert.N != N) throw std::invalid_argument("certificate and matrices cover different N");
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 1; i <= N; ++i) S += cert.lambda(i - 1) * pm.A(i - 1, i);
  for (int i = 0; i <= N; ++i) S += cert.tau(i) * pm.D(i);
  if (cert.kind == PepKind::DPrime) {
    S(N, N) += 0.5;
  } else if (cert.kind == PepKind::DDoublePrime) {
    S(N, N) += 0.5 * cert.eta;
    for (int i = 0; i <= N; ++i) S(i, i) -= cert.beta(i);
  }
  return S;
}

Eigen::MatrixXd assemble_block(const PepMatrices& pm, const DualCertificate& cert) {
  const int N = pm.N();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(N + 2, N + 2);
  block.topLeftCorner(N + 1, N + 1) = assemble_S(pm, cert);
  for (int i = 0; i <= N; ++i) {
    block(i, N + 1) = 0.5 * cert.tau(i);
    block(N + 1, i) = 0.5 * cert.tau(i);
  }
  block(N + 1, N + 1) = 0.5 * cert.gamma;
  return block;
}

namespace {

void require_seq(const ParamSeq& seq, bool doubled, const char* who) {
  if (seq.final_rule_doubled != doubled) {
    throw RuleViolation(fmt::format("{} expects a sequence obeying the {} rule", who,
                                    doubled ? "doubled-final" : "plain"));
  }
  ValidationReport rep = validate(seq);
  if (!rep.ok) throw RuleViolation(fmt::format("{}: {}", who, rep.summary()));
}

long double sum_of_squares(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += static_cast<long double>(x) * x;
  return s;
}

}  // namespace

DualCertificate cert_gogm_cost(const ParamSeq& theta) {
  require_seq(theta, true, "cost certificate");
  const int N = theta.N;
  const std::vector<double>& v = theta.values;
  const std::vector<double>& S = theta.partial_sums;
  DualCertificate c;
  c.kind = PepKind::D;
  c.construction = CertKind::GogmCost;
  c.N = N;
  c.seq = theta;
  double tau0 = 2.0 / S[N];
  c.lambda.resize(N);
  for (int i = 1; i <= N; ++i) c.lambda(i - 1) = S[i - 1] * tau0;
  c.tau.resize(N + 1);
  for (int i = 0; i < N; ++i) c.tau(i) = v[i] * tau0;
  c.tau(N) = 0.5 * v[N] * tau0;
  c.gamma = 0.5 * tau0;
  return c;
}

DualCertificate cert_gogm_cost_post(const ParamSeq& t) {
  require_seq(t, false, "post-step cost certificate");
  const int N = t.N;
  DualCertificate c;
  c.kind = PepKind::DPrime;
  c.construction = CertKind::GogmCostPost;
  c.N = N;
  c.seq = t;
  double tau0 = 1.0 / t.partial_sums[N];
  c.lambda.resize(N);
  for (int i = 1; i <= N; ++i) c.lambda(i - 1) = t.partial_sums[i - 1] * tau0;
  c.tau.resize(N + 1);
  for (int i = 0; i <= N; ++i) c.tau(i) = t.values[i] * tau0;
  c.gamma = 0.5 * tau0;
  return c;
}

DualCertificate cert_fgm_grad(const ParamSeq& t) {
  require_seq(t, false, "exact-recursion gradient certificate");
  const int N = t.N;
  for (int i = 0; i <= N; ++i) {
    double gap = std::abs(t.partial_sums[i] - t.values[i] * t.values[i]);
    if (gap > 1e-9 * std::max(1.0, t.partial_sums[i])) {
      throw RuleViolation(fmt::format(
          "exact-recursion gradient certificate needs t_i^2 = T_i at every index; "
          "index {} has gap {:.3e}", i, gap));
    }
  }
  DualCertificate c;
  c.kind = PepKind::DDoublePrime;
  c.construction = CertKind::FgmGrad;
  c.N = N;
  c.seq = t;
  double tau0 = static_cast<double>(2.0L / sum_of_squares(t.values));
  c.lambda.resize(N);
  for (int i = 1; i <= N; ++i) {
    c.lambda(i - 1) = t.values[i - 1] * t.values[i - 1] * tau0;
  }
  c.tau.resize(N + 1);
  c.beta.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    c.tau(i) = t.values[i] * tau0;
    c.beta(i) = 0.5 * t.values[i] * t.values[i] * tau0;
  }
  c.eta = t.values[N] * t.values[N] * tau0;
  c.gamma = tau0;
  return c;
}

DualCertificate cert_gogm_grad(const ParamSeq& t) {
  require_seq(t, false, "slack gradient certificate");
  const int N = t.N;
  double total = slack_sum(t);
  if (!(total > 1e-9 * std::max(1.0, t.partial_sums[N]))) {
    throw NotAvailable(fmt::format(
        "slack gradient certificate undefined: total slack {:.3e} is not positive "
        "(the exact recursion leaves none)", total));
  }
  DualCertificate c;
  c.kind = PepKind::DDoublePrime;
  c.construction = CertKind::GogmGrad;
  c.N = N;
  c.seq = t;
  double tau0 = 1.0 / total;
  c.lambda.resize(N);
  for (int i = 1; i <= N; ++i) c.lambda(i - 1) = t.partial_sums[i - 1] * tau0;
  c.tau.resize(N + 1);
  c.beta.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    c.tau(i) = t.values[i] * tau0;
    c.beta(i) = (t.partial_sums[i] - t.values[i] * t.values[i]) * tau0;
  }
  c.eta = t.partial_sums[N] * tau0;
  c.gamma = 0.5 * tau0;
  return c;
}

DualCertificate make_cert(CertKind kind, const ParamSeq& seq) {
  switch (kind) {
    case CertKind::GogmCost: return cert_gogm_cost(seq);
    case CertKind::GogmCostPost: return cert_gogm_cost_post(seq);
    case CertKind::FgmGrad: return cert_fgm_grad(seq);
    case CertKind::GogmGrad: return cert_gogm_grad(seq);
  }
  throw std::logic_error("make_cert: unexpected kind");
}

StepMatrix cert_step_matrix(const DualCertificate& cert) {
  switch (cert.construction) {
    case CertKind::GogmCost: return h_gogm(cert.seq);
    case CertKind::GogmCostPost: return h_gogm_prime(cert.seq);
    case CertKind::FgmGrad: return h_fgm(cert.seq);
    case CertKind::GogmGrad: return h_gogm_prime(cert.seq);
  }
  throw std::logic_error("cert_step_matrix: unexpected kind");
}

Eigen::MatrixXd identity_block(const DualCertificate& cert) {
  const int N = cert.N;
  const std::vector<double>& v = cert.seq.values;
  const std::vector<double>& S = cert.seq.partial_sums;
  double tau0 = cert.tau(0);
  Eigen::VectorXd vt(N + 2), vs(N + 2);
  switch (cert.construction) {
    case CertKind::GogmCost:
      for (int i = 0; i < N; ++i) {
        vt(i) = v[i];
        vs(i) = S[i];
      }
      vt(N) = 0.5 * v[N];
      vs(N) = 0.25 * S[N];
      vt(N + 1) = 0.5;
      vs(N + 1) = 0.25;
      break;
    case CertKind::GogmCostPost:
      for (int i = 0; i <= N; ++i) {
        vt(i) = v[i];
        vs(i) = S[i];
      }
      vt(N + 1) = 0.5;
      vs(N + 1) = 0.25;
      break;
    case CertKind::FgmGrad:
      for (int i = 0; i <= N; ++i) vt(i) = v[i];
      vt(N + 1) = 1.0;
      return 0.5 * tau0 * (vt * vt.transpose());
    case CertKind::GogmGrad:
      for (int i = 0; i <= N; ++i) vt(i) = v[i];
      vt(N + 1) = 0.5;
      return tau0 * (vt * vt.transpose());
  }
  Eigen::MatrixXd block = vt * vt.transpose();
  for (int i = 0; i < N + 2; ++i) block(i, i) += vs(i) - vt(i) * vt(i);
  return tau0 * block;
}

VerifyReport verify(const DualCertificate& cert, const PepMatrices& pm) {
  VerifyReport rep;
  const int N = cert.N;
  if (pm.N() != N) throw std::invalid_argument("certificate and matrices cover different N");

  const double mem_tol = 1e-10;
  double worst = 0.0;
  std::string detail;
  auto note = [&](double violation, const std::string& what) {
    if (violation > worst) worst = violation;
    if (violation > mem_tol && detail.empty()) {
      detail = fmt::format("{} violated by {:.3e}", what, violation);
    }
  };
  note(std::abs(cert.tau(0) - cert.lambda(0)), "tau_0 = lambda_1");
  for (int i = 1; i <= N - 1; ++i) {
    note(std::abs(cert.lambda(i - 1) - cert.lambda(i) + cert.tau(i)),
         fmt::format("lambda_{0} - lambda_{1} + tau_{0} = 0", i, i + 1));
  }
  double rhs = cert.kind == PepKind::DDoublePrime ? cert.eta : 1.0;
  note(std::abs(cert.lambda(N - 1) + cert.tau(N) - rhs),
       cert.kind == PepKind::DDoublePrime ? "lambda_N + tau_N = eta" : "lambda_N + tau_N = 1");
  if (cert.kind == PepKind::DDoublePrime) {
    note(std::abs(cert.beta.sum() - 1.0), "sum beta_i = 1");
    note(std::max(0.0, -cert.beta.minCoeff()), "beta >= 0");
    note(std::max(0.0, -cert.eta), "eta >= 0");
  }
  note(std::max(0.0, -cert.lambda.minCoeff()), "lambda >= 0");
  note(std::max(0.0, -cert.tau.minCoeff()), "tau >= 0");
  note(std::max(0.0, -cert.gamma), "gamma >= 0");
  rep.max_membership_violation = worst;
  rep.membership_ok = worst <= mem_tol;

  Eigen::MatrixXd block = assemble_block(pm, cert);
  Eigen::MatrixXd sym = 0.5 * (block + block.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.psd_tolerance = 1e-9 * sym.trace();
  rep.psd_ok = rep.min_eigenvalue >= -rep.psd_tolerance;
  if (!rep.psd_ok && detail.empty()) {
    detail = fmt::format("block not PSD: smallest eigenvalue {:.3e} below -{:.3e}",
                         rep.min_eigenvalue, rep.psd_tolerance);
  }

  rep.identity_checked = true;
  Eigen::MatrixXd expected = identity_block(cert);
  rep.max_identity_gap = (block - expected).cwiseAbs().maxCoeff();
  rep.identity_ok = rep.max_identity_gap <= 1e-10;
  if (!rep.identity_ok && detail.empty()) {
    detail = fmt::format("closed-form block identity off by {:.3e}", rep.max_identity_gap);
  }

  rep.ok = rep.membership_ok && rep.psd_ok && (!rep.identity_checked || rep.identity_ok);
  rep.detail = detail;
  return rep;
}

}  // namespace pepfo
