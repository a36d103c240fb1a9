// SPDX-License-Identifier: MIT
//
// Worst-case-performance duals for fixed-step first-order methods.
//
// For a step matrix h over iterations 0..N, the relaxed performance
// estimation dual is a small SDP in multipliers (lambda, tau, gamma), plus
// (eta, beta) for the smallest-gradient variant. Feasible multipliers prove
//   f(x_N) - f(x*)        <= (1/2) L R^2 gamma           (kind D)
//   f(y_{N+1}) - f(x*)    <= (1/2) L R^2 gamma           (kind D', post step)
//   min_i ||grad f(x_i)||^2 <= (1/2) L^2 R^2 gamma       (kind D'')
// whenever the (N+2)x(N+2) block [[S-variant, tau/2],[tau^T/2, gamma/2]] is
// positive semidefinite, with S built from the A/D matrices below.
//
// The four closed-form constructions return certificates whose feasibility
// can be verified mechanically; each also satisfies an exact
// rank-one-plus-diagonal identity for its assembled block, checked
// entrywise by verify().
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "params.hpp"
#include "steps.hpp"

namespace pepfo {

enum class PepKind { D, DPrime, DDoublePrime };
const char* to_string(PepKind k);
std::optional<PepKind> pep_kind_from_string(const std::string& s);

// Named certificate constructions, keyed by what they bound:
//   GogmCost      cost at x_N for a doubled-final-rule sequence (pairs with h_gogm)
//   GogmCostPost  cost at y_{N+1} for a plain-rule sequence (pairs with h_gogm_prime)
//   FgmGrad       smallest gradient for the exact momentum recursion (pairs with h_fgm)
//   GogmGrad      smallest gradient for plain-rule sequences with positive
//                 total slack (pairs with h_gogm_prime)
enum class CertKind { GogmCost, GogmCostPost, FgmGrad, GogmGrad };
const char* to_string(CertKind k);
std::optional<CertKind> cert_kind_from_string(const std::string& s);

// Quadratic-form coefficient matrices over the gradient basis u_0..u_N.
// With w_i[k] = sum_{j=k+1}^{i} h_{j,k} (the total weight of gradient k
// inside iterate i), the inner-product constraints of the relaxation read
// tr(G A_{i,j}) etc.; only A_{i-1,i} and D_i enter the assembled dual.
class PepMatrices {
 public:
  explicit PepMatrices(StepMatrix h);

  int N() const { return N_; }
  const StepMatrix& steps() const { return h_; }
  double w(int i, int k) const;  // 0 for k >= i

  Eigen::MatrixXd A(int i, int j) const;  // i < j
  Eigen::MatrixXd B(int i, int j) const;  // j < i
  Eigen::MatrixXd C(int i) const;
  Eigen::MatrixXd D(int i) const;

 private:
  int N_;
  StepMatrix h_;
  std::vector<std::vector<double>> w_;
};

struct DualCertificate {
  PepKind kind = PepKind::D;
  CertKind construction = CertKind::GogmCost;
  int N = 0;
  Eigen::VectorXd lambda;  // size N; lambda(i-1) multiplies A_{i-1,i}
  Eigen::VectorXd tau;     // size N+1
  double eta = 0.0;              // D'' only
  Eigen::VectorXd beta;    // size N+1, D'' only
  double gamma = 0.0;
  ParamSeq seq;            // generating sequence, kept for the identity check

  // Bounds implied by feasibility. Cost kinds measure f - f(x*), the
  // gradient kind measures min_i ||grad f(x_i)||.
  double cost_bound(double L, double R) const;      // D, D'
  double grad_bound(double L, double R) const;      // D''
};

Eigen::MatrixXd assemble_S(const PepMatrices& pm, const DualCertificate& cert);
// [[S-variant, tau/2],[tau^T/2, gamma/2]], order N+2.
Eigen::MatrixXd assemble_block(const PepMatrices& pm, const DualCertificate& cert);

DualCertificate cert_gogm_cost(const ParamSeq& theta);       // doubled final rule
DualCertificate cert_gogm_cost_post(const ParamSeq& t);      // plain rule
DualCertificate cert_fgm_grad(const ParamSeq& t);            // exact recursion only
DualCertificate cert_gogm_grad(const ParamSeq& t);           // needs positive slack sum

DualCertificate make_cert(CertKind kind, const ParamSeq& seq);
// The step matrix whose dual the construction certifies.
StepMatrix cert_step_matrix(const DualCertificate& cert);

struct VerifyReport {
  bool ok = false;
  bool membership_ok = false;
  bool psd_ok = false;
  bool identity_checked = false;
  bool identity_ok = false;
  double max_membership_violation = 0.0;
  double min_eigenvalue = 0.0;
  double psd_tolerance = 0.0;
  double max_identity_gap = 0.0;
  std::string detail;  // first violated inequality, empty when ok
};

// Membership in the multiplier set to 1e-10 absolute, positive
// semidefiniteness of the assembled block (smallest eigenvalue of the
// symmetrized block >= -1e-9 * trace), and the entrywise closed-form block
// identity to 1e-10.
VerifyReport verify(const DualCertificate& cert, const PepMatrices& pm);

// Expected assembled block under the rank-one-plus-diagonal identity.
Eigen::MatrixXd identity_block(const DualCertificate& cert);

}  // namespace pepfo
