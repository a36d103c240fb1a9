// SPDX-License-Identifier: MIT
#include "oracles.hpp"

#include <cmath>
#include <sstream>

namespace pepfo {

namespace {

void require_dim(int d, const char* who) {
  if (d < 1) throw std::invalid_argument(std::string(who) + ": dimension must be >= 1");
}

void require_positive(double v, const char* who, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(who) + ": " + name + " must be positive");
}

}  // namespace

FunctionOracle make_quadratic_phi(double L, int d) {
  require_dim(d, "make_quadratic_phi");
  require_positive(L, "make_quadratic_phi", "L");
  FunctionOracle f;
  f.family = "quadratic_phi";
  f.d = d;
  f.L = L;
  f.value = [L](const Eigen::VectorXd& x) { return 0.5 * L * x.squaredNorm(); };
  f.grad = [L](const Eigen::VectorXd& x) { return Eigen::VectorXd(L * x); };
  f.minimizer = Eigen::VectorXd::Zero(d);
  f.min_value = 0.0;
  return f;
}

FunctionOracle make_huber_psi(double L, double R, int N, int d) {
  require_dim(d, "make_huber_psi");
  require_positive(L, "make_huber_psi", "L");
  require_positive(R, "make_huber_psi", "R");
  if (N < 1) throw std::invalid_argument("make_huber_psi: N must be >= 1");
  const double kink = R / (N + 1);
  FunctionOracle f;
  f.family = "huber_psi";
  f.d = d;
  f.L = L;
  f.value = [L, kink](const Eigen::VectorXd& x) {
    const double n = x.norm();
    if (n <= kink) return 0.5 * L * n * n;
    return L * kink * (n - 0.5 * kink);
  };
  f.grad = [L, kink](const Eigen::VectorXd& x) {
    const double n = x.norm();
    if (n <= kink) return Eigen::VectorXd(L * x);
    return Eigen::VectorXd((L * kink / n) * x);
  };
  f.minimizer = Eigen::VectorXd::Zero(d);
  f.min_value = 0.0;
  return f;
}

FunctionOracle make_psd_quadratic(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p) {
  if (Q.rows() != Q.cols() || Q.rows() != p.size())
    throw std::invalid_argument("make_psd_quadratic: Q must be square and match p");
  const int d = static_cast<int>(Q.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin < -1e-10 * std::max(1.0, lmax))
    throw std::invalid_argument("make_psd_quadratic: Q is not positive semidefinite");

  FunctionOracle f;
  f.family = "psd_quadratic";
  f.d = d;
  f.L = lmax;
  Eigen::MatrixXd Qc = Q;
  Eigen::VectorXd pc = p;
  f.value = [Qc, pc](const Eigen::VectorXd& x) { return 0.5 * x.dot(Qc * x) + pc.dot(x); };
  f.grad = [Qc, pc](const Eigen::VectorXd& x) { return Eigen::VectorXd(Qc * x + pc); };

  // Minimum-norm solution of Qx = -p; recorded only when it is stationary,
  // i.e. when p lies in the range of Q.
  Eigen::VectorXd xstar = es.eigenvectors().transpose() * (-p);
  for (int i = 0; i < d; ++i) {
    const double ev = es.eigenvalues()[i];
    xstar[i] = (ev > 1e-12 * std::max(1.0, lmax)) ? xstar[i] / ev : 0.0;
  }
  xstar = es.eigenvectors() * xstar;
  if ((Q * xstar + p).norm() <= 1e-9 * std::max(1.0, lmax) * std::max(1.0, xstar.norm())) {
    f.minimizer = xstar;
    f.min_value = f.value(xstar);
  }
  return f;
}

FunctionOracle make_random_psd_quadratic(std::uint64_t seed, int d, double L) {
  require_dim(d, "make_random_psd_quadratic");
  require_positive(L, "make_random_psd_quadratic", "L");
  Rng rng(seed);

  Eigen::VectorXd ev(d);
  ev[0] = L;
  for (int i = 1; i < d; ++i) ev[i] = rng.uniform(0.0, L);
  Eigen::MatrixXd Q = ev.asDiagonal();

  // Conjugating by Givens rotations keeps the spectrum, so the largest
  // eigenvalue stays L up to rotation round-off.
  if (d > 1) {
    for (int r = 0; r < 3 * d; ++r) {
      const int p = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(d));
      int q = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(d - 1));
      if (q >= p) ++q;
      const double angle = rng.uniform(0.0, 6.283185307179586);
      Eigen::JacobiRotation<double> G(std::cos(angle), std::sin(angle));
      Q.applyOnTheLeft(p, q, G.adjoint());
      Q.applyOnTheRight(p, q, G);
    }
    Q = Eigen::MatrixXd(0.5 * (Q + Q.transpose()));
  }

  const Eigen::VectorXd center = rng.normal_vector(d);
  FunctionOracle f;
  f.family = "psd_quadratic";
  f.d = d;
  f.L = L;
  f.value = [Q, center](const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = x - center;
    return 0.5 * r.dot(Q * r);
  };
  f.grad = [Q, center](const Eigen::VectorXd& x) { return Eigen::VectorXd(Q * (x - center)); };
  f.minimizer = center;
  f.min_value = 0.0;
  return f;
}

FunctionOracle make_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size())
    throw std::invalid_argument("make_least_squares: A and b row counts differ");
  FunctionOracle f;
  f.family = "least_squares";
  f.d = static_cast<int>(A.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  require_positive(smax, "make_least_squares", "sigma_max(A)");
  f.L = smax * smax;
  Eigen::MatrixXd Ac = A;
  Eigen::VectorXd bc = b;
  f.value = [Ac, bc](const Eigen::VectorXd& x) { return 0.5 * (Ac * x - bc).squaredNorm(); };
  f.grad = [Ac, bc](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Ac.transpose() * (Ac * x - bc));
  };
  const Eigen::VectorXd xstar = svd.solve(b);
  f.minimizer = xstar;
  f.min_value = f.value(xstar);
  return f;
}

FunctionOracle make_random_least_squares(std::uint64_t seed, int rows, int d, double L) {
  require_dim(d, "make_random_least_squares");
  require_positive(L, "make_random_least_squares", "L");
  if (rows < 1) throw std::invalid_argument("make_random_least_squares: rows must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXd A(rows, d);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  A *= std::sqrt(L) / svd.singularValues()[0];
  const Eigen::VectorXd center = rng.normal_vector(d);
  FunctionOracle f = make_least_squares(A, A * center);
  // b = A*center makes the system consistent: the minimizer is exact with
  // optimal value zero regardless of the SVD solve above.
  f.minimizer = center;
  f.min_value = 0.0;
  return f;
}

FunctionOracle make_random_log_sum_exp(std::uint64_t seed, int d, double mu) {
  require_dim(d, "make_random_log_sum_exp");
  require_positive(mu, "make_random_log_sum_exp", "mu");
  Rng rng(seed);
  const int n = d + 5;
  Eigen::MatrixXd A(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
  // Centering the rows makes the uniform softmax weights at the reference
  // point sum to a zero gradient, so that point is the global minimizer.
  A.rowwise() -= A.colwise().mean();
  const Eigen::VectorXd center = rng.normal_vector(d);
  const Eigen::VectorXd b = A * center;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const double smax = svd.singularValues()[0];

  FunctionOracle f;
  f.family = "log_sum_exp";
  f.d = d;
  f.L = smax * smax / mu;
  const double logn = std::log(static_cast<double>(n));
  f.value = [A, b, mu, logn](const Eigen::VectorXd& x) {
    const Eigen::VectorXd s = (A * x - b) / mu;
    const double m = s.maxCoeff();
    return mu * (m + std::log((s.array() - m).exp().sum()) - logn);
  };
  f.grad = [A, b, mu](const Eigen::VectorXd& x) {
    const Eigen::VectorXd s = (A * x - b) / mu;
    const double m = s.maxCoeff();
    Eigen::ArrayXd w = (s.array() - m).exp();
    w /= w.sum();
    return Eigen::VectorXd(A.transpose() * w.matrix());
  };
  f.minimizer = center;
  f.min_value = f.value(center);
  return f;
}

OracleCheck check_oracle(const FunctionOracle& f, std::uint64_t seed, int samples) {
  OracleCheck rep;
  Rng rng(seed);
  std::ostringstream detail;

  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = rng.normal_vector(f.d);
    const Eigen::VectorXd g = f.grad(x);
    const double scale = std::max(1.0, x.norm());
    const double step = 1e-5 * scale;
    Eigen::VectorXd fd(f.d);
    for (int j = 0; j < f.d; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(f.d);
      e[j] = step;
      fd[j] = (f.value(x + e) - f.value(x - e)) / (2.0 * step);
    }
    const double rel = (fd - g).norm() / std::max(1.0, g.norm());
    rep.max_fd_rel_err = std::max(rep.max_fd_rel_err, rel);
    if (rel > 1e-5) {
      rep.ok = false;
      detail << "finite-difference mismatch " << rel << " at sample " << s << "; ";
    }

    const Eigen::VectorXd y = rng.normal_vector(f.d);
    const double lhs = (f.grad(x) - f.grad(y)).norm();
    const double rhs = f.L * (x - y).norm();
    const double excess = (lhs - rhs) / std::max(1.0, rhs);
    rep.max_lipschitz_excess = std::max(rep.max_lipschitz_excess, excess);
    if (excess > 1e-8) {
      rep.ok = false;
      detail << "Lipschitz excess " << excess << " at sample " << s << "; ";
    }
  }

  if (f.minimizer) {
    rep.grad_at_min_norm = f.grad(*f.minimizer).norm();
    const double tol = 1e-10 * f.L * std::max(1.0, f.minimizer->norm());
    if (rep.grad_at_min_norm > tol) {
      rep.ok = false;
      detail << "gradient at minimizer " << rep.grad_at_min_norm << " exceeds " << tol << "; ";
    }
  }
  rep.detail = detail.str();
  return rep;
}

}  // namespace pepfo
