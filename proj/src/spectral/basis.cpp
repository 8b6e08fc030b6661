#include "ptcyl/spectral/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptcyl::spectral {

void BasisSpec::validate(int max_class) const {
  if (max_class < 0) max_class = mmax() + 1;
  if (M < 0) throw std::invalid_argument("M must be >= 0");
  if (K < 4 || K % 2 != 0)
    throw std::invalid_argument("K must be even and >= 4, got " +
                                std::to_string(K));
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (nrad(max_class) < 2)
    throw std::invalid_argument(
        "N too small for the azimuthal resolution: class " +
        std::to_string(max_class) + " would keep " +
        std::to_string(nrad(max_class)) + " radial functions (need >= 2)");
}

Quadrature legendre_gauss(int n) {
  if (n < 1) throw std::invalid_argument("quadrature size must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double b = j / std::sqrt(4.0 * j * j - 1.0);
    J(j, j - 1) = b;
    J(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  q.x = es.eigenvalues();
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    q.w[i] = 2.0 * v0 * v0;
  }
  return q;
}

void jacobi_eval(int jmax, int c, double x, Eigen::VectorXd& val,
                 Eigen::VectorXd& dval) {
  val.resize(jmax + 1);
  dval.resize(jmax + 1);
  val[0] = 1.0;
  dval[0] = 0.0;
  if (jmax == 0) return;
  val[1] = 0.5 * ((c + 2) * x - c);
  dval[1] = 0.5 * (c + 2);
  for (int j = 2; j <= jmax; ++j) {
    const double s = 2.0 * j + c;
    const double denom = 2.0 * j * (j + c) * (s - 2.0);
    const double A = (s - 1.0) * s * (s - 2.0) / denom;
    const double B = -(s - 1.0) * c * static_cast<double>(c) / denom;
    const double C = -2.0 * (j - 1.0) * (j + c - 1.0) * s / denom;
    val[j] = (A * x + B) * val[j - 1] + C * val[j - 2];
    dval[j] = A * val[j - 1] + (A * x + B) * dval[j - 1] + C * dval[j - 2];
  }
}

void radial_eval(const BasisSpec& spec, int c, double r, Eigen::VectorXd& q,
                 Eigen::VectorXd& dq) {
  const int nr = spec.nrad(c);
  const double x = 2.0 * r * r - 1.0;
  Eigen::VectorXd p, dp;
  jacobi_eval(nr - 1, c, x, p, dp);
  q.resize(nr);
  dq.resize(nr);
  const double rc = std::pow(r, c);
  const double rcm1 = (c > 0) ? std::pow(r, c - 1) : 0.0;
  for (int j = 0; j < nr; ++j) {
    q[j] = rc * p[j];
    dq[j] = c * rcm1 * p[j] + 4.0 * r * rc * dp[j];
  }
}

void chebyshev_eval(int kmax, double x, Eigen::VectorXd& t) {
  t.resize(kmax + 1);
  t[0] = 1.0;
  if (kmax == 0) return;
  t[1] = x;
  for (int k = 2; k <= kmax; ++k) t[k] = 2.0 * x * t[k - 1] - t[k - 2];
}

Eigen::MatrixXd chebyshev_deriv_matrix(int K) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    const double ck = (k == 0) ? 2.0 : 1.0;
    for (int p = k + 1; p < K; p += 2) D(k, p) = 2.0 * p / ck;
  }
  return D;
}

double chebyshev_integral(int k) {
  if (k % 2 == 1) return 0.0;
  return 2.0 / (1.0 - static_cast<double>(k) * k);
}

double radial_norm(int c, int j) { return 1.0 / (2.0 * (2.0 * j + c + 1.0)); }

} // namespace ptcyl::spectral
