#include "ptcyl/spectral/discretization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptcyl::spectral {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Discretization::Discretization(const BasisSpec& spec, int max_class)
    : spec_(spec), max_class_(max_class < 0 ? spec.mmax() + 1 : max_class) {
  spec_.validate(max_class_);

  // Radial grid: Gauss points of x = 2r^2-1 on [-1,1]; 3N of them makes the
  // weighted Gram of every retained class exactly diagonal and keeps products
  // of two retained fields inside the exactness range of the rule.
  const int nfr = 3 * spec_.N;
  Quadrature qx = legendre_gauss(nfr);
  r_nodes_.resize(nfr);
  x_weights_ = qx.w;
  for (int i = 0; i < nfr; ++i) r_nodes_[i] = std::sqrt(0.5 * (qx.x[i] + 1.0));

  const int ncls = max_class_ + 1;
  synth_r_.resize(ncls);
  analyze_r_.resize(ncls);
  rnorms_.resize(ncls);
  wall_val_.resize(ncls);
  wall_der_.resize(ncls);
  raise_.resize(ncls);
  lower_.resize(ncls);
  dr_.resize(ncls);
  over_r_.resize(ncls);
  lap_h_.resize(ncls);

  std::vector<Eigen::MatrixXd> vd(ncls), vor(ncls); // d/dr values, (1/r)*values
  for (int c = 0; c < ncls; ++c) {
    const int nr = spec_.nrad(c);
    Eigen::MatrixXd v(nfr, nr), d(nfr, nr), orr(nfr, nr);
    Eigen::VectorXd q, dq;
    for (int i = 0; i < nfr; ++i) {
      radial_eval(spec_, c, r_nodes_[i], q, dq);
      v.row(i) = q.transpose();
      d.row(i) = dq.transpose();
      orr.row(i) = q.transpose() / r_nodes_[i];
    }
    synth_r_[c] = v;
    vd[c] = d;
    vor[c] = orr;
    rnorms_[c].resize(nr);
    for (int j = 0; j < nr; ++j) rnorms_[c][j] = radial_norm(c, j);
    // Projection onto the class: Gamma^-1 V^T W with W the r dr quadrature
    // weights (w/4); exact for anything inside the rule's exactness range.
    analyze_r_[c] =
        rnorms_[c].cwiseInverse().asDiagonal() * v.transpose() *
        (0.25 * x_weights_).asDiagonal();

    Eigen::VectorXd q1, dq1;
    radial_eval(spec_, c, 1.0, q1, dq1);
    wall_val_[c] = q1.transpose(); // all ones by normalization
    wall_der_[c] = dq1.transpose();
  }

  for (int c = 0; c < ncls; ++c) {
    if (c + 1 < ncls) raise_[c] = analyze_r_[c + 1] * (vd[c] - c * vor[c]);
    if (c >= 1) {
      lower_[c] = analyze_r_[c - 1] * (vd[c] + c * vor[c]);
      dr_[c] = analyze_r_[c - 1] * vd[c];
      over_r_[c] = analyze_r_[c - 1] * vor[c];
    }
  }
  if (ncls > 1) dr_[0] = raise_[0];
  for (int c = 0; c + 1 < ncls; ++c) lap_h_[c] = lower_[c + 1] * raise_[c];

  Eigen::VectorXd q0, dq0;
  radial_eval(spec_, 0, 0.0, q0, dq0);
  axis_row_ = q0.transpose();
  integral_row_ = Eigen::RowVectorXd::Zero(spec_.nrad(0));
  integral_row_[0] = 0.5; // int_0^1 Q_0^0 r dr; higher ones integrate to 0

  // Axial grid and matrices.  Interior Chebyshev-Gauss points (never on the
  // disks), ascending in z.
  const int K = spec_.K;
  const int nz = (3 * K) / 2;
  z_nodes_.resize(nz);
  vz_full_.resize(nz, K);
  az_full_.resize(K, nz);
  for (int i = 0; i < nz; ++i) {
    const double th = kPi * (nz - 0.5 - i) / nz;
    z_nodes_[i] = 0.5 * spec_.h * std::cos(th);
    for (int k = 0; k < K; ++k) {
      vz_full_(i, k) = std::cos(k * th);
      az_full_(k, i) = (k == 0 ? 1.0 : 2.0) / nz * std::cos(k * th);
    }
  }
  d1z_full_ = (2.0 / spec_.h) * chebyshev_deriv_matrix(K);
  Eigen::MatrixXd d2 = d1z_full_ * d1z_full_;

  Eigen::MatrixXd gram_full(K, K);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      gram_full(j, k) = 0.25 * spec_.h *
                        (chebyshev_integral(j + k) +
                         chebyshev_integral(std::abs(j - k)));

  const int K2 = spec_.kpack();
  for (int par = 0; par < 2; ++par) {
    const int other = 1 - par;
    vz_p_[par].resize(nz, K2);
    d1z_p_[par].resize(K2, K2);
    d2z_p_[par].resize(K2, K2);
    gram_z_[par].resize(K2, K2);
    for (int a = 0; a < K2; ++a) {
      vz_p_[par].col(a) = vz_full_.col(2 * a + par);
      for (int b = 0; b < K2; ++b) {
        d1z_p_[par](a, b) = d1z_full_(2 * a + other, 2 * b + par);
        d2z_p_[par](a, b) = d2(2 * a + par, 2 * b + par);
        gram_z_[par](a, b) = gram_full(2 * a + par, 2 * b + par);
      }
    }
  }
}

void Discretization::check_class(int c, int lo) const {
  if (c < lo || c > max_class_)
    throw std::invalid_argument("radial class " + std::to_string(c) +
                                " out of range");
}

const Eigen::MatrixXd& Discretization::synth_r(int c) const {
  check_class(c, 0);
  return synth_r_[c];
}
const Eigen::MatrixXd& Discretization::analyze_r(int c) const {
  check_class(c, 0);
  return analyze_r_[c];
}
const Eigen::MatrixXd& Discretization::raise_op(int c) const {
  check_class(c, 0);
  if (c + 1 > max_class_)
    throw std::invalid_argument("raise_op target class out of range");
  return raise_[c];
}
const Eigen::MatrixXd& Discretization::lower_op(int c) const {
  check_class(c, 1);
  return lower_[c];
}
const Eigen::MatrixXd& Discretization::dr_op(int c) const {
  check_class(c, 0);
  if (c == 0 && max_class_ < 1)
    throw std::invalid_argument("dr_op(0) needs class 1");
  return dr_[c];
}
const Eigen::MatrixXd& Discretization::over_r(int c) const {
  check_class(c, 1);
  return over_r_[c];
}
const Eigen::MatrixXd& Discretization::lap_h(int c) const {
  check_class(c, 0);
  if (c + 1 > max_class_)
    throw std::invalid_argument("lap_h needs class c+1 data");
  return lap_h_[c];
}
const Eigen::VectorXd& Discretization::radial_norms(int c) const {
  check_class(c, 0);
  return rnorms_[c];
}
const Eigen::RowVectorXd& Discretization::wall_value_row(int c) const {
  check_class(c, 0);
  return wall_val_[c];
}
const Eigen::RowVectorXd& Discretization::wall_deriv_row(int c) const {
  check_class(c, 0);
  return wall_der_[c];
}
const Eigen::MatrixXd& Discretization::synth_z(int parity) const {
  return vz_p_[parity];
}
const Eigen::MatrixXd& Discretization::deriv_z(int parity) const {
  return d1z_p_[parity];
}
const Eigen::MatrixXd& Discretization::deriv2_z(int parity) const {
  return d2z_p_[parity];
}
const Eigen::MatrixXd& Discretization::gram_z(int parity) const {
  return gram_z_[parity];
}

} // namespace ptcyl::spectral
