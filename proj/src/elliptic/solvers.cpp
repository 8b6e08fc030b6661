#include "ptcyl/elliptic/solvers.hpp"

#include <stdexcept>

namespace ptcyl::elliptic {

using spectral::Discretization;
using spectral::SpectralField;
using spectral::ZParity;
using Cd = std::complex<double>;

Eigen::RowVectorXd radial_row(const Discretization& d, int rc,
                              RadialRowKind kind) {
  switch (kind) {
    case RadialRowKind::WallValue:
      return d.wall_value_row(rc);
    case RadialRowKind::WallDeriv:
      return d.wall_deriv_row(rc);
    case RadialRowKind::AxisValue:
      if (rc != 0)
        throw std::invalid_argument("axis-value row requires class 0");
      return d.axis_value_row();
    case RadialRowKind::Integral:
      if (rc != 0)
        throw std::invalid_argument("integral row requires class 0");
      return d.integral_row();
  }
  throw std::logic_error("unknown radial row kind");
}

PoissonHSolver::PoissonHSolver(const Discretization& d, int rc,
                               ZParity zp, RadialRowKind kind)
    : d_(d), rc_(rc), zp_(zp) {
  const int nr = d.spec().nrad(rc);
  Eigen::MatrixXd M = d.lap_h(rc);
  M.row(nr - 1) = radial_row(d, rc, kind);
  lu_.compute(M.cast<Cd>());
}

SpectralField PoissonHSolver::solve(const SpectralField& rhs,
                                    const Eigen::VectorXcd& bc) const {
  const int nr = d_.spec().nrad(rc_);
  if (rhs.rc != rc_ || rhs.zp != zp_)
    throw std::invalid_argument("PoissonHSolver: field shape mismatch");
  Eigen::MatrixXcd B = rhs.coeff.transpose(); // nr x K2
  B.row(nr - 1) = bc.transpose();
  Eigen::MatrixXcd X = lu_.solve(B);
  SpectralField f = SpectralField::zero(d_.spec(), rhs.m, rc_, zp_);
  f.coeff = X.transpose();
  return f;
}

HelmholtzSolver::HelmholtzSolver(const Discretization& d, int rc,
                                 ZParity zp, RadialRowKind kind, double mu,
                                 CornerMode corner)
    : d_(d), rc_(rc), zp_(zp), mu_(mu), corner_(corner),
      row_(radial_row(d, rc, kind)) {
  const int K2 = d.spec().kpack();
  const int nr = d.spec().nrad(rc);
  const int R = K2 - 1; // reduced axial dimension

  // Difference basis P (columns T_{j+1} - T_0 in packed indexing) and the
  // reduced operator (TP)^-1 T D2 P.
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(K2, R);
  for (int j = 0; j < R; ++j) {
    P(0, j) = -1.0;
    P(j + 1, j) = 1.0;
  }
  Eigen::MatrixXd TP = P.topRows(R);
  Eigen::PartialPivLU<Eigen::MatrixXd> tp_real(TP);
  const Eigen::MatrixXd& D2 = d.deriv2_z(spectral::parity_index(zp));
  Eigen::MatrixXd A = tp_real.solve(D2.topRows(R) * P);

  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("axial eigendecomposition failed");
  s_ = es.eigenvectors();
  lam_ = es.eigenvalues();
  sinv_ = Eigen::PartialPivLU<Eigen::MatrixXcd>(s_).inverse();

  tp_lu_.compute(TP.cast<Cd>());
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(R);
  e1[0] = 1.0; // T e for the lift (T_0 or T_1)
  te_ = tp_real.solve(e1).cast<Cd>();

  lh_c_ = d.lap_h(rc).cast<Cd>();
  row_c_ = row_.cast<Cd>();

  radial_lu_.reserve(R);
  for (int j = 0; j < R; ++j) {
    Eigen::MatrixXcd M =
        (Cd(mu_, 0.0) - lam_[j]) * Eigen::MatrixXcd::Identity(nr, nr) - lh_c_;
    M.row(nr - 1) = row_c_;
    radial_lu_.emplace_back(M);
  }

  if (corner_ == CornerMode::WallExact) {
    Eigen::VectorXcd e_top = Eigen::VectorXcd::Zero(nr);
    e_top[nr - 1] = 1.0;
    top_disk_resp_ = solve_core(Eigen::MatrixXcd::Zero(K2, nr), e_top,
                                Eigen::VectorXcd::Zero(K2));
    top_disk_corner_ = (top_disk_resp_ * row_c_.transpose())(K2 - 1);
    if (std::abs(top_disk_corner_) == 0.0)
      throw std::runtime_error(
          "degenerate corner response; wall-exact mode unavailable");
  } else if (corner_ == CornerMode::PdeExact) {
    if (K2 < 2)
      throw std::invalid_argument("pde-exact corner needs at least two "
                                  "packed axial coefficients");
    // The unit response of the corner degree of freedom is exactly the
    // corner monomial: its disk trace is e_top, its wall trace lives in the
    // dropped corner slot, and its operator image touches only replaced
    // equations plus the retained one, where it contributes -d2(K2-2,K2-1).
    top_disk_resp_ = Eigen::MatrixXcd::Zero(K2, nr);
    top_disk_resp_(K2 - 1, nr - 1) = 1.0;
    const Eigen::MatrixXd& D2f = d.deriv2_z(spectral::parity_index(zp));
    pde_d2_row_ = D2f.row(K2 - 2);
    pde_lh_row_ = d.lap_h(rc).row(nr - 1);
    pde_rho_ = -pde_d2_row_[K2 - 1];
    if (pde_rho_ == 0.0)
      throw std::runtime_error(
          "degenerate retained equation; pde-exact mode unavailable");
  }
}

Eigen::MatrixXcd HelmholtzSolver::solve_core(const Eigen::MatrixXcd& rhs,
                                             const Eigen::VectorXcd& disk,
                                             const Eigen::VectorXcd& wall) const {
  const int K2 = d_.spec().kpack();
  const int nr = d_.spec().nrad(rc_);
  const int R = K2 - 1;

  // Reduced right-hand side with the lift contribution moved across.
  Eigen::MatrixXcd Rt = tp_lu_.solve(rhs.topRows(R).eval());
  Eigen::VectorXcd hb = Cd(mu_, 0.0) * disk - lh_c_ * disk;
  Rt.noalias() -= te_ * hb.transpose();
  Eigen::MatrixXcd Rh = sinv_ * Rt;

  // Radial boundary data in the reduced eigenbasis.
  const Cd rho_b = (row_c_ * disk)(0);
  Eigen::VectorXcd tmp = wall.head(R);
  tmp[0] -= rho_b;
  Eigen::VectorXcd gam = sinv_ * tp_lu_.solve(tmp);

  Eigen::MatrixXcd Chat(R, nr);
  Eigen::VectorXcd rvec(nr);
  for (int j = 0; j < R; ++j) {
    rvec = Rh.row(j).transpose();
    rvec[nr - 1] = gam[j];
    Chat.row(j) = radial_lu_[j].solve(rvec).transpose();
  }
  Eigen::MatrixXcd C = s_ * Chat;

  Eigen::MatrixXcd out(K2, nr);
  out.row(0) = disk.transpose() - C.colwise().sum();
  out.bottomRows(R) = C;
  return out;
}

SpectralField HelmholtzSolver::solve(const SpectralField& rhs,
                                     const Eigen::VectorXcd& disk,
                                     const Eigen::VectorXcd& wall) const {
  const int K2 = d_.spec().kpack();
  const int nr = d_.spec().nrad(rc_);
  if (rhs.rc != rc_ || rhs.zp != zp_)
    throw std::invalid_argument("HelmholtzSolver: field shape mismatch");
  if (disk.size() != nr || wall.size() != K2)
    throw std::invalid_argument("HelmholtzSolver: boundary data size");

  Eigen::MatrixXcd out;
  if (corner_ == CornerMode::PdeExact) {
    Eigen::VectorXcd disk_head = disk;
    disk_head[nr - 1] = 0.0;
    out = solve_core(rhs.coeff, disk_head, wall);
    // Close the corner coefficient from the retained interior equation at
    // (second-highest axial, highest radial) wavenumber.
    const Cd resid = Cd(mu_, 0.0) * out(K2 - 2, nr - 1) -
                     (pde_d2_row_.cast<Cd>() * out.col(nr - 1))(0) -
                     (out.row(K2 - 2) * pde_lh_row_.cast<Cd>().transpose())(0) -
                     rhs.coeff(K2 - 2, nr - 1);
    out -= (resid / pde_rho_) * top_disk_resp_;
  } else {
    out = solve_core(rhs.coeff, disk, wall);
    if (corner_ == CornerMode::WallExact) {
      const Cd corner = (out * row_c_.transpose())(K2 - 1);
      const Cd t = (wall[K2 - 1] - corner) / top_disk_corner_;
      out += t * top_disk_resp_;
    }
  }

  SpectralField f = SpectralField::zero(d_.spec(), rhs.m, rc_, zp_);
  f.coeff = out;
  return f;
}

} // namespace ptcyl::elliptic
