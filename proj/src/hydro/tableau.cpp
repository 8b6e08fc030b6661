#include "ptcyl/hydro/tableau.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

namespace ptcyl::hydro {

using spectral::Discretization;
using spectral::SpectralField;
using elliptic::CornerMode;
using elliptic::HelmholtzSolver;
using elliptic::PoissonHSolver;
using elliptic::RadialRowKind;

VelocityTableau::VelocityTableau(const Discretization& d, int m, FlowParity p,
                                 double mu)
    : d_(d), m_(m), p_(p), mu_(mu),
      helm_f_(d, m, psi_parity(p),
              m == 0 ? RadialRowKind::Integral : RadialRowKind::WallValue, mu,
              m == 0 ? CornerMode::DiskExact : CornerMode::WallExact),
      pois_psi_(d, m, psi_parity(p),
                m == 0 ? RadialRowKind::AxisValue : RadialRowKind::WallDeriv),
      helm_g_(d, m, phi_parity(p), RadialRowKind::WallValue, mu),
      pois_full_(d, m, phi_parity(p), RadialRowKind::WallValue, 0.0,
                 CornerMode::PdeExact),
      pois_phi_(d, m, phi_parity(p), RadialRowKind::WallValue) {}

std::vector<int> VelocityTableau::blocks() const {
  const int K2 = d_.spec().kpack();
  const int nr = d_.spec().nrad(m_);
  if (m_ == 0) return {K2, nr};
  return {K2, K2, nr};
}

int VelocityTableau::sigma_size() const {
  int total = 0;
  for (int b : blocks()) total += b;
  return total;
}

ChainState VelocityTableau::solve(const SpectralField& rhs_fpsi,
                                  const SpectralField& rhs_gphi,
                                  const Eigen::VectorXcd& sigma,
                                  const Eigen::VectorXcd& disk_fpsi) const {
  const int K2 = d_.spec().kpack();
  const int nr = d_.spec().nrad(m_);
  if (sigma.size() != sigma_size())
    throw std::invalid_argument("VelocityTableau::solve: sigma size");
  if (disk_fpsi.size() != nr)
    throw std::invalid_argument("VelocityTableau::solve: disk data size");

  const Eigen::VectorXcd zero_wall = Eigen::VectorXcd::Zero(K2);
  const Eigen::VectorXcd zero_disk = Eigen::VectorXcd::Zero(nr);
  const Eigen::VectorXcd sigma_f = m_ == 0 ? zero_wall : sigma.head(K2);
  const Eigen::VectorXcd sigma_g = m_ == 0 ? sigma.head(K2) : sigma.segment(K2, K2);
  const Eigen::VectorXcd sigma_d = sigma.tail(nr);

  ChainState s{
      helm_f_.solve(rhs_fpsi, disk_fpsi, sigma_f),
      SpectralField{},
      helm_g_.solve(rhs_gphi, sigma_d, sigma_g),
      SpectralField{},
      SpectralField{},
  };
  s.psi = pois_psi_.solve(s.f_psi, zero_wall);
  // pois_full_ solves (0 - lap) f = rhs, so lap f_phi = g_phi needs -g_phi.
  s.f_phi = pois_full_.solve(spectral::scaled(s.g_phi, -1.0), zero_disk,
                             zero_wall);
  s.phi = pois_phi_.solve(s.f_phi, zero_wall);
  return s;
}

Eigen::VectorXcd VelocityTableau::residuals(const ChainState& s) const {
  using namespace spectral;
  const std::complex<double> im(0.0, static_cast<double>(m_));
  Eigen::VectorXcd c(sigma_size());
  int at = 0;
  if (m_ != 0) {
    c.head(d_.spec().kpack()) =
        wall_trace_dr(d_, dz(d_, s.f_psi)) - im * wall_trace(d_, s.g_phi);
    at = d_.spec().kpack();
  }
  c.segment(at, d_.spec().kpack()) =
      im * wall_trace(d_, s.psi) + wall_trace_dr(d_, dz(d_, s.phi));
  c.tail(d_.spec().nrad(m_)) = disk_trace(dz(d_, s.f_phi));
  return c;
}

double VelocityTableau::trace_residual(const ChainState& s,
                                       const Eigen::VectorXcd& sigma,
                                       const Eigen::VectorXcd& disk_fpsi) const {
  using namespace spectral;
  using Cd = std::complex<double>;
  const int K2 = d_.spec().kpack();
  const int nr = d_.spec().nrad(m_);
  double worst = 0.0;
  auto upd = [&worst](const Eigen::VectorXcd& v) {
    if (v.size())
      worst = std::max(worst, v.cwiseAbs().maxCoeff());
  };
  const Eigen::VectorXcd sigma_g =
      m_ == 0 ? sigma.head(K2) : sigma.segment(K2, K2);
  const Eigen::VectorXcd sigma_d = sigma.tail(nr);

  const Eigen::VectorXcd fdisk = disk_trace(s.f_psi);
  if (m_ == 0) {
    upd(fdisk - disk_fpsi);
    const Eigen::VectorXcd ivals =
        s.f_psi.coeff * d_.integral_row().transpose().cast<Cd>();
    upd(ivals.head(K2 - 1));
    upd(s.psi.coeff * d_.axis_value_row().transpose().cast<Cd>());
  } else {
    upd((fdisk - disk_fpsi).head(nr - 1));
    upd(wall_trace(d_, s.f_psi) - sigma.head(K2));
    upd(wall_trace_dr(d_, s.psi));
  }
  upd(disk_trace(s.g_phi) - sigma_d);
  upd((wall_trace(d_, s.g_phi) - sigma_g).head(K2 - 1));
  upd(disk_trace(s.f_phi).head(nr - 1));
  upd(wall_trace(d_, s.f_phi).head(K2 - 1));
  upd(wall_trace(d_, s.phi));
  return worst;
}

Eigen::MatrixXcd VelocityTableau::probe_columns() const {
  const int n = sigma_size();
  const int nr = d_.spec().nrad(m_);
  const SpectralField zf =
      SpectralField::zero(d_.spec(), m_, m_, psi_parity(p_));
  const SpectralField zg =
      SpectralField::zero(d_.spec(), m_, m_, phi_parity(p_));
  const Eigen::VectorXcd zero_disk = Eigen::VectorXcd::Zero(nr);
  Eigen::MatrixXcd C(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXcd sigma = Eigen::VectorXcd::Zero(n);
    sigma[j] = 1.0;
    C.col(j) = residuals(solve(zf, zg, sigma, zero_disk));
  }
  return C;
}

} // namespace ptcyl::hydro
