// The nested elliptic chain of one velocity mode.
//
// Each azimuthal mode m and axial reflection class advances through five
// problems per implicit step (mu = Re/dt):
//
//   1. (mu - lap) f_psi = mu f_psi_old + Re S_psi     toroidal vorticity
//        disks: f_psi given (the disk-rotation data for m = 0, zero
//        otherwise); wall (m > 0): probed Dirichlet data sigma_f; m = 0:
//        the exact radial-integral constraint replaces the wall row.
//   2. lap_h psi = f_psi                              toroidal potential
//        m = 0: psi(0) = 0; m > 0: dr psi(1) = 0.
//   3. (mu - lap) g_phi = mu g_phi_old + Re S_phi     poloidal, outer half
//        disks: probed data sigma_g+-; wall: probed data sigma_g.
//   4. lap f_phi = g_phi                              poloidal, inner half
//        homogeneous Dirichlet on the whole boundary.
//   5. lap_h phi = f_phi                              poloidal potential
//        phi(1) = 0.
//
// The probed Dirichlet data stand in for boundary conditions that cannot be
// imposed directly on the split problems; each carries a paired residual
// that the full solution must annul:
//
//   sigma_f  <->  c_f  = (dr dz f_psi - i m g_phi)|_{r=1}
//   sigma_g  <->  c_g  = (i m psi + dr dz phi)|_{r=1}     (radial velocity)
//   sigma_g+- <-> c_g+- = dz f_phi|_{disks}
//
// Corner handling: problem 1 honors its full wall data (m > 0) so that no
// probe coefficient is structurally invisible there; problem 3 reproduces
// its disk data exactly and drops the corner coefficient of the wall data;
// problem 4 retains one interior equation in place of the corner boundary
// row, so the corner content of its disk-normal derivative stays visible to
// the c_g+- residuals.  The one remaining null direction of the influence
// matrix for m > 0 is the dropped corner coefficient of sigma_g, the
// discrete form of the corner redundancy between wall and disk data.
// Axisymmetric modes drop the sigma_f/c_f pair entirely and add a second
// null direction: the top sigma_g+- coefficient only excites a corner
// component of g_phi that no residual and no velocity component sees.

#pragma once

#include "ptcyl/elliptic/solvers.hpp"

namespace ptcyl::hydro {

// Axial reflection class: Sym has psi even in z and phi odd (horizontal
// velocity even, axial velocity odd); Anti is the mirror class.
enum class FlowParity { Sym, Anti };

inline spectral::ZParity psi_parity(FlowParity p) {
  return p == FlowParity::Sym ? spectral::ZParity::Even
                              : spectral::ZParity::Odd;
}
inline spectral::ZParity phi_parity(FlowParity p) {
  return spectral::flip(psi_parity(p));
}
inline int parity_index(FlowParity p) { return p == FlowParity::Sym ? 0 : 1; }
inline FlowParity flow_parity(int index) {
  return index == 0 ? FlowParity::Sym : FlowParity::Anti;
}

// The five fields of one mode after a chain solve.
struct ChainState {
  spectral::SpectralField f_psi, psi, g_phi, f_phi, phi;
};

class VelocityTableau {
public:
  VelocityTableau(const spectral::Discretization& d, int m, FlowParity p,
                  double mu);

  // Probe layout: [sigma_f (m>0 only) | sigma_g | sigma_g+-], packed wall
  // coefficients for the first two, top-disk radial coefficients for the
  // last.
  std::vector<int> blocks() const;
  int sigma_size() const;

  // rhs fields carry parities (psi, phi) of the class; disk_fpsi is the
  // Dirichlet disk data of problem 1 (nonzero only for m = 0).
  ChainState solve(const spectral::SpectralField& rhs_fpsi,
                   const spectral::SpectralField& rhs_gphi,
                   const Eigen::VectorXcd& sigma,
                   const Eigen::VectorXcd& disk_fpsi) const;

  // Paired residuals of a chain solution, in probe layout order.
  Eigen::VectorXcd residuals(const ChainState& s) const;

  // Maximum absolute residual of every boundary row the chain imposes
  // directly, complementing residuals(): the disk and wall/integral data of
  // problem 1, problem 2's axis or wall-derivative row, problem 3's traces
  // against the probe data, and the homogeneous Dirichlet rows of problems
  // 4 and 5 — each restricted to the coefficients its corner convention
  // actually enforces.
  double trace_residual(const ChainState& s, const Eigen::VectorXcd& sigma,
                        const Eigen::VectorXcd& disk_fpsi) const;

  // Response columns of all unit probes (zero sources and disk data).
  Eigen::MatrixXcd probe_columns() const;

  int m() const { return m_; }
  FlowParity parity() const { return p_; }
  double mu() const { return mu_; }
  const spectral::Discretization& disc() const { return d_; }

private:
  const spectral::Discretization& d_;
  int m_;
  FlowParity p_;
  double mu_;

  elliptic::HelmholtzSolver helm_f_;
  elliptic::PoissonHSolver pois_psi_;
  elliptic::HelmholtzSolver helm_g_;
  elliptic::HelmholtzSolver pois_full_; // mu = 0: the full Poisson problem
  elliptic::PoissonHSolver pois_phi_;
};

} // namespace ptcyl::hydro
