// Elliptic solvers on the cylinder cross-section in coefficient space.
//
// Two kinds of problem appear in the timestepper, both per azimuthal mode
// and axial parity:
//
//  * PoissonHSolver: the horizontal operator lap_h f = rhs, solved per
//    packed axial slot with the last radial (tau) row replaced by one
//    boundary row.
//
//  * HelmholtzSolver: (mu - lap) f = rhs with Dirichlet disk data and one
//    radial boundary row, diagonalized in the axial direction.  The axial
//    tau space drops the highest packed Chebyshev row; disk data enters
//    through a lift on T_0 (even) or T_1 (odd); the reduced second-derivative
//    operator is eigendecomposed once and every axial eigenmode requires one
//    radial tau solve.  mu = 0 gives the full Poisson solve.
//
// Boundary-row kinds: value or radial derivative at the wall r=1, value at
// the axis r=0 (class 0), or the exact integral row int_0^1 f r dr (class 0,
// used by the axisymmetric compatibility constraint).
//
// Corner convention: the disk trace and the full wall trace overlap in one
// condition (the corner compatibility), so one of the two must yield.
// DiskExact reproduces the disk trace exactly and enforces the radial
// boundary data on the first K/2-1 packed axial coefficients of the r=1
// trace, dropping the corner slot.  WallExact enforces all K/2 coefficients
// of the radial boundary data and instead leaves the highest radial
// coefficient of the disk trace free, via a rank-one update with the
// precomputed response to a unit top disk coefficient.  PdeExact gives the
// corner slot to neither trace: the highest radial coefficient of the disk
// data is ignored and the interior equation at (second-highest axial,
// highest radial) wavenumber is retained instead, closing the corner
// coefficient from the right-hand side.  This keeps the corner value of the
// solution's wall trace informative, which matters when downstream residual
// functionals would otherwise degenerate (it removes a spurious exact zero
// from the influence matrix).

#pragma once

#include "ptcyl/spectral/field.hpp"
#include "ptcyl/spectral/operators.hpp"

namespace ptcyl::elliptic {

enum class RadialRowKind { WallValue, WallDeriv, AxisValue, Integral };

// Which of the two overlapping corner conditions a Helmholtz solve honors
// exactly; see the corner convention note above.
enum class CornerMode { DiskExact, WallExact, PdeExact };

// The boundary row vector over radial coefficients of class rc.
Eigen::RowVectorXd radial_row(const spectral::Discretization& d, int rc,
                              RadialRowKind kind);

class PoissonHSolver {
public:
  PoissonHSolver(const spectral::Discretization& d, int rc,
                 spectral::ZParity zp, RadialRowKind kind);

  // rhs: packed field of class rc (only tau radial rows are imposed);
  // bc: packed axial coefficients of the boundary-row data (length K/2).
  spectral::SpectralField solve(const spectral::SpectralField& rhs,
                                const Eigen::VectorXcd& bc) const;

private:
  const spectral::Discretization& d_;
  int rc_;
  spectral::ZParity zp_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

class HelmholtzSolver {
public:
  HelmholtzSolver(const spectral::Discretization& d, int rc,
                  spectral::ZParity zp, RadialRowKind kind, double mu,
                  CornerMode corner = CornerMode::DiskExact);

  // rhs: packed field (same mode/parity); disk: radial coefficients of the
  // z=+h/2 Dirichlet trace (z=-h/2 follows by parity); wall: packed axial
  // coefficients of the radial boundary-row data (first K/2-1 enforced
  // under DiskExact and PdeExact, all K/2 under WallExact).  PdeExact
  // additionally ignores the highest radial coefficient of disk.
  spectral::SpectralField solve(const spectral::SpectralField& rhs,
                                const Eigen::VectorXcd& disk,
                                const Eigen::VectorXcd& wall) const;

  double mu() const { return mu_; }
  int rc() const { return rc_; }
  spectral::ZParity zp() const { return zp_; }
  CornerMode corner() const { return corner_; }

private:
  Eigen::MatrixXcd solve_core(const Eigen::MatrixXcd& rhs,
                              const Eigen::VectorXcd& disk,
                              const Eigen::VectorXcd& wall) const;

  const spectral::Discretization& d_;
  int rc_;
  spectral::ZParity zp_;
  double mu_;
  CornerMode corner_;
  Eigen::RowVectorXd row_;
  Eigen::MatrixXcd lh_c_;
  Eigen::RowVectorXcd row_c_;

  // WallExact: response to a unit top disk coefficient and its corner
  // boundary-row coefficient.  PdeExact reuses top_disk_resp_ (that response
  // is exactly the corner monomial) together with the retained interior
  // equation's row data.
  Eigen::MatrixXcd top_disk_resp_;
  std::complex<double> top_disk_corner_ = 0.0;
  Eigen::RowVectorXd pde_d2_row_;   // d2 row at the second-highest axial slot
  Eigen::RowVectorXd pde_lh_row_;   // lap_h row at the highest radial slot
  double pde_rho_ = 0.0;            // retained-row coefficient of the corner

  // Axial reduction: (TP)^-1 factored, eigen-structure of the reduced d2.
  Eigen::PartialPivLU<Eigen::MatrixXcd> tp_lu_;
  Eigen::MatrixXcd s_, sinv_;
  Eigen::VectorXcd lam_;
  Eigen::VectorXcd te_; // (TP)^-1 T e

  std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> radial_lu_;
};

} // namespace ptcyl::elliptic
