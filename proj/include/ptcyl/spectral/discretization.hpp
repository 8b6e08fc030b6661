// Shared discrete machinery for one BasisSpec: quadrature grids, per-class
// synthesis/analysis matrices, radial operator matrices, axial (Chebyshev)
// derivative and Gram matrices in parity-packed form, and boundary rows.
//
// Transforms are exact projections: the radial grid carries 3N Gauss points
// in x = 2r^2-1, so the weighted Gram matrix of every retained class is its
// exact diagonal and analysis is a diagonally scaled transpose.  Products of
// two retained fields are therefore projected without aliasing.  The axial
// grid carries ceil(3K/2) Chebyshev-Gauss points with the same property
// under the Chebyshev weight.
//
// Radial operator matrices act on coefficient columns of a single class:
//   raise_op(c):  (d/dr - c/r), class c -> c+1
//   lower_op(c):  (d/dr + c/r), class c -> c-1          (c >= 1)
//   dr_op(c):     d/dr, class c -> c-1 (c >= 1) or 0 -> 1
//   over_r(c):    multiplication by 1/r, class c -> c-1 (c >= 1)
//   lap_h(c):     horizontal Laplacian, class c -> c, built as the exact
//                 composition lower_op(c+1) * raise_op(c)
// All of these are exact linear maps between retained polynomial spaces (no
// truncation loss), which is what the divergence-free construction relies on.

#pragma once

#include <vector>

#include "ptcyl/spectral/basis.hpp"

namespace ptcyl::spectral {

class Discretization {
public:
  // Builds class data for c = 0..max_class (default mmax()+1, enough for the
  // vector fields of every retained azimuthal mode).
  explicit Discretization(const BasisSpec& spec, int max_class = -1);

  const BasisSpec& spec() const { return spec_; }
  int max_class() const { return max_class_; }

  // --- radial grid -------------------------------------------------------
  int nr_nodes() const { return static_cast<int>(r_nodes_.size()); }
  const Eigen::VectorXd& r_nodes() const { return r_nodes_; }
  // Weights w_i with sum_i w_i f(r_i) = 4 int_0^1 f r dr (Gauss in x).
  const Eigen::VectorXd& x_weights() const { return x_weights_; }

  // --- axial grid --------------------------------------------------------
  int nz_nodes() const { return static_cast<int>(z_nodes_.size()); }
  const Eigen::VectorXd& z_nodes() const { return z_nodes_; }

  // --- per-class radial matrices ----------------------------------------
  const Eigen::MatrixXd& synth_r(int c) const;   // nodes x nrad(c)
  const Eigen::MatrixXd& analyze_r(int c) const; // nrad(c) x nodes
  const Eigen::MatrixXd& raise_op(int c) const;  // c -> c+1 (c < max_class)
  const Eigen::MatrixXd& lower_op(int c) const;  // c -> c-1 (1 <= c)
  const Eigen::MatrixXd& dr_op(int c) const;     // c -> c-1, or 0 -> 1
  const Eigen::MatrixXd& over_r(int c) const;    // c -> c-1 (1 <= c)
  const Eigen::MatrixXd& lap_h(int c) const;     // c -> c   (c < max_class)
  // Orthogonality norms int Q_j^c Q_j^c r dr (diagonal Gram of the class).
  const Eigen::VectorXd& radial_norms(int c) const;

  // Boundary rows over radial coefficients of class c:
  const Eigen::RowVectorXd& wall_value_row(int c) const; // value at r=1 (ones)
  const Eigen::RowVectorXd& wall_deriv_row(int c) const; // d/dr at r=1
  // Class-0 only: value at r=0 and the exact integral row int_0^1 . r dr.
  const Eigen::RowVectorXd& axis_value_row() const { return axis_row_; }
  const Eigen::RowVectorXd& integral_row() const { return integral_row_; }

  // --- axial matrices (full K space) ------------------------------------
  const Eigen::MatrixXd& synth_z_full() const { return vz_full_; }   // nz x K
  const Eigen::MatrixXd& analyze_z_full() const { return az_full_; } // K x nz
  const Eigen::MatrixXd& deriv_z_full() const { return d1z_full_; }  // K x K

  // --- axial matrices (parity packed; index 0 = even, 1 = odd) ----------
  // Packed slot k' of parity o holds the coefficient of T_{2k'+o}(2z/h).
  const Eigen::MatrixXd& synth_z(int parity) const; // nz x K/2
  const Eigen::MatrixXd& deriv_z(int parity) const; // K/2 x K/2, flips parity
  const Eigen::MatrixXd& deriv2_z(int parity) const; // K/2 x K/2, keeps parity
  // Gram (h/2) int T T dx restricted to one parity (for exact energies).
  const Eigen::MatrixXd& gram_z(int parity) const;

private:
  BasisSpec spec_;
  int max_class_;

  Eigen::VectorXd r_nodes_, x_weights_, z_nodes_;

  std::vector<Eigen::MatrixXd> synth_r_, analyze_r_, raise_, lower_, dr_,
      over_r_, lap_h_;
  std::vector<Eigen::VectorXd> rnorms_;
  std::vector<Eigen::RowVectorXd> wall_val_, wall_der_;
  Eigen::RowVectorXd axis_row_, integral_row_;

  Eigen::MatrixXd vz_full_, az_full_, d1z_full_;
  Eigen::MatrixXd vz_p_[2], d1z_p_[2], d2z_p_[2], gram_z_[2];

  void check_class(int c, int lo) const;
};

} // namespace ptcyl::spectral
