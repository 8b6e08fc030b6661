// Exterior vacuum field of the magnetic problem, represented as a
// single-layer potential on the cylinder surface, and the resulting
// Dirichlet-to-Neumann map used by the magnetic matching conditions.
//
// One azimuthal mode at a time, the potential outside the cylinder is
//   phi(x) = int_S sigma(x') / (4 pi |x - x'|) dS',
// which is harmonic outside, decays at infinity, and is continuous up to
// the surface.  The map is exchanged with the rest of the solver through
// collocation rings: Chebyshev points in z on the side wall and radial
// Gauss nodes on both disks (the same node family as the interior radial
// grid, so disk ring values convert to radial coefficients exactly).  Both
// ring sets stay clear of the corner circles, where the exterior edge
// makes the layer density singular (it blows up like the -1/3 power of
// the distance to the rim).
//
// Because of that rim singularity the density is *solved for* on a finer
// internal grid: each surface section is split into composite Gauss
// panels whose sizes shrink dyadically toward the corner circles, far
// enough that the unresolved corner sliver is below the target accuracy.
// Dirichlet ring data is lifted to the internal grid spectrally
// (Chebyshev in z on the wall; on the disks the known r^m prefactor of an
// azimuthal mode is peeled off and the rest projected on Legendre
// polynomials), the first-kind system is collocated at the internal
// nodes, and the unknowns are the weighted charges sigma*w, which keeps
// the matrix entries of uniform size despite the huge dynamic range of
// the graded weights.
//
// The azimuthal direction is integrated out analytically: the mode-m ring
// kernels reduce to half-integer Legendre functions Q_{m-1/2} evaluated by
// complete elliptic integrals (near rings) or a hypergeometric tail series
// (distant rings).  A slow adaptive-quadrature evaluation of the same
// reduction is kept alongside as an independent cross-check.
//
// Matrix rows integrate the kernel against the panel Lagrange basis:
// plain node products for panels well separated from the evaluation
// point, adaptive product integration for panels within a couple of panel
// lengths of it (splitting at the point itself when it lies inside the
// panel, which tames the logarithmic ring-kernel singularity).  Normal
// derivatives on the surface take the exterior limit, which adds the
// classical half-density jump to the principal-value part; the density at
// an off-node ring comes from the Lagrange interpolant of its panel.
//
// apply() maps Dirichlet boundary values (on the rings) of the exterior
// potential to its normal-derivative values: d/dr on the wall rings and
// d/dz on both disks' rings.  The composed matrices of that map are
// exposed for monolithic couplings.

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ptcyl::magnetic {

// Collocation rings ordered [bottom disk | wall | top disk], radius
// ascending on the disks and z ascending on the wall.  w holds the surface
// quadrature weight of each ring with the 2 pi theta factor left inside the
// kernels: disk weights approximate int f(r) r dr, wall weights int f(z) dz.
struct SurfaceRings {
  double h = 1.0;
  int nd = 0; // rings per disk
  int nw = 0; // rings on the wall
  Eigen::VectorXd r, z, w;

  int total() const { return 2 * nd + nw; }
  int wall_begin() const { return nd; }
  int top_begin() const { return nd + nw; }
};

SurfaceRings surface_rings(double h, int nw, int nd);

// Mode-m ring kernels between a target point (r, z) and a source ring
// (rp, zp): the value kernel and its target-gradient.  value() is
// (1/4pi) int_0^{2pi} cos(m a) / |x - x'(a)| da.
struct RingKernel {
  double value = 0.0;
  double d_r = 0.0;
  double d_z = 0.0;
};

RingKernel ring_kernel(int m, double r, double z, double rp, double zp);

// Reference evaluation of the value kernel by adaptive quadrature over the
// source angle; slow, used only to validate the closed form.
double ring_kernel_quadrature(int m, double r, double z, double rp,
                              double zp, double tol = 1e-13);

struct DtnResult {
  Eigen::VectorXcd dr_wall;   // d phi/dr at the wall rings
  Eigen::VectorXcd dz_top;    // d phi/dz at the top-disk rings
  Eigen::VectorXcd dz_bottom; // d phi/dz at the bottom-disk rings
};

class DtnMap {
public:
  DtnMap(int m, const SurfaceRings& rings, int threads = 1);

  int m() const { return m_; }
  const SurfaceRings& rings() const { return rings_; }
  // Estimated condition number of the internal single-layer system.
  double condition() const { return cond_; }
  // Number of internal solve nodes (diagnostic).
  int internal_size() const { return static_cast<int>(wi_.size()); }

  // Weighted layer charges (density times internal quadrature weight, at
  // the internal nodes) reproducing the given Dirichlet ring values.
  Eigen::VectorXcd density(const Eigen::VectorXcd& dirichlet) const;

  // Dirichlet ring values -> exterior normal-derivative ring values.
  DtnResult apply(const Eigen::VectorXcd& dirichlet) const;

  // Exterior potential of a charge vector at a point off the surface
  // (plain quadrature sum; accurate away from the surface).
  std::complex<double> potential(const Eigen::VectorXcd& charges, double r,
                                 double z) const;

  // Composed maps from Dirichlet ring values to normal-derivative ring
  // values, for monolithic couplings and diagnostics.
  const Eigen::MatrixXd& fr_matrix() const { return fr_; }
  const Eigen::MatrixXd& fz_top_matrix() const { return fzt_; }
  const Eigen::MatrixXd& fz_bottom_matrix() const { return fzb_; }

private:
  int m_;
  SurfaceRings rings_;
  Eigen::VectorXd ri_, zi_, wi_;       // internal panel nodes
  Eigen::MatrixXd interp_;             // ring data -> internal node data
  Eigen::MatrixXd fr_, fzt_, fzb_;     // composed DtN matrices
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double cond_ = 0.0;
};

} // namespace ptcyl::magnetic
