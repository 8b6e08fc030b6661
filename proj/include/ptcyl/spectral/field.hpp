// SpectralField: one azimuthal mode of a scalar field with definite axial
// parity and a declared radial class, plus the meridional transforms between
// coefficients and the quadrature grid.

#pragma once

#include <complex>

#include "ptcyl/spectral/discretization.hpp"

namespace ptcyl::spectral {

enum class ZParity { Even = 0, Odd = 1 };

inline int parity_index(ZParity p) { return static_cast<int>(p); }
inline ZParity flip(ZParity p) {
  return p == ZParity::Even ? ZParity::Odd : ZParity::Even;
}

// coeff(k, j) multiplies T_{2k+o}(2z/h) * Q_{rc+2j}^{rc}(r) * exp(i m theta),
// where o = 0 for even parity and 1 for odd.
struct SpectralField {
  int m = 0;
  int rc = 0;
  ZParity zp = ZParity::Even;
  Eigen::MatrixXcd coeff; // kpack() rows, nrad(rc) cols

  static SpectralField zero(const BasisSpec& spec, int m, int rc, ZParity zp);
  static SpectralField zero_like(const SpectralField& f);
  bool same_shape(const SpectralField& o) const {
    return m == o.m && rc == o.rc && zp == o.zp;
  }
};

// Values of the mode on the quadrature grid, z index first: (nz x nr) matrix.
Eigen::MatrixXcd synth_grid(const Discretization& d, const SpectralField& f);

// Projection of grid values (nz x nr) onto class rc, all K axial modes.
Eigen::MatrixXcd analyze_full(const Discretization& d, int rc,
                              const Eigen::MatrixXcd& grid);

// Parity split of a full K x nr coefficient block into packed fields.
SpectralField take_parity(const BasisSpec& spec, int m, int rc,
                          const Eigen::MatrixXcd& full, ZParity zp);

// Point evaluation (r in [0,1], z in [-h/2, h/2]).
std::complex<double> evaluate(const Discretization& d, const SpectralField& f,
                              double r, double z);

} // namespace ptcyl::spectral
