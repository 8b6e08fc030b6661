// Shared helpers for the unit tests: deterministic random fields, finite
// difference stencils on point evaluations, and dense reference transforms.

#pragma once

#include <complex>
#include <functional>
#include <random>

#include "ptcyl/spectral/field.hpp"
#include "ptcyl/spectral/operators.hpp"

namespace ptcyl::testutil {

using spectral::Discretization;
using spectral::SpectralField;
using spectral::ZParity;
using Cd = std::complex<double>;

// Random field with smoothly decaying coefficients (deterministic).
inline SpectralField random_field(const spectral::BasisSpec& spec, int m,
                                  int rc, ZParity zp, unsigned seed) {
  SpectralField f = SpectralField::zero(spec, m, rc, zp);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < f.coeff.rows(); ++k)
    for (int j = 0; j < f.coeff.cols(); ++j)
      f.coeff(k, j) = Cd(u(gen), u(gen)) * std::exp(-0.4 * (k + j));
  return f;
}

// Central finite differences of a point-evaluated function.
inline Cd fd_d(const std::function<Cd(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}
inline Cd fd_d2(const std::function<Cd(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline double max_abs(const Eigen::MatrixXcd& a) {
  return a.cwiseAbs().maxCoeff();
}

} // namespace ptcyl::testutil
