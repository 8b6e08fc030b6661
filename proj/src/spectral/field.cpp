#include "ptcyl/spectral/field.hpp"

#include <stdexcept>

namespace ptcyl::spectral {

SpectralField SpectralField::zero(const BasisSpec& spec, int m, int rc,
                                  ZParity zp) {
  SpectralField f;
  f.m = m;
  f.rc = rc;
  f.zp = zp;
  f.coeff = Eigen::MatrixXcd::Zero(spec.kpack(), spec.nrad(rc));
  return f;
}

SpectralField SpectralField::zero_like(const SpectralField& f) {
  SpectralField g = f;
  g.coeff.setZero();
  return g;
}

Eigen::MatrixXcd synth_grid(const Discretization& d, const SpectralField& f) {
  return d.synth_z(parity_index(f.zp)) * f.coeff *
         d.synth_r(f.rc).transpose();
}

Eigen::MatrixXcd analyze_full(const Discretization& d, int rc,
                              const Eigen::MatrixXcd& grid) {
  if (grid.rows() != d.nz_nodes() || grid.cols() != d.nr_nodes())
    throw std::invalid_argument("analyze_full: grid shape mismatch");
  return d.analyze_z_full() * grid * d.analyze_r(rc).transpose();
}

SpectralField take_parity(const BasisSpec& spec, int m, int rc,
                          const Eigen::MatrixXcd& full, ZParity zp) {
  SpectralField f = SpectralField::zero(spec, m, rc, zp);
  const int o = parity_index(zp);
  for (int k = 0; k < spec.kpack(); ++k) f.coeff.row(k) = full.row(2 * k + o);
  return f;
}

std::complex<double> evaluate(const Discretization& d, const SpectralField& f,
                              double r, double z) {
  const BasisSpec& spec = d.spec();
  Eigen::VectorXd q, dq, t;
  radial_eval(spec, f.rc, r, q, dq);
  chebyshev_eval(spec.K - 1, 2.0 * z / spec.h, t);
  Eigen::VectorXd tz(spec.kpack());
  const int o = parity_index(f.zp);
  for (int k = 0; k < spec.kpack(); ++k) tz[k] = t[2 * k + o];
  return tz.transpose() * f.coeff * q;
}

} // namespace ptcyl::spectral
