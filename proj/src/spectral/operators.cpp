#include "ptcyl/spectral/operators.hpp"

#include <stdexcept>

namespace ptcyl::spectral {

namespace {
const std::complex<double> kI(0.0, 1.0);

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}
} // namespace

SpectralField dz(const Discretization& d, const SpectralField& f) {
  SpectralField g;
  g.m = f.m;
  g.rc = f.rc;
  g.zp = flip(f.zp);
  g.coeff = d.deriv_z(parity_index(f.zp)) * f.coeff;
  return g;
}

SpectralField dz2(const Discretization& d, const SpectralField& f) {
  SpectralField g = f;
  g.coeff = d.deriv2_z(parity_index(f.zp)) * f.coeff;
  return g;
}

SpectralField lap_h(const Discretization& d, const SpectralField& f) {
  SpectralField g = f;
  g.coeff = f.coeff * d.lap_h(f.rc).transpose();
  return g;
}

SpectralField laplacian(const Discretization& d, const SpectralField& f) {
  SpectralField g = lap_h(d, f);
  g.coeff += d.deriv2_z(parity_index(f.zp)) * f.coeff;
  return g;
}

SpectralField raise(const Discretization& d, const SpectralField& f) {
  SpectralField g;
  g.m = f.m;
  g.rc = f.rc + 1;
  g.zp = f.zp;
  g.coeff = f.coeff * d.raise_op(f.rc).transpose();
  return g;
}

SpectralField lower(const Discretization& d, const SpectralField& f) {
  require(f.rc >= 1, "lower: class must be >= 1");
  SpectralField g;
  g.m = f.m;
  g.rc = f.rc - 1;
  g.zp = f.zp;
  g.coeff = f.coeff * d.lower_op(f.rc).transpose();
  return g;
}

SpectralField dr(const Discretization& d, const SpectralField& f) {
  SpectralField g;
  g.m = f.m;
  g.rc = (f.rc >= 1) ? f.rc - 1 : 1;
  g.zp = f.zp;
  g.coeff = f.coeff * d.dr_op(f.rc).transpose();
  return g;
}

SpectralField dtheta_over_r(const Discretization& d, const SpectralField& f) {
  require(f.rc >= 1 || f.m == 0, "dtheta_over_r: class 0 requires m = 0");
  if (f.m == 0) {
    SpectralField g = f;
    if (f.rc >= 1) {
      g.rc = f.rc - 1;
      g.coeff = Eigen::MatrixXcd::Zero(f.coeff.rows(),
                                       d.spec().nrad(f.rc - 1));
    } else {
      g.coeff.setZero();
    }
    return g;
  }
  SpectralField g;
  g.m = f.m;
  g.rc = f.rc - 1;
  g.zp = f.zp;
  g.coeff = (kI * static_cast<double>(f.m)) *
            (f.coeff * d.over_r(f.rc).transpose());
  return g;
}

SpectralField scaled(const SpectralField& f, std::complex<double> a) {
  SpectralField g = f;
  g.coeff *= a;
  return g;
}

SpectralField added(const SpectralField& a, const SpectralField& b) {
  require(a.same_shape(b), "added: shape mismatch");
  SpectralField g = a;
  g.coeff += b.coeff;
  return g;
}

Eigen::VectorXcd wall_trace(const Discretization& d, const SpectralField& f) {
  return f.coeff * d.wall_value_row(f.rc).transpose();
}

Eigen::VectorXcd wall_trace_dr(const Discretization& d,
                               const SpectralField& f) {
  return f.coeff * d.wall_deriv_row(f.rc).transpose();
}

Eigen::VectorXcd disk_trace(const SpectralField& f) {
  return f.coeff.colwise().sum().transpose();
}

VectorPM field_from_potentials(const Discretization& d,
                               const SpectralField& psi,
                               const SpectralField& phi) {
  require(psi.m == phi.m, "potentials: mode mismatch");
  require(psi.rc == psi.m && phi.rc == phi.m, "potentials: class must be m");
  require(psi.zp == flip(phi.zp), "potentials: parities must be opposite");
  const int m = psi.m;
  SpectralField a = dz(d, phi); // same parity as psi now

  VectorPM v;
  SpectralField ap = added(a, scaled(psi, -kI));
  v.plus = raise(d, ap);
  SpectralField am = added(a, scaled(psi, kI));
  if (m >= 1)
    v.minus = lower(d, am);
  else
    v.minus = raise(d, am);
  v.zc = scaled(lap_h(d, phi), -1.0);
  return v;
}

void curl_potentials(const Discretization& d, const SpectralField& psi,
                     const SpectralField& phi, SpectralField& psi_c,
                     SpectralField& phi_c) {
  psi_c = scaled(laplacian(d, phi), -1.0);
  phi_c = psi;
}

namespace {
// Applies the two divergence-like contractions.  sign = +1 gives div_h,
// the axial-curl variant divides the minus term with opposite sign and i.
SpectralField contract_pm(const Discretization& d, const VectorPM& v,
                          bool curl_variant) {
  const int m = v.zc.m;
  require(v.plus.rc == m + 1, "contract: plus class mismatch");
  require(v.minus.rc == (m >= 1 ? m - 1 : 1), "contract: minus class mismatch");
  require(v.plus.zp == v.minus.zp, "contract: parity mismatch");
  SpectralField lp = lower(d, v.plus); // class m
  SpectralField rm = (m >= 1) ? raise(d, v.minus) : lower(d, v.minus);
  SpectralField out;
  if (!curl_variant) {
    out = added(scaled(lp, 0.5), scaled(rm, 0.5));
  } else {
    // (1/2i)(lower(F+) - raise(F-))
    const std::complex<double> half_over_i(0.0, -0.5);
    out = added(scaled(lp, half_over_i), scaled(rm, -half_over_i));
  }
  out.m = m;
  return out;
}
} // namespace

SpectralField div_h(const Discretization& d, const VectorPM& v) {
  return contract_pm(d, v, false);
}

SpectralField curl_z(const Discretization& d, const VectorPM& v) {
  return contract_pm(d, v, true);
}

SpectralField divergence(const Discretization& d, const VectorPM& v) {
  SpectralField dh = div_h(d, v);
  SpectralField dzz = dz(d, v.zc);
  require(dh.zp == dzz.zp, "divergence: parity mismatch");
  return added(dh, dzz);
}

double scalar_l2sq(const Discretization& d, const SpectralField& f) {
  const Eigen::MatrixXd& G = d.gram_z(parity_index(f.zp));
  const Eigen::VectorXd& gamma = d.radial_norms(f.rc);
  double s = 0.0;
  for (int j = 0; j < f.coeff.cols(); ++j) {
    const Eigen::VectorXcd col = f.coeff.col(j);
    s += gamma[j] * (col.adjoint() * (G * col))(0).real();
  }
  return s;
}

double vector_l2sq(const Discretization& d, const VectorPM& v) {
  return 0.5 * (scalar_l2sq(d, v.plus) + scalar_l2sq(d, v.minus)) +
         scalar_l2sq(d, v.zc);
}

double azimuthal_weight(int m) {
  constexpr double kTwoPi = 6.28318530717958647692;
  return (m == 0) ? kTwoPi : 2.0 * kTwoPi;
}

} // namespace ptcyl::spectral
