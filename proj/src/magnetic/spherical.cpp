#include "ptcyl/magnetic/spherical.hpp"

#include <cmath>
#include <stdexcept>

namespace ptcyl::magnetic {

Eigen::MatrixXd spherical_transform(const SurfaceRings& rings, int L, int m) {
  const int n = rings.total();
  if (L < 1 || L > n)
    throw std::invalid_argument(
        "spherical_transform: truncation must lie in [1, ring count]");
  if (m < 0) throw std::invalid_argument("spherical_transform: m < 0");
  Eigen::MatrixXd t(n, L);
  for (int i = 0; i < n; ++i) {
    const double r = rings.r[i], z = rings.z[i];
    const double rho = std::hypot(r, z);
    const double ct = z / rho; // cos(xi), xi measured from the +z axis
    for (int j = 0; j < L; ++j) {
      const int l = m + j;
      t(i, j) = std::pow(rho, -(l + 1.0)) *
                std::assoc_legendre(static_cast<unsigned>(l),
                                    static_cast<unsigned>(m), ct);
    }
  }
  return t;
}

double spherical_condition(const SurfaceRings& rings, int L, int m) {
  const Eigen::MatrixXd t = spherical_transform(rings, L, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

} // namespace ptcyl::magnetic
