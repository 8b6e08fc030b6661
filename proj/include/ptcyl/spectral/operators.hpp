// Coefficient-space differential operators and the poloidal-toroidal vector
// calculus.
//
// A solenoidal field is represented by two scalar potentials (psi, phi) of
// the same azimuthal mode m (radial class m, opposite axial parities):
//   F = curl(psi e_z) + curl curl(phi e_z)
//     = (im/r psi + dr dz phi) e_r + (-dr psi + im/r dz phi) e_th
//       - lap_h phi e_z.
// In the rotating-frame components F+- = F_r +- i F_th this collapses to
// single factor-operator applications, which the radial classes make exact:
//   F+ = (dr - m/r)(dz phi - i psi)          class m+1
//   F- = (dr + m/r)(dz phi + i psi)          class m-1   (class 1 for m = 0)
//   Fz = -lap_h phi                          class m
// The curl of such a field is the field of potentials (-lap psi_new = ...,
// see curl_potentials), and horizontal divergence / axial curl of arbitrary
// +-/z component sets are the corresponding factor-operator combinations.

#pragma once

#include "ptcyl/spectral/field.hpp"

namespace ptcyl::spectral {

// --- scalar operators --------------------------------------------------

SpectralField dz(const Discretization& d, const SpectralField& f);
SpectralField dz2(const Discretization& d, const SpectralField& f);
SpectralField lap_h(const Discretization& d, const SpectralField& f);
SpectralField laplacian(const Discretization& d, const SpectralField& f);
// (d/dr - rc/r): class rc -> rc+1.
SpectralField raise(const Discretization& d, const SpectralField& f);
// (d/dr + rc/r): class rc -> rc-1; requires rc >= 1.
SpectralField lower(const Discretization& d, const SpectralField& f);
// d/dr: class rc -> rc-1 (rc>=1) or 0 -> 1.
SpectralField dr(const Discretization& d, const SpectralField& f);
// (1/r) d/dtheta = i m / r: class rc -> rc-1; zero field for m = 0.
SpectralField dtheta_over_r(const Discretization& d, const SpectralField& f);

SpectralField scaled(const SpectralField& f, std::complex<double> a);
SpectralField added(const SpectralField& a, const SpectralField& b);

// --- traces ------------------------------------------------------------

// Wall trace at r=1 as packed axial coefficients (length K/2).
Eigen::VectorXcd wall_trace(const Discretization& d, const SpectralField& f);
Eigen::VectorXcd wall_trace_dr(const Discretization& d, const SpectralField& f);
// Disk trace at z=+h/2 as radial coefficients (length nrad(rc)); the value
// at z=-h/2 is +- the same by parity.
Eigen::VectorXcd disk_trace(const SpectralField& f);

// --- vector fields in +-/z components ----------------------------------

struct VectorPM {
  SpectralField plus;  // F_r + i F_th, class m+1
  SpectralField minus; // F_r - i F_th, class m-1 (1 for m=0)
  SpectralField zc;    // F_z, class m
};

// Solenoidal synthesis from potentials (psi class m, phi class m, opposite
// axial parities).
VectorPM field_from_potentials(const Discretization& d, const SpectralField& psi,
                               const SpectralField& phi);

// Potentials of the curl: curl F has potentials (-lap phi -> psi_c ... )
// namely (psi_c, phi_c) = (-laplacian(phi), psi).
void curl_potentials(const Discretization& d, const SpectralField& psi,
                     const SpectralField& phi, SpectralField& psi_c,
                     SpectralField& phi_c);

// Horizontal divergence (1/r) dr (r F_r) + (1/r) dth F_th, class m.
SpectralField div_h(const Discretization& d, const VectorPM& v);
// Axial curl component e_z . curl F for the horizontal part, class m.
SpectralField curl_z(const Discretization& d, const VectorPM& v);
// Full divergence div F = div_h + dz Fz.
SpectralField divergence(const Discretization& d, const VectorPM& v);

// --- energies ----------------------------------------------------------

// int |f|^2 r dr dz over the meridian (exact, via the diagonal radial Gram
// and the axial Chebyshev Gram).
double scalar_l2sq(const Discretization& d, const SpectralField& f);
// int (|F_r|^2 + |F_th|^2 + |F_z|^2) r dr dz.
double vector_l2sq(const Discretization& d, const VectorPM& v);
// Azimuthal quadrature weight for assembling full-volume integrals from
// per-mode meridional ones: 2 pi for m = 0, 4 pi for m >= 1.
double azimuthal_weight(int m);

} // namespace ptcyl::spectral
