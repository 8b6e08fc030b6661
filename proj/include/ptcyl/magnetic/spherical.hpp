// Diagnostic for the rejected exterior representation: expanding the vacuum
// potential of one azimuthal mode in decaying solid harmonics
//   rho^{-(l+1)} P_l^m(cos xi),  rho^2 = r^2 + z^2,  xi = atan(r/z),
// sampled on the surface collocation rings.  On a non-spherical boundary
// rho varies between rings, so the columns behave like monomials in 1/rho
// and the transform's condition number explodes with the truncation L.
// This module only quantifies that failure; nothing in the solve path uses
// the expansion.

#pragma once

#include "ptcyl/magnetic/dtn.hpp"

namespace ptcyl::magnetic {

// Transform matrix from the L coefficients (l = |m| .. |m|+L-1) to ring
// values of the potential.
Eigen::MatrixXd spherical_transform(const SurfaceRings& rings, int L, int m);

// Its 2-norm condition number.
double spherical_condition(const SurfaceRings& rings, int L, int m);

} // namespace ptcyl::magnetic
