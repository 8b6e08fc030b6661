// Quadratic (advection and Lorentz) sources, computed pseudo-spectrally on
// an over-resolved product grid so that every retained coefficient of a
// product of two resolved fields is exact:
//   - radius: Gauss nodes exact for the polynomial products,
//   - axis:   3K/2 Chebyshev points for degree-K z-products,
//   - azimuth: 3*mmax+1 equispaced angles for mode pairs up to 2*mmax.
//
// The source is assembled in rotation form,
//   S = (u.grad)u - (B.grad)B = w x u - j x B + grad k,
//   k = (u.u - B.B)/2,   w = curl u,   j = curl B,
// with the products of complex modes taken without conjugation, so the
// result is the genuine product field of the real-valued synthesis.  The
// gradient part is carried explicitly; the potential projections of grad k
// vanish identically under the discrete operators, so including it changes
// nothing downstream while keeping S itself faithful (its wall traces feed
// the Lorentz compatibility data).
//
// Each azimuthal mode of S is split into the two axial reflection classes:
// the class-p slice has the horizontal components in the psi-parity of p
// and the axial component in the phi-parity of p.

#pragma once

#include "ptcyl/hydro/state.hpp"
#include "ptcyl/spectral/operators.hpp"

#include <array>
#include <vector>

namespace ptcyl::hydro {

// One vector field per (azimuthal mode, reflection class).
struct QuadraticField {
  std::vector<std::array<spectral::VectorPM, 2>> modes; // [m][parity index]
};

struct AdvectionResult {
  QuadraticField source;
  // Wall compatibility trace of the Lorentz part alone, per [m][parity]:
  //   (i m Y_z - dz Y_theta)|_{r=1},  Y = j x B,
  // packed over the K/2 axial slots of the compatibility parity.  Empty
  // when no magnetic field is supplied; the m = 0 entries stay unused.
  std::vector<std::array<Eigen::VectorXcd, 2>> lorentz_wall;
};

// Sources for the vorticity/axial-flow chain of every (m, class):
//   s_psi = e_z . curl S,   s_phi = lap_h S_z - dz div_h S_h.
struct SourceSet {
  std::vector<std::array<spectral::SpectralField, 2>> s_psi, s_phi;
};

AdvectionResult compute_advection(const spectral::Discretization& d,
                                  const PotentialState& u,
                                  const PotentialState* b = nullptr);

SourceSet project_sources(const spectral::Discretization& d,
                          const QuadraticField& s);

} // namespace ptcyl::hydro
