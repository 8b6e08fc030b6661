// Potential state of one solenoidal vector field: psi/phi pairs for every
// azimuthal mode and both axial reflection classes.  The gauge freedoms are
// fixed by the solvers that produce the potentials (phi vanishes at the
// wall; the axisymmetric psi vanishes on the axis).

#pragma once

#include "ptcyl/hydro/tableau.hpp"

#include <array>
#include <vector>

namespace ptcyl::hydro {

struct PotentialState {
  // [m][parity index]; psi carries psi_parity, phi the opposite.
  std::vector<std::array<spectral::SpectralField, 2>> psi, phi;

  static PotentialState zero(const spectral::BasisSpec& spec) {
    PotentialState st;
    const int nm = spec.mmax() + 1;
    st.psi.resize(nm);
    st.phi.resize(nm);
    for (int m = 0; m < nm; ++m)
      for (int pi = 0; pi < 2; ++pi) {
        const FlowParity p = flow_parity(pi);
        st.psi[m][pi] =
            spectral::SpectralField::zero(spec, m, m, psi_parity(p));
        st.phi[m][pi] =
            spectral::SpectralField::zero(spec, m, m, phi_parity(p));
      }
    return st;
  }

  int nmodes() const { return static_cast<int>(psi.size()); }
};

} // namespace ptcyl::hydro
