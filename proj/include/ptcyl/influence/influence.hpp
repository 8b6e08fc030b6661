// Influence matrices: the dense coupling between homogeneous boundary
// probes and the paired boundary residuals of one azimuthal mode and axial
// parity class.
//
// Columns are produced by the owning tableau (velocity or magnetic): probe
// slot j carries a unit coefficient of one probed boundary function, the
// nested elliptic chain is solved with zero volumetric sources, and the
// residual vector it leaves is column j.  The matrix is then equalized,
// decomposed, and regularized once; timestepping only applies the factored
// inverse to the particular residuals.

#pragma once

#include "ptcyl/influence/conditioned_inverse.hpp"

#include <functional>

namespace ptcyl::influence {

struct InfluenceMatrix {
  int m = 0;        // azimuthal mode
  int parity = 0;   // axial parity class index
  std::vector<int> blocks;
  Eigen::MatrixXcd C;
  ConditionedInverse inv;
};

// Assemble columns via probe_response (unit probe slot -> residual vector)
// and condition the result.
InfluenceMatrix build_influence(
    int m, int parity, const std::vector<int>& blocks,
    const std::function<Eigen::VectorXcd(int)>& probe_response,
    ScalingMode mode, const Thresholds& th = {});

} // namespace ptcyl::influence
