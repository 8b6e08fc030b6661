// Implicit time stepping of the velocity potentials, one backward-Euler
// step per call:
//   (mu - Lap) f_new = mu f_old + Re * S,   mu = Re/dt,
// marched independently for every (azimuthal mode, reflection class) pair
// through the nested elliptic chain, with the quadratic sources treated
// explicitly.  Each pair's step runs in two passes: a particular solve with
// zero probe data, then the influence correction sigma = -C^+ c and the
// final solve.  The corrected residuals and the physical boundary traces
// are evaluated every step as diagnostics.
//
// The disks spin at omega_top/omega_bottom, optionally ramped linearly
// from rest over ramp_time; the spin enters as inhomogeneous disk data of
// the axisymmetric vorticity problem evaluated at the new time level.

#pragma once

#include "ptcyl/hydro/nonlinear.hpp"
#include "ptcyl/hydro/state.hpp"
#include "ptcyl/hydro/tableau.hpp"
#include "ptcyl/influence/influence.hpp"

#include <vector>

namespace ptcyl::hydro {

struct StepperOptions {
  double re = 100.0;
  double dt = 1e-2;
  double omega_top = 1.0;
  double omega_bottom = -1.0;
  bool nonlinear = true;   // include the quadratic sources
  double ramp_time = 0.0;  // 0 = impulsive start
  int threads = 1;         // worker threads over the (m, class) pairs
  influence::Thresholds thresholds{};
};

struct StepDiagnostics {
  double time = 0.0;            // after the step
  double energy = 0.0;
  double divergence = 0.0;      // relative to the contraction scale
  // Worst residual of the full discrete boundary-condition set, relative:
  // every directly imposed trace row of the chains together with the
  // corrected compatibility residuals.
  double max_bc_residual = 0.0;
  double max_corrected_residual = 0.0; // compatibility residual after sigma
  bool residual_ok = true;
};

class VelocityStepper {
public:
  VelocityStepper(const spectral::Discretization& d,
                  const StepperOptions& opt);

  const PotentialState& state() const { return state_; }
  void set_state(const PotentialState& st);
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  long steps_taken() const { return steps_; }

  const VelocityTableau& tableau(int m, int pi) const;
  const influence::InfluenceMatrix& influence_of(int m, int pi) const;

  // Advance one step; with b the Lorentz force enters the sources and the
  // wall compatibility data (b itself is not advanced here).
  StepDiagnostics step(const PotentialState* b = nullptr);

  // Diagnostics of the current state.
  double energy() const;
  double divergence_rel() const;
  // Pointwise no-slip mismatch of the synthesized velocity on boundary
  // nodes, against the current ramped disk speeds.  Informational: with
  // spinning disks and a stationary wall the data are discontinuous at the
  // disk rims, so this stays O(omega) there at any resolution; the trace
  // rows the discretization imposes are tracked by max_bc_residual instead.
  double nodal_slip() const;
  double disk_torque(bool top) const;

  // Ramp factor applied to the disk speeds at time t.
  double ramp_factor(double t) const;

private:
  const spectral::Discretization& d_;
  StepperOptions opt_;
  double mu_;
  std::vector<VelocityTableau> tabs_;            // index 2 m + pi
  std::vector<influence::InfluenceMatrix> infs_; // same layout
  PotentialState state_;
  double time_ = 0.0;
  long steps_ = 0;

  double disk_speed(int pi, double t) const; // parity split of the spins
};

} // namespace ptcyl::hydro
