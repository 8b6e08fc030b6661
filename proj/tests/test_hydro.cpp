// Velocity-chain checks.  The centerpiece oracle is a dense monolithic
// assembly of one (mode, reflection-class) problem: all five fields and the
// probe unknowns in a single coupled matrix built row by row from the
// operator matrices, bypassing the nested chain entirely.  The influence
// matrix must match its Schur complement, and a linear implicit step taken
// through the two-pass influence procedure must match the direct coupled
// solve.  Quadratic sources are checked pointwise against finite
// differences of the synthesized real velocity field.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "../tests/support/dense_oracle.hpp"
#include "../tests/support/testutil.hpp"
#include "ptcyl/hydro/stepper.hpp"

using namespace ptcyl::spectral;
using namespace ptcyl::hydro;
using ptcyl::testutil::max_abs;
using ptcyl::testutil::random_field;
using Cd = std::complex<double>;

namespace {

constexpr Cd kI{0.0, 1.0};

using ptcyl::testutil::build_dense;
using ptcyl::testutil::DenseCoupled;
using ptcyl::testutil::dense_step_rhs;
using ptcyl::testutil::minnorm_solve;
using ptcyl::testutil::unpack_dense;

// Fields compared modulo the corner monomial of g_phi, which is a pure
// gauge: it changes no other field, no residual, and no velocity component.
void expect_same_chain(const ChainState& a, const DenseCoupled& sys,
                       const Eigen::VectorXcd& x, double tol) {
  auto gauge_free = [&](Eigen::MatrixXcd g) {
    g(sys.K2 - 1, sys.nr - 1) = 0.0;
    return g;
  };
  const double scale =
      1.0 + std::max({max_abs(a.f_psi.coeff), max_abs(a.g_phi.coeff),
                      max_abs(a.psi.coeff)});
  CHECK(max_abs(a.f_psi.coeff - unpack_dense(sys, x, 0)) < tol * scale);
  CHECK(max_abs(a.psi.coeff - unpack_dense(sys, x, 1)) < tol * scale);
  CHECK(max_abs(gauge_free(a.g_phi.coeff) - gauge_free(unpack_dense(sys, x, 2))) <
        tol * scale);
  CHECK(max_abs(a.f_phi.coeff - unpack_dense(sys, x, 3)) < tol * scale);
  CHECK(max_abs(a.phi.coeff - unpack_dense(sys, x, 4)) < tol * scale);
}

// Band-limited random potentials: coefficients confined to the lower half
// of every index so that quadratic products stay inside the retained space.
SpectralField half_band_field(const BasisSpec& spec, int m, int rc, ZParity zp,
                              unsigned seed) {
  SpectralField f = random_field(spec, m, rc, zp, seed);
  for (int k = 0; k < f.coeff.rows(); ++k)
    for (int j = 0; j < f.coeff.cols(); ++j)
      if (2 * k + parity_index(zp) > spec.K / 4 || j > (spec.nrad(rc) - 2) / 2)
        f.coeff(k, j) = 0.0;
  return f;
}

struct RealVec3 {
  double r, th, z;
};

// Real-valued synthesis of a per-mode vector set at a point.
RealVec3 synth_real(const Discretization& d,
                    const std::vector<std::array<VectorPM, 2>>& modes,
                    double r, double th, double z) {
  RealVec3 out{0.0, 0.0, 0.0};
  for (size_t m = 0; m < modes.size(); ++m) {
    Cd vr = 0.0, vt = 0.0, vz = 0.0;
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM& v = modes[m][pi];
      if (v.plus.coeff.size() == 0)
        continue;
      const Cd p = evaluate(d, v.plus, r, z);
      const Cd q = evaluate(d, v.minus, r, z);
      vr += 0.5 * (p + q);
      vt += -0.5 * kI * (p - q);
      vz += evaluate(d, v.zc, r, z);
    }
    const Cd ph = std::exp(kI * double(m) * th);
    const double w = m == 0 ? 1.0 : 2.0;
    out.r += w * std::real(vr * ph);
    out.th += w * std::real(vt * ph);
    out.z += w * std::real(vz * ph);
  }
  return out;
}

std::vector<std::array<VectorPM, 2>> velocity_modes(const Discretization& d,
                                                    const PotentialState& u) {
  std::vector<std::array<VectorPM, 2>> out(u.psi.size());
  for (size_t m = 0; m < u.psi.size(); ++m)
    for (int pi = 0; pi < 2; ++pi)
      out[m][pi] = field_from_potentials(d, u.psi[m][pi], u.phi[m][pi]);
  return out;
}

} // namespace

TEST_SUITE_BEGIN("hydro");

TEST_CASE("influence matrix equals the dense coupled Schur complement") {
  BasisSpec spec{4, 8, 8, 1.4};
  Discretization d(spec);
  const double mu = 50.0;
  for (int m : {0, 1, 2}) {
    for (FlowParity p : {FlowParity::Sym, FlowParity::Anti}) {
      CAPTURE(m);
      CAPTURE(parity_index(p));
      VelocityTableau tab(d, m, p, mu);
      const Eigen::MatrixXcd c_probe = tab.probe_columns();
      const DenseCoupled sys = build_dense(d, m, p, mu);
      REQUIRE(c_probe.rows() == sys.nsig);
      const Eigen::MatrixXcd c_dense = sys.schur();
      const double scale = c_dense.cwiseAbs().maxCoeff();
      CHECK(max_abs(c_probe - c_dense) < 1e-10 * scale);
    }
  }
}

TEST_CASE("linear implicit step matches the dense coupled solve") {
  BasisSpec spec{4, 8, 8, 1.4};
  Discretization d(spec);
  const double mu = 50.0;
  for (int m : {0, 1, 2}) {
    for (FlowParity p : {FlowParity::Sym, FlowParity::Anti}) {
      CAPTURE(m);
      CAPTURE(parity_index(p));
      VelocityTableau tab(d, m, p, mu);
      const SpectralField f_old =
          random_field(spec, m, m, psi_parity(p), 700 + 2 * m);
      const SpectralField g_old =
          random_field(spec, m, m, phi_parity(p), 701 + 2 * m);
      const SpectralField rhs_f = scaled(f_old, mu);
      const SpectralField rhs_g = scaled(g_old, mu);
      const Eigen::VectorXcd disk0 = Eigen::VectorXcd::Zero(spec.nrad(m));

      // Two-pass influence route.
      const Eigen::MatrixXcd cols = tab.probe_columns();
      const auto inf = ptcyl::influence::build_influence(
          m, parity_index(p), tab.blocks(),
          [&cols](int j) { return Eigen::VectorXcd(cols.col(j)); },
          m == 0 ? ptcyl::influence::ScalingMode::RowOnly
                 : ptcyl::influence::ScalingMode::ClosedForm3);
      const Eigen::VectorXcd zero_sig =
          Eigen::VectorXcd::Zero(tab.sigma_size());
      const ChainState part = tab.solve(rhs_f, rhs_g, zero_sig, disk0);
      const Eigen::VectorXcd sigma = -inf.inv.solve(tab.residuals(part));
      const ChainState fin = tab.solve(rhs_f, rhs_g, sigma, disk0);

      // Residuals are annulled by the correction.
      const double res_scale = tab.residuals(part).cwiseAbs().maxCoeff();
      CHECK(tab.residuals(fin).cwiseAbs().maxCoeff() < 1e-11 * res_scale);

      // Dense monolithic route.
      const DenseCoupled sys = build_dense(d, m, p, mu);
      const Eigen::VectorXcd rhs =
          dense_step_rhs(sys, f_old.coeff, mu, g_old.coeff);
      const Eigen::VectorXcd x = minnorm_solve(sys.M, rhs);
      expect_same_chain(fin, sys, x, 1e-10);
    }
  }
}

TEST_CASE("corner null-direction count is resolution invariant") {
  struct Expected {
    int m;
    FlowParity p;
    int zeros;
  };
  const Expected table[] = {{0, FlowParity::Sym, 2},
                            {0, FlowParity::Anti, 2},
                            {1, FlowParity::Sym, 1},
                            {1, FlowParity::Anti, 1},
                            {2, FlowParity::Sym, 1}};
  for (int res : {8, 12, 16}) {
    BasisSpec spec{4, res, res, 1.4};
    Discretization d(spec);
    for (const Expected& e : table) {
      CAPTURE(res);
      CAPTURE(e.m);
      VelocityTableau tab(d, e.m, e.p, 50.0);
      const Eigen::MatrixXcd cols = tab.probe_columns();
      const auto ci = ptcyl::influence::condition_matrix(
          cols, tab.blocks(),
          e.m == 0 ? ptcyl::influence::ScalingMode::RowOnly
                   : ptcyl::influence::ScalingMode::ClosedForm3);
      CHECK(ci.zero_count() == e.zeros);
      CHECK(ci.gap_ok());
    }
  }
}

TEST_CASE("solid-body rotation produces no chain sources") {
  BasisSpec spec{4, 12, 8, 1.4};
  Discretization d(spec);
  PotentialState u = PotentialState::zero(spec);
  // u_theta = r: psi = -r^2/2 (even in z), i.e. -(Q_0 + Q_2)/4.
  u.psi[0][0].coeff(0, 0) = -0.25;
  u.psi[0][0].coeff(0, 1) = -0.25;
  const AdvectionResult adv = compute_advection(d, u);
  const SourceSet src = project_sources(d, adv.source);
  for (int m = 0; m <= spec.mmax(); ++m)
    for (int pi = 0; pi < 2; ++pi) {
      CHECK(max_abs(src.s_psi[m][pi].coeff) < 1e-13);
      CHECK(max_abs(src.s_phi[m][pi].coeff) < 1e-13);
    }
}

TEST_CASE("advection source matches finite differences of u.grad u") {
  BasisSpec spec{4, 16, 10, 1.4};
  Discretization d(spec);
  PotentialState u = PotentialState::zero(spec);
  for (int m : {0, 1})
    for (int pi = 0; pi < 2; ++pi) {
      u.psi[m][pi] = half_band_field(spec, m, m, psi_parity(flow_parity(pi)),
                                     810 + 10 * m + pi);
      u.phi[m][pi] = half_band_field(spec, m, m, phi_parity(flow_parity(pi)),
                                     815 + 10 * m + pi);
      if (m == 0) { // real axisymmetric mode
        u.psi[m][pi].coeff = u.psi[m][pi].coeff.real().cast<Cd>();
        u.phi[m][pi].coeff = u.phi[m][pi].coeff.real().cast<Cd>();
      }
    }
  const AdvectionResult adv = compute_advection(d, u);
  const auto umodes = velocity_modes(d, u);

  const double fd_h = 1e-4;
  const double pts[3][3] = {
      {0.42, 0.9, 0.21}, {0.77, 2.3, -0.37}, {0.15, 4.0, 0.52}};
  for (const auto& pt : pts) {
    const double r = pt[0], th = pt[1], z = pt[2];
    auto vel = [&](double rr, double tt, double zz) {
      return synth_real(d, umodes, rr, tt, zz);
    };
    const RealVec3 v = vel(r, th, z);
    auto fd3 = [&](auto comp) {
      const double dr_ = (comp(vel(r + fd_h, th, z)) -
                          comp(vel(r - fd_h, th, z))) /
                         (2 * fd_h);
      const double dt_ = (comp(vel(r, th + fd_h, z)) -
                          comp(vel(r, th - fd_h, z))) /
                         (2 * fd_h);
      const double dz_ = (comp(vel(r, th, z + fd_h)) -
                          comp(vel(r, th, z - fd_h))) /
                         (2 * fd_h);
      return v.r * dr_ + (v.th / r) * dt_ + v.z * dz_;
    };
    const double s_r =
        fd3([](const RealVec3& a) { return a.r; }) - v.th * v.th / r;
    const double s_t =
        fd3([](const RealVec3& a) { return a.th; }) + v.r * v.th / r;
    const double s_z = fd3([](const RealVec3& a) { return a.z; });

    const RealVec3 s = synth_real(d, adv.source.modes, r, th, z);
    const double scale =
        1.0 + std::abs(s_r) + std::abs(s_t) + std::abs(s_z);
    CHECK(std::abs(s.r - s_r) < 2e-5 * scale);
    CHECK(std::abs(s.th - s_t) < 2e-5 * scale);
    CHECK(std::abs(s.z - s_z) < 2e-5 * scale);
  }
}

TEST_CASE("lorentz sources and wall data match the pure magnetic limit") {
  BasisSpec spec{4, 16, 10, 1.4};
  Discretization d(spec);
  PotentialState u = PotentialState::zero(spec);
  PotentialState b = PotentialState::zero(spec);
  for (int m : {0, 1})
    for (int pi = 0; pi < 2; ++pi) {
      b.psi[m][pi] = half_band_field(spec, m, m, psi_parity(flow_parity(pi)),
                                     870 + 10 * m + pi);
      b.phi[m][pi] = half_band_field(spec, m, m, phi_parity(flow_parity(pi)),
                                     875 + 10 * m + pi);
      if (m == 0) {
        b.psi[m][pi].coeff = b.psi[m][pi].coeff.real().cast<Cd>();
        b.phi[m][pi].coeff = b.phi[m][pi].coeff.real().cast<Cd>();
      }
    }
  const AdvectionResult adv = compute_advection(d, u, &b);
  const auto bmodes = velocity_modes(d, b);

  // With u = 0 the source is -(b.grad b) plus a gradient; check pointwise.
  const double fd_h = 1e-4;
  const double r = 0.58, th = 1.7, z = 0.33;
  auto mag = [&](double rr, double tt, double zz) {
    return synth_real(d, bmodes, rr, tt, zz);
  };
  const RealVec3 w = mag(r, th, z);
  auto fd3 = [&](auto comp) {
    const double dr_ =
        (comp(mag(r + fd_h, th, z)) - comp(mag(r - fd_h, th, z))) / (2 * fd_h);
    const double dt_ =
        (comp(mag(r, th + fd_h, z)) - comp(mag(r, th - fd_h, z))) / (2 * fd_h);
    const double dz_ =
        (comp(mag(r, th, z + fd_h)) - comp(mag(r, th, z - fd_h))) / (2 * fd_h);
    return w.r * dr_ + (w.th / r) * dt_ + w.z * dz_;
  };
  // S = grad(k) - j x B with k including -|B|^2/2; pointwise S must equal
  // -(B.grad B) since (B.grad)B = j x B + grad(|B|^2/2).
  const double s_r =
      -(fd3([](const RealVec3& a) { return a.r; }) - w.th * w.th / r);
  const double s_t =
      -(fd3([](const RealVec3& a) { return a.th; }) + w.r * w.th / r);
  const double s_z = -fd3([](const RealVec3& a) { return a.z; });
  const RealVec3 s = synth_real(d, adv.source.modes, r, th, z);
  const double scale = 1.0 + std::abs(s_r) + std::abs(s_t) + std::abs(s_z);
  CHECK(std::abs(s.r - s_r) < 2e-5 * scale);
  CHECK(std::abs(s.th - s_t) < 2e-5 * scale);
  CHECK(std::abs(s.z - s_z) < 2e-5 * scale);

  // The wall compatibility trace of Y = j x B: since the gradient part
  // contributes nothing to (i m Y_z - dz Y_theta), it equals minus the same
  // combination of the returned source.
  REQUIRE(adv.lorentz_wall.size() == b.psi.size());
  for (int m : {1, 2})
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM& sv = adv.source.modes[m][pi];
      const Eigen::VectorXcd wz = wall_trace(d, sv.zc);
      const Eigen::VectorXcd wth =
          -0.5 * kI *
          (wall_trace(d, sv.plus) - wall_trace(d, sv.minus));
      const Eigen::VectorXcd dz_wth =
          d.deriv_z(parity_index(sv.plus.zp)).cast<Cd>() * wth;
      const Eigen::VectorXcd expect = -(kI * double(m) * wz - dz_wth);
      const Eigen::VectorXcd& got = adv.lorentz_wall[m][pi];
      REQUIRE(got.size() == expect.size());
      const double scale_w = 1.0 + expect.cwiseAbs().maxCoeff();
      CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-11 * scale_w);
    }
}

TEST_CASE("short spin-up run keeps the discrete structure") {
  BasisSpec spec{4, 12, 12, 1.4};
  Discretization d(spec);
  StepperOptions opt;
  opt.re = 100.0;
  opt.dt = 1e-2;
  opt.omega_top = 1.0;
  opt.omega_bottom = -1.0;
  opt.threads = 2;
  VelocityStepper stepper(d, opt);
  StepDiagnostics diag{};
  for (int s = 0; s < 6; ++s) {
    diag = stepper.step();
    CHECK(diag.divergence < 1e-12);
    CHECK(diag.residual_ok);
    CHECK(std::isfinite(diag.energy));
  }
  CHECK(diag.energy > 0.0);
  CHECK(diag.max_bc_residual < 1e-8);
  CHECK(stepper.steps_taken() == 6);

  // Counter-rotation drives only the antisymmetric reflection class as long
  // as the quadratic sources cannot feed back (linear runs).
  StepperOptions lin = opt;
  lin.nonlinear = false;
  lin.threads = 1;
  VelocityStepper stokes(d, lin);
  for (int s = 0; s < 3; ++s)
    stokes.step();
  const PotentialState& st = stokes.state();
  CHECK(max_abs(st.psi[0][0].coeff) < 1e-14);
  CHECK(max_abs(st.phi[0][0].coeff) < 1e-14);
  CHECK(max_abs(st.psi[0][1].coeff) > 1e-6);
}

TEST_CASE("implicit diffusion decays a stokes mode at the viscous rate") {
  // Linear counter-rotation spin-down: with the disks stopped again the
  // stored swirl must decay monotonically under pure diffusion.
  BasisSpec spec{4, 12, 12, 1.4};
  Discretization d(spec);
  StepperOptions opt;
  opt.re = 50.0;
  opt.dt = 2e-2;
  opt.omega_top = 1.0;
  opt.omega_bottom = -1.0;
  opt.nonlinear = false;
  VelocityStepper spin(d, opt);
  for (int s = 0; s < 5; ++s)
    spin.step();
  StepperOptions stop = opt;
  stop.omega_top = stop.omega_bottom = 0.0;
  VelocityStepper decay(d, stop);
  decay.set_state(spin.state());
  double prev = decay.energy();
  CHECK(prev > 0.0);
  for (int s = 0; s < 5; ++s) {
    const StepDiagnostics diag = decay.step();
    CHECK(diag.energy < prev);
    prev = diag.energy;
  }
}

TEST_SUITE_END();
