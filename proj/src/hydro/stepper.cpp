#include "ptcyl/hydro/stepper.hpp"

#include "ptcyl/spectral/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ptcyl::hydro {

namespace {

using spectral::Discretization;
using spectral::SpectralField;
using spectral::VectorPM;
using Cd = std::complex<double>;
using Eigen::VectorXcd;

// A step is flagged when the corrected compatibility residual fails to
// drop this far below the uncorrected one (or the state scale).
constexpr double kResidualRelTol = 1e-9;

double max_node_abs(const Eigen::VectorXcd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

} // namespace

VelocityStepper::VelocityStepper(const Discretization& d,
                                 const StepperOptions& opt)
    : d_(d), opt_(opt), mu_(opt.re / opt.dt),
      state_(PotentialState::zero(d.spec())) {
  if (!(opt.re > 0.0) || !(opt.dt > 0.0))
    throw std::invalid_argument("stepper needs positive re and dt");
  const int nm = d.spec().mmax() + 1;
  tabs_.reserve(2 * nm);
  infs_.reserve(2 * nm);
  for (int m = 0; m < nm; ++m)
    for (int pi = 0; pi < 2; ++pi) {
      tabs_.emplace_back(d_, m, flow_parity(pi), mu_);
      const VelocityTableau& tab = tabs_.back();
      const Eigen::MatrixXcd cols = tab.probe_columns();
      infs_.push_back(influence::build_influence(
          m, pi, tab.blocks(),
          [&cols](int j) { return VectorXcd(cols.col(j)); },
          m == 0 ? influence::ScalingMode::RowOnly
                 : influence::ScalingMode::ClosedForm3,
          opt_.thresholds));
    }
}

void VelocityStepper::set_state(const PotentialState& st) {
  const int nm = d_.spec().mmax() + 1;
  if (st.nmodes() != nm)
    throw std::invalid_argument("state does not match the basis");
  for (int m = 0; m < nm; ++m)
    for (int pi = 0; pi < 2; ++pi) {
      const bool ok =
          st.psi[m][pi].same_shape(state_.psi[m][pi]) &&
          st.phi[m][pi].same_shape(state_.phi[m][pi]);
      if (!ok)
        throw std::invalid_argument("state field shapes do not match");
    }
  state_ = st;
}

const VelocityTableau& VelocityStepper::tableau(int m, int pi) const {
  return tabs_.at(static_cast<size_t>(2 * m + pi));
}

const influence::InfluenceMatrix& VelocityStepper::influence_of(int m,
                                                                int pi) const {
  return infs_.at(static_cast<size_t>(2 * m + pi));
}

double VelocityStepper::ramp_factor(double t) const {
  if (opt_.ramp_time <= 0.0)
    return 1.0;
  return std::clamp(t / opt_.ramp_time, 0.0, 1.0);
}

double VelocityStepper::disk_speed(int pi, double t) const {
  const double f = ramp_factor(t);
  const double wt = opt_.omega_top * f, wb = opt_.omega_bottom * f;
  return pi == 0 ? 0.5 * (wt + wb) : 0.5 * (wt - wb);
}

StepDiagnostics VelocityStepper::step(const PotentialState* b) {
  const double t_new = time_ + opt_.dt;
  const int K2 = d_.spec().kpack();

  AdvectionResult adv;
  SourceSet src;
  const bool use_sources = opt_.nonlinear;
  if (use_sources) {
    adv = compute_advection(d_, state_, b);
    src = project_sources(d_, adv.source);
  }

  PotentialState next = state_;
  const int nunits = static_cast<int>(tabs_.size());
  std::vector<double> pre(nunits, 0.0), post(nunits, 0.0), traces(nunits, 0.0);

  auto run_unit = [&](int u) {
    const int m = u / 2, pi = u % 2;
    const VelocityTableau& tab = tabs_[static_cast<size_t>(u)];
    SpectralField rhs_f =
        spectral::scaled(spectral::lap_h(d_, state_.psi[m][pi]), Cd(mu_, 0.0));
    SpectralField rhs_g = spectral::scaled(
        spectral::laplacian(d_, spectral::lap_h(d_, state_.phi[m][pi])),
        Cd(mu_, 0.0));
    if (use_sources) {
      rhs_f = spectral::added(
          rhs_f, spectral::scaled(src.s_psi[m][pi], Cd(opt_.re, 0.0)));
      rhs_g = spectral::added(
          rhs_g, spectral::scaled(src.s_phi[m][pi], Cd(opt_.re, 0.0)));
    }
    VectorXcd disk = VectorXcd::Zero(d_.spec().nrad(m));
    if (m == 0)
      disk[0] = -2.0 * disk_speed(pi, t_new);

    const VectorXcd zero_sigma = VectorXcd::Zero(tab.sigma_size());
    const ChainState part = tab.solve(rhs_f, rhs_g, zero_sigma, disk);
    VectorXcd c = tab.residuals(part);
    if (use_sources && b && m > 0)
      c.head(K2) += opt_.re * adv.lorentz_wall[m][pi];
    const VectorXcd sigma = -infs_[static_cast<size_t>(u)].inv.solve(c);
    ChainState fin = tab.solve(rhs_f, rhs_g, sigma, disk);
    VectorXcd c2 = tab.residuals(fin);
    if (use_sources && b && m > 0)
      c2.head(K2) += opt_.re * adv.lorentz_wall[m][pi];
    pre[static_cast<size_t>(u)] = max_node_abs(c);
    post[static_cast<size_t>(u)] = max_node_abs(c2);
    traces[static_cast<size_t>(u)] = tab.trace_residual(fin, sigma, disk);
    next.psi[m][pi] = std::move(fin.psi);
    next.phi[m][pi] = std::move(fin.phi);
  };

  const int nworkers = std::clamp(opt_.threads, 1, nunits);
  if (nworkers > 1) {
    std::atomic<int> cursor{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const int u = cursor.fetch_add(1);
        if (u >= nunits)
          return;
        try {
          run_unit(u);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nworkers));
    for (int i = 0; i < nworkers; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
    if (error)
      std::rethrow_exception(error);
  } else {
    for (int u = 0; u < nunits; ++u)
      run_unit(u);
  }

  // Commit only after every mode advanced.
  state_ = std::move(next);
  time_ = t_new;
  ++steps_;

  StepDiagnostics diag;
  diag.time = time_;
  diag.energy = energy();
  diag.divergence = divergence_rel();
  const double pre_max = *std::max_element(pre.begin(), pre.end());
  const double post_max = *std::max_element(post.begin(), post.end());
  const double trace_max = *std::max_element(traces.begin(), traces.end());
  const double scale =
      std::max({pre_max, std::sqrt(std::max(diag.energy, 0.0)), 1e-300});
  diag.max_corrected_residual = post_max / scale;
  diag.max_bc_residual = std::max(trace_max, post_max) / scale;
  diag.residual_ok = diag.max_corrected_residual <= kResidualRelTol;
  return diag;
}

double VelocityStepper::energy() const {
  double e = 0.0;
  for (int m = 0; m < state_.nmodes(); ++m)
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM v = spectral::field_from_potentials(
          d_, state_.psi[m][pi], state_.phi[m][pi]);
      e += 0.5 * spectral::azimuthal_weight(m) * spectral::vector_l2sq(d_, v);
    }
  return e;
}

double VelocityStepper::divergence_rel() const {
  double num = 0.0, den = 0.0;
  for (int m = 0; m < state_.nmodes(); ++m)
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM v = spectral::field_from_potentials(
          d_, state_.psi[m][pi], state_.phi[m][pi]);
      const double w = spectral::azimuthal_weight(m);
      num += w * spectral::scalar_l2sq(d_, spectral::divergence(d_, v));
      const SpectralField t1 = spectral::lower(d_, v.plus);
      const SpectralField t2 =
          m >= 1 ? spectral::raise(d_, v.minus) : spectral::lower(d_, v.minus);
      const SpectralField t3 = spectral::dz(d_, v.zc);
      den += w * (spectral::scalar_l2sq(d_, t1) + spectral::scalar_l2sq(d_, t2) +
                  spectral::scalar_l2sq(d_, t3));
    }
  if (den <= 0.0)
    return 0.0;
  return std::sqrt(num / den);
}

double VelocityStepper::nodal_slip() const {
  double worst = 0.0;
  const double wscale =
      std::max({std::abs(opt_.omega_top), std::abs(opt_.omega_bottom), 0.0});
  const double scale = wscale > 0.0 ? wscale : 1.0;
  const Cd iunit(0.0, 1.0);
  for (int m = 0; m < state_.nmodes(); ++m)
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM v = spectral::field_from_potentials(
          d_, state_.psi[m][pi], state_.phi[m][pi]);
      for (const SpectralField* f : {&v.plus, &v.minus, &v.zc}) {
        const VectorXcd wt = spectral::wall_trace(d_, *f);
        const Eigen::VectorXcd wall_vals =
            d_.synth_z(spectral::parity_index(f->zp)).cast<Cd>() * wt;
        worst = std::max(worst, max_node_abs(wall_vals));
      }
      // Disk traces: all components vanish except the axisymmetric swirl,
      // which matches the (ramped) disk rotation r * w.
      const VectorXcd dp =
          d_.synth_r(v.plus.rc).cast<Cd>() * spectral::disk_trace(v.plus);
      const VectorXcd dm =
          d_.synth_r(v.minus.rc).cast<Cd>() * spectral::disk_trace(v.minus);
      const VectorXcd dz_ =
          d_.synth_r(v.zc.rc).cast<Cd>() * spectral::disk_trace(v.zc);
      VectorXcd tgt_p = VectorXcd::Zero(dp.size());
      VectorXcd tgt_m = VectorXcd::Zero(dm.size());
      if (m == 0) {
        const double w = disk_speed(pi, time_);
        tgt_p = iunit * w * d_.r_nodes().cast<Cd>();
        tgt_m = -tgt_p;
      }
      worst = std::max({worst, max_node_abs(dp - tgt_p),
                        max_node_abs(dm - tgt_m), max_node_abs(dz_)});
    }
  return worst / scale;
}

double VelocityStepper::disk_torque(bool top) const {
  double torque = 0.0;
  for (int pi = 0; pi < 2; ++pi) {
    const VectorPM v = spectral::field_from_potentials(d_, state_.psi[0][pi],
                                                       state_.phi[0][pi]);
    // u_theta = (u+ - u-)/(2 i); both parts are class 1 at m = 0.
    const SpectralField uth = spectral::scaled(
        spectral::added(v.plus, spectral::scaled(v.minus, Cd(-1.0, 0.0))),
        Cd(0.0, -0.5));
    const SpectralField dzu = spectral::dz(d_, uth);
    const VectorXcd tr = spectral::disk_trace(dzu);
    const Eigen::VectorXcd vals = d_.synth_r(dzu.rc).cast<Cd>() * tr;
    const double bottom_sign =
        dzu.zp == spectral::ZParity::Even ? 1.0 : -1.0;
    double integral = 0.0;
    for (int i = 0; i < vals.size(); ++i)
      integral += d_.x_weights()[i] * vals[i].real() * d_.r_nodes()[i];
    integral *= 0.25; // quadrature gives 4 int f r dr; want int f r^2 dr
    const double orient = top ? 1.0 : -1.0;
    const double side = top ? 1.0 : bottom_sign;
    torque += orient * side * 2.0 * std::numbers::pi / opt_.re * integral;
  }
  return torque;
}

} // namespace ptcyl::hydro
