#include "ptcyl/hydro/nonlinear.hpp"

#include "ptcyl/spectral/field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ptcyl::hydro {

namespace {

using spectral::Discretization;
using spectral::SpectralField;
using spectral::VectorPM;
using Cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Node values of the cylindrical components of every azimuthal mode,
// reflection classes summed: comp[m] is nz x nr.
struct ComponentStack {
  std::vector<MatrixXcd> r, th, z;
};

ComponentStack synth_components(const Discretization& d,
                                const PotentialState& st, bool curl) {
  const int nm = st.nmodes();
  const int nz = d.nz_nodes(), nr = d.nr_nodes();
  ComponentStack out;
  out.r.assign(nm, MatrixXcd::Zero(nz, nr));
  out.th.assign(nm, MatrixXcd::Zero(nz, nr));
  out.z.assign(nm, MatrixXcd::Zero(nz, nr));
  const Cd half(0.5, 0.0), halfi(0.0, -0.5); // 1/(2i) = -i/2
  for (int m = 0; m < nm; ++m)
    for (int pi = 0; pi < 2; ++pi) {
      VectorPM v;
      if (curl) {
        SpectralField cp, cf;
        spectral::curl_potentials(d, st.psi[m][pi], st.phi[m][pi], cp, cf);
        v = spectral::field_from_potentials(d, cp, cf);
      } else {
        v = spectral::field_from_potentials(d, st.psi[m][pi], st.phi[m][pi]);
      }
      const MatrixXcd gp = spectral::synth_grid(d, v.plus);
      const MatrixXcd gm = spectral::synth_grid(d, v.minus);
      out.r[m] += half * (gp + gm);
      out.th[m] += halfi * (gp - gm);
      out.z[m] += spectral::synth_grid(d, v.zc);
    }
  return out;
}

// Real-field synthesis of one scalar stack at azimuth theta:
//   X(theta) = X^0 + sum_{m>=1} X^m e^{i m theta} + conj(X^m) e^{-i m theta}
MatrixXcd at_theta(const std::vector<MatrixXcd>& stack, double theta) {
  MatrixXcd out = stack[0];
  for (int m = 1; m < static_cast<int>(stack.size()); ++m) {
    const Cd e = std::polar(1.0, m * theta);
    out += e * stack[m] + std::conj(e) * stack[m].conjugate();
  }
  return out;
}

struct PolarValues {
  MatrixXcd r, th, z;
};

PolarValues stack_at_theta(const ComponentStack& s, double theta) {
  return {at_theta(s.r, theta), at_theta(s.th, theta), at_theta(s.z, theta)};
}

PolarValues cross(const PolarValues& a, const PolarValues& b) {
  return {a.th.cwiseProduct(b.z) - a.z.cwiseProduct(b.th),
          a.z.cwiseProduct(b.r) - a.r.cwiseProduct(b.z),
          a.r.cwiseProduct(b.th) - a.th.cwiseProduct(b.r)};
}

MatrixXcd dot_self(const PolarValues& a) {
  return a.r.cwiseProduct(a.r) + a.th.cwiseProduct(a.th) +
         a.z.cwiseProduct(a.z);
}

} // namespace

AdvectionResult compute_advection(const Discretization& d,
                                  const PotentialState& u,
                                  const PotentialState* b) {
  const auto& spec = d.spec();
  const int nm = spec.mmax() + 1;
  if (u.nmodes() != nm || (b && b->nmodes() != nm))
    throw std::invalid_argument("potential state does not match the basis");
  const int nz = d.nz_nodes(), nr = d.nr_nodes();
  const int ntheta = 3 * spec.mmax() + 1;

  const ComponentStack ug = synth_components(d, u, false);
  const ComponentStack wg = synth_components(d, u, true);
  ComponentStack bg, jg;
  if (b) {
    bg = synth_components(d, *b, false);
    jg = synth_components(d, *b, true);
  }

  // Azimuthal modes of N = w x u - j x B, of k = (u.u - B.B)/2, and of the
  // Lorentz force Y = j x B, accumulated as a direct discrete transform
  // (alias-free: product modes reach 2*mmax < ntheta - mmax).
  std::vector<MatrixXcd> acc_np(nm, MatrixXcd::Zero(nz, nr));
  std::vector<MatrixXcd> acc_nm(nm, MatrixXcd::Zero(nz, nr));
  std::vector<MatrixXcd> acc_nz(nm, MatrixXcd::Zero(nz, nr));
  std::vector<MatrixXcd> acc_k(nm, MatrixXcd::Zero(nz, nr));
  std::vector<MatrixXcd> acc_yp, acc_ym, acc_yz;
  if (b) {
    acc_yp.assign(nm, MatrixXcd::Zero(nz, nr));
    acc_ym.assign(nm, MatrixXcd::Zero(nz, nr));
    acc_yz.assign(nm, MatrixXcd::Zero(nz, nr));
  }

  const Cd iunit(0.0, 1.0);
  for (int it = 0; it < ntheta; ++it) {
    const double theta = 2.0 * std::numbers::pi * it / ntheta;
    const PolarValues uv = stack_at_theta(ug, theta);
    const PolarValues wv = stack_at_theta(wg, theta);
    PolarValues nv = cross(wv, uv);
    MatrixXcd kv = 0.5 * dot_self(uv);
    PolarValues yv;
    if (b) {
      const PolarValues bv = stack_at_theta(bg, theta);
      const PolarValues jv = stack_at_theta(jg, theta);
      yv = cross(jv, bv);
      nv.r -= yv.r;
      nv.th -= yv.th;
      nv.z -= yv.z;
      kv -= 0.5 * dot_self(bv);
    }
    const MatrixXcd np = nv.r + iunit * nv.th;
    const MatrixXcd nmi = nv.r - iunit * nv.th;
    for (int m = 0; m < nm; ++m) {
      const Cd ph = std::polar(1.0 / ntheta, -m * theta);
      acc_np[m] += ph * np;
      acc_nm[m] += ph * nmi;
      acc_nz[m] += ph * nv.z;
      acc_k[m] += ph * kv;
      if (b) {
        acc_yp[m] += ph * (yv.r + iunit * yv.th);
        acc_ym[m] += ph * (yv.r - iunit * yv.th);
        acc_yz[m] += ph * yv.z;
      }
    }
  }

  AdvectionResult res;
  res.source.modes.resize(nm);
  res.lorentz_wall.resize(nm);
  for (int m = 0; m < nm; ++m) {
    const int cm = (m == 0) ? 1 : m - 1;
    const Eigen::MatrixXcd fp = spectral::analyze_full(d, m + 1, acc_np[m]);
    const Eigen::MatrixXcd fm = spectral::analyze_full(d, cm, acc_nm[m]);
    const Eigen::MatrixXcd fz = spectral::analyze_full(d, m, acc_nz[m]);
    const Eigen::MatrixXcd fk = spectral::analyze_full(d, m, acc_k[m]);
    Eigen::MatrixXcd yp, ym, yz;
    if (b && m > 0) {
      yp = spectral::analyze_full(d, m + 1, acc_yp[m]);
      ym = spectral::analyze_full(d, cm, acc_ym[m]);
      yz = spectral::analyze_full(d, m, acc_yz[m]);
    }
    for (int pi = 0; pi < 2; ++pi) {
      const FlowParity p = flow_parity(pi);
      const spectral::ZParity hpar = psi_parity(p);
      const spectral::ZParity zpar = phi_parity(p);
      VectorPM s;
      s.plus = spectral::take_parity(spec, m, m + 1, fp, hpar);
      s.minus = spectral::take_parity(spec, m, cm, fm, hpar);
      s.zc = spectral::take_parity(spec, m, m, fz, zpar);
      // grad k: the horizontal parts keep the slice parity, the axial part
      // flips it, so all three come from the same slice of k.
      const SpectralField kh = spectral::take_parity(spec, m, m, fk, hpar);
      s.plus = spectral::added(s.plus, spectral::raise(d, kh));
      s.minus = spectral::added(
          s.minus, m == 0 ? spectral::raise(d, kh) : spectral::lower(d, kh));
      s.zc = spectral::added(s.zc, spectral::dz(d, kh));
      res.source.modes[m][pi] = std::move(s);

      if (b && m > 0) {
        const SpectralField yps = spectral::take_parity(spec, m, m + 1, yp, hpar);
        const SpectralField yms = spectral::take_parity(spec, m, cm, ym, hpar);
        const SpectralField yzs = spectral::take_parity(spec, m, m, yz, zpar);
        const VectorXcd tp = spectral::wall_trace(d, spectral::dz(d, yps));
        const VectorXcd tm = spectral::wall_trace(d, spectral::dz(d, yms));
        const VectorXcd tz = spectral::wall_trace(d, yzs);
        // (i m Y_z - dz Y_theta)|_{r=1}, with Y_theta = (Y+ - Y-)/(2i).
        res.lorentz_wall[m][pi] =
            Cd(0.0, m) * tz + Cd(0.0, 0.5) * (tp - tm);
      }
    }
  }
  return res;
}

SourceSet project_sources(const Discretization& d, const QuadraticField& s) {
  SourceSet out;
  const int nm = static_cast<int>(s.modes.size());
  out.s_psi.resize(nm);
  out.s_phi.resize(nm);
  for (int m = 0; m < nm; ++m)
    for (int pi = 0; pi < 2; ++pi) {
      const VectorPM& v = s.modes[m][pi];
      out.s_psi[m][pi] = spectral::curl_z(d, v);
      out.s_phi[m][pi] = spectral::added(
          spectral::lap_h(d, v.zc),
          spectral::scaled(spectral::dz(d, spectral::div_h(d, v)),
                           Cd(-1.0, 0.0)));
    }
  return out;
}

} // namespace ptcyl::hydro
