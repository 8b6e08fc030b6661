#include "ptcyl/magnetic/dtn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ptcyl::magnetic {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Quadrature node helpers.

// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        // one clean-up pass after convergence
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (t * p1 - p0) / (t * t - 1.0);
        break;
      }
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * pp * pp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
}

// Fejer's first rule at the Chebyshev-Gauss points cos((2i+1)pi/(2n)),
// exact for polynomials of degree < n under the plain dx measure.
double fejer1_weight(int n, double theta) {
  double s = 0.0;
  for (int j = 1; 2 * j <= n; ++j)
    s += std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
  return (2.0 / n) * (1.0 - 2.0 * s);
}

// ---------------------------------------------------------------------------
// Half-integer Legendre functions Q_{m-1/2}(chi) and their derivatives.
//
// chi = a/b > 1 where the ring distance enters as R^2 = a - b cos(alpha).
// Near chi = 1 they reduce to complete elliptic integrals; for distant
// rings that form cancels catastrophically and a hypergeometric series in
// 1/chi^2 takes over.  delta = a - b is carried explicitly because
// chi - 1 = delta/b must not be formed by subtraction.

struct EllipticKE {
  double k = 0.0, e = 0.0;
};

// K and E from the complementary parameter kp2 = 1 - k^2 via the AGM,
// stable for kp2 down to ~1e-290.
EllipticKE ell_ke(double kp2) {
  const double kc = std::sqrt(kp2);
  double a = 1.0, b = kc;
  double c = std::sqrt(std::max(0.0, 1.0 - kp2));
  double csum = 0.5 * c * c;
  double pow2 = 1.0;
  for (int it = 0; it < 60 && std::abs(c) > 4e-16 * a; ++it) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    csum += 0.5 * pow2 * c * c;
  }
  EllipticKE out;
  out.k = kPi / (2.0 * a);
  out.e = out.k * (1.0 - csum);
  return out;
}

constexpr double kChiSeries = 1.7; // branch point between the two evaluations

// q[j] = Q_{j-1/2}(chi), qd[j] = dQ_{j-1/2}/dchi, for j = 0..jmax.
void legendre_q_half(int jmax, double b, double delta, double* q, double* qd) {
  const double chi = 1.0 + delta / b;
  if (chi < kChiSeries) {
    // elliptic branch: k^2 = 2b/(a+b), complementary kp2 = delta/(a+b)
    const double apb = 2.0 * b + delta;
    const auto ke = ell_ke(delta / apb);
    const double kk = std::sqrt(2.0 * b / apb);
    const double q1 = chi * kk * ke.k - (2.0 / kk) * ke.e;
    q[0] = kk * ke.k;
    if (jmax >= 1) q[1] = q1;
    for (int j = 1; j < jmax; ++j)
      q[j + 1] =
          (2.0 * j * chi * q[j] - (j - 0.5) * q[j - 1]) / (j + 0.5);
    // chi^2 - 1 built from delta/b directly: chi - 1.0 as a subtraction
    // quantizes the tiny difference and staircases every derivative.
    const double den = (delta / b) * (chi + 1.0);
    // chi q[0] - q[1] reduces identically to 2E/k'', so use that form.
    qd[0] = -(ke.e / kk) / den;
    for (int j = 1; j <= jmax; ++j)
      qd[j] = (j - 0.5) * (chi * q[j] - q[j - 1]) / den;
    return;
  }
  // series branch: Q_nu = sqrt(pi) Gamma(nu+1)/Gamma(nu+3/2) (2chi)^{-nu-1}
  //                       2F1(nu/2+1, nu/2+1/2; nu+3/2; chi^{-2})
  const double y = 1.0 / (chi * chi);
  for (int j = 0; j <= jmax; ++j) {
    const double nu = j - 0.5;
    const double pa = 0.5 * nu + 1.0, pb = 0.5 * nu + 0.5, pc = nu + 1.5;
    double term = 1.0, f = 1.0, fp = 0.0; // f = 2F1, fp = dF/dy
    for (int nvz = 0; nvz < 200; ++nvz) {
      const double next =
          term * (pa + nvz) * (pb + nvz) / ((pc + nvz) * (nvz + 1.0)) * y;
      fp += (nvz + 1.0) * next / y;
      f += next;
      term = next;
      if (std::abs(term) < 1e-18 * std::abs(f)) break;
    }
    const double pref = std::sqrt(kPi) * std::tgamma(nu + 1.0) /
                        std::tgamma(nu + 1.5) *
                        std::pow(2.0 * chi, -nu - 1.0);
    q[j] = pref * f;
    qd[j] = pref * (-(nu + 1.0) / chi * f - 2.0 * std::pow(chi, -3.0) * fp);
  }
}

// ---------------------------------------------------------------------------
// Ring kernels.

constexpr int kMaxKernelMode = 12;

struct RawRing {
  double j1 = 0.0;    // int cos(m a) (chi - cos a)^{-1/2} da over [0, 2pi)
  double j3 = 0.0;    // int cos(m a) (chi - cos a)^{-3/2} da
  double j3hi = 0.0;  // same at |m|+1
  double j3lo = 0.0;  // same at ||m|-1|
};

RawRing raw_ring(int m, double b, double delta) {
  const int am = std::abs(m);
  if (am + 1 > kMaxKernelMode - 1)
    throw std::invalid_argument("ring kernel: azimuthal mode too large");
  double q[kMaxKernelMode], qd[kMaxKernelMode];
  legendre_q_half(am + 1, b, delta, q, qd);
  const double s2 = std::sqrt(2.0);
  RawRing out;
  out.j1 = 2.0 * s2 * q[am];
  out.j3 = -4.0 * s2 * qd[am];
  out.j3hi = -4.0 * s2 * qd[am + 1];
  out.j3lo = -4.0 * s2 * qd[std::abs(am - 1)];
  return out;
}

} // namespace

RingKernel ring_kernel(int m, double r, double z, double rp, double zp) {
  const double dz = z - zp;
  const double dr = r - rp;
  const double b = 2.0 * r * rp;
  const double a = r * r + rp * rp + dz * dz;
  RingKernel out;
  if (b <= 1e-13 * a) {
    // a ring shrunk to the axis, or a target on the axis: only the lowest
    // modes survive the angular average
    const int am = std::abs(m);
    const double ir = 1.0 / std::sqrt(a);
    const double ir3 = ir / a;
    const double i1 = (am == 0) ? 2.0 * kPi * ir : 0.0;
    const double i3 = (am == 0) ? 2.0 * kPi * ir3 : 0.0;
    const double icos3 = (am == 1) ? kPi * ir3 : 0.0;
    out.value = i1 / (4.0 * kPi);
    out.d_r = -(r * i3 - rp * icos3) / (4.0 * kPi);
    out.d_z = -dz * i3 / (4.0 * kPi);
    return out;
  }
  // clamp the squared ring distance away from exact zero so the elliptic
  // branch stays finite; any representable separation above that is
  // evaluated faithfully (graded panels probe distances down to ~1e-21)
  const double delta = std::max(dr * dr + dz * dz, 1e-280 * b);
  const auto rr = raw_ring(m, b, delta);
  const double bs = 1.0 / (b * std::sqrt(b)); // b^{-3/2}
  const double chim1 = delta / b;
  out.value = std::sqrt(1.0 / b) * rr.j1 / (4.0 * kPi);
  // d/dr: split (r - rp cos a) = (r - rp) + rp (1 - cos a) and reduce the
  // second part exactly, avoiding the 1/delta cancellation at close rings
  out.d_r = -bs *
            (dr * rr.j3 + rp * (rr.j1 - chim1 * rr.j3)) / (4.0 * kPi);
  out.d_z = -bs * dz * rr.j3 / (4.0 * kPi);
  return out;
}

double ring_kernel_quadrature(int m, double r, double z, double rp, double zp,
                              double tol) {
  const double b = 2.0 * r * rp;
  const double dz = z - zp;
  const double dr = r - rp;
  const double a = r * r + rp * rp + dz * dz;
  const double delta = dr * dr + dz * dz;
  const auto f = [&](double al) {
    return std::cos(m * al) / std::sqrt(a - b * std::cos(al));
  };
  // Composite Gauss on panels graded geometrically away from the peak at
  // al = 0 (peak half-width sqrt(2 delta / b)), with panel width capped so
  // the cos(m al) oscillation stays resolved.  Each panel is checked by
  // halving and re-refined with an unchanged local tolerance, so the
  // recursion never chases tolerances below the roundoff floor.
  static const auto g24 = [] {
    std::pair<Eigen::VectorXd, Eigen::VectorXd> g;
    gauss_legendre(24, g.first, g.second);
    return g;
  }();
  const auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < 24; ++i) s += g24.second[i] * f(c + hl * g24.first[i]);
    return hl * s;
  };
  std::function<double(double, double, double, double, int)> refine =
      [&](double lo, double hi, double coarse, double eps,
          int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = panel(lo, mid), right = panel(mid, hi);
    const double fine = left + right;
    if (depth > 10 ||
        std::abs(fine - coarse) < eps + 4e-16 * std::abs(fine))
      return fine;
    return refine(lo, mid, left, eps, depth + 1) +
           refine(mid, hi, right, eps, depth + 1);
  };
  const double wcap = kPi / (2.0 * m + 2.0);
  const double peak =
      (b > 1e-300) ? std::sqrt(2.0 * std::max(delta, 1e-30) / b) : kPi;
  double lo = 0.0, total = 0.0;
  double width = std::min(std::min(peak, wcap), kPi);
  while (lo < kPi) {
    const double hi = std::min(kPi, lo + width);
    total += refine(lo, hi, panel(lo, hi), tol * (hi - lo) / kPi, 0);
    lo = hi;
    width = std::min(2.0 * width, wcap);
  }
  return 2.0 * total / (4.0 * kPi);
}

namespace {

// ---------------------------------------------------------------------------
// Internal solve grid: composite Gauss panels, dyadically graded into the
// corner circles, on which the layer density is actually solved for.

constexpr int kPanelOrder = 10;     // Gauss nodes per panel
constexpr double kNearFactor = 2.0; // adaptive treatment within this many
                                    // panel lengths of the evaluation point
constexpr double kLocalTol = 1e-12; // adaptive product-integration tolerance

struct PanelBasis {
  Eigen::VectorXd x, w; // reference Gauss nodes / weights on (-1, 1)
  Eigen::VectorXd bary; // barycentric weights of the node set
};

const PanelBasis& panel_basis() {
  static const PanelBasis pb = [] {
    PanelBasis b;
    gauss_legendre(kPanelOrder, b.x, b.w);
    b.bary.resize(kPanelOrder);
    for (int i = 0; i < kPanelOrder; ++i) {
      double p = 1.0;
      for (int j = 0; j < kPanelOrder; ++j)
        if (j != i) p *= b.x[i] - b.x[j];
      b.bary[i] = 1.0 / p;
    }
    return b;
  }();
  return pb;
}

// Lagrange basis values at xi for the reference Gauss nodes.
Eigen::VectorXd lagrange_at(double xi) {
  const auto& b = panel_basis();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kPanelOrder);
  for (int i = 0; i < kPanelOrder; ++i)
    if (std::abs(xi - b.x[i]) < 1e-14) {
      out[i] = 1.0;
      return out;
    }
  double denom = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) {
    out[i] = b.bary[i] / (xi - b.x[i]);
    denom += out[i];
  }
  out /= denom;
  return out;
}

struct Panel {
  int section = 0;         // 0 bottom disk, 1 wall, 2 top disk
  double a = 0.0, b = 0.0; // parameter range: r on the disks, z on the wall
  int off = 0;             // index of the panel's first node
};

struct SolveGrid {
  double h = 1.0;
  std::vector<Panel> panels;
  Eigen::VectorXd r, z, w, par; // nodes; w carries the surface measure
  Eigen::VectorXi sec;
  int size() const { return static_cast<int>(r.size()); }
};

// Panel edges of one section: `nb` uniform panels over the middle, dyadic
// refinement of depth `levels` over the last quarter before each graded
// end.  The panel touching a graded end is the unresolved corner sliver.
std::vector<double> section_edges(double lo, double hi, bool grade_lo,
                                  bool grade_hi, int levels, int nb) {
  const double len = hi - lo;
  const double mid_lo = grade_lo ? lo + 0.25 * len : lo;
  const double mid_hi = grade_hi ? hi - 0.25 * len : hi;
  std::vector<double> e;
  e.push_back(lo);
  if (grade_lo)
    for (int j = levels; j >= 0; --j)
      e.push_back(lo + 0.25 * len * std::ldexp(1.0, -j));
  for (int k = 1; k < nb; ++k)
    e.push_back(mid_lo + k * (mid_hi - mid_lo) / nb);
  if (grade_hi)
    for (int j = 0; j <= levels; ++j)
      e.push_back(hi - 0.25 * len * std::ldexp(1.0, -j));
  e.push_back(hi);
  std::sort(e.begin(), e.end());
  return e;
}

SolveGrid build_grid(double h, int levels, int nb_wall, int nb_disk) {
  SolveGrid g;
  g.h = h;
  const auto add_section = [&](int section, const std::vector<double>& e) {
    for (size_t i = 0; i + 1 < e.size(); ++i)
      g.panels.push_back({section, e[i], e[i + 1], 0});
  };
  add_section(0, section_edges(0.0, 1.0, false, true, levels, nb_disk));
  add_section(1,
              section_edges(-0.5 * h, 0.5 * h, true, true, levels, nb_wall));
  add_section(2, section_edges(0.0, 1.0, false, true, levels, nb_disk));

  const int n = kPanelOrder * static_cast<int>(g.panels.size());
  g.r.resize(n);
  g.z.resize(n);
  g.w.resize(n);
  g.par.resize(n);
  g.sec.resize(n);
  const auto& pb = panel_basis();
  int off = 0;
  for (auto& p : g.panels) {
    p.off = off;
    const double c = 0.5 * (p.a + p.b), hl = 0.5 * (p.b - p.a);
    for (int i = 0; i < kPanelOrder; ++i, ++off) {
      const double s = c + hl * pb.x[i];
      g.par[off] = s;
      g.sec[off] = p.section;
      if (p.section == 1) {
        g.r[off] = 1.0;
        g.z[off] = s;
        g.w[off] = hl * pb.w[i];
      } else {
        g.r[off] = s;
        g.z[off] = (p.section == 0 ? -0.5 : 0.5) * h;
        g.w[off] = hl * pb.w[i] * s; // disk measure r dr
      }
    }
  }
  return g;
}

double panel_distance(const Panel& p, double h, double rt, double zt) {
  const auto gap = [](double v, double a, double b) {
    return v < a ? a - v : (v > b ? v - b : 0.0);
  };
  if (p.section == 1) return std::hypot(rt - 1.0, gap(zt, p.a, p.b));
  const double zp = (p.section == 0 ? -0.5 : 0.5) * h;
  return std::hypot(gap(rt, p.a, p.b), zt - zp);
}

double kernel_comp(int m, int comp, double rt, double zt, double rs,
                   double zs) {
  const RingKernel k = ring_kernel(m, rt, zt, rs, zs);
  return comp == 0 ? k.value : (comp == 1 ? k.d_r : k.d_z);
}

struct Gauss12 {
  Eigen::VectorXd x, w;
  Gauss12() { gauss_legendre(12, x, w); }
};
const Gauss12& g12() {
  static const Gauss12 g;
  return g;
}

// One 12-point Gauss pass of kernel x Lagrange basis x surface measure
// over the sub-range [lo, hi] of panel p.
Eigen::VectorXd basis_gauss(int m, int comp, double rt, double zt,
                            const Panel& p, double h, double lo, double hi) {
  const auto& g = g12();
  const double c = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
  const double pc = 0.5 * (p.a + p.b), phl = 0.5 * (p.b - p.a);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(kPanelOrder);
  for (int i = 0; i < 12; ++i) {
    const double s = c + hl * g.x[i];
    double rs, zs, meas;
    if (p.section == 1) {
      rs = 1.0;
      zs = s;
      meas = 1.0;
    } else {
      rs = s;
      zs = (p.section == 0 ? -0.5 : 0.5) * h;
      meas = s;
    }
    const double k = kernel_comp(m, comp, rt, zt, rs, zs);
    acc += (g.w[i] * hl * meas * k) * lagrange_at((s - pc) / phl);
  }
  return acc;
}

// Adaptive bisection with a magnitude-proportional floor, so refinement
// never chases tolerances below the kernel-evaluation roundoff.
void basis_adapt(int m, int comp, double rt, double zt, const Panel& p,
                 double h, double lo, double hi, const Eigen::VectorXd& whole,
                 double eps, int depth, Eigen::VectorXd& out) {
  const double mid = 0.5 * (lo + hi);
  const Eigen::VectorXd left = basis_gauss(m, comp, rt, zt, p, h, lo, mid);
  const Eigen::VectorXd right = basis_gauss(m, comp, rt, zt, p, h, mid, hi);
  const double err = (left + right - whole).cwiseAbs().maxCoeff();
  const double scale =
      left.cwiseAbs().maxCoeff() + right.cwiseAbs().maxCoeff();
  if (depth > 42 || err < eps + 1e-13 * scale) {
    out += left + right;
    return;
  }
  basis_adapt(m, comp, rt, zt, p, h, lo, mid, left, 0.5 * eps, depth + 1, out);
  basis_adapt(m, comp, rt, zt, p, h, mid, hi, right, 0.5 * eps, depth + 1,
              out);
}

// Integral of kernel x basis over a whole panel, split at an interior
// singular parameter when one is given (NaN otherwise).
Eigen::VectorXd basis_integral(int m, int comp, double rt, double zt,
                               const Panel& p, double h, double split) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kPanelOrder);
  if (split > p.a && split < p.b) {
    basis_adapt(m, comp, rt, zt, p, h, p.a, split,
                basis_gauss(m, comp, rt, zt, p, h, p.a, split), kLocalTol, 0,
                out);
    basis_adapt(m, comp, rt, zt, p, h, split, p.b,
                basis_gauss(m, comp, rt, zt, p, h, split, p.b), kLocalTol, 0,
                out);
  } else {
    basis_adapt(m, comp, rt, zt, p, h, p.a, p.b,
                basis_gauss(m, comp, rt, zt, p, h, p.a, p.b), kLocalTol, 0,
                out);
  }
  return out;
}

// One kernel row over the weighted charges: the value (comp 0) or a normal
// derivative (comp 1 for d/dr, comp 2 for d/dz) at one target point.
// self_section/self_par place an on-surface target for the singular split.
Eigen::RowVectorXd kernel_row(const SolveGrid& g, int m, int comp, double rt,
                              double zt, int self_section, double self_par) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(g.size());
  for (const auto& p : g.panels) {
    // the z-gradient kernel vanishes identically on the target's own disk
    if (comp == 2 && p.section == self_section && self_section != 1)
      continue;
    const double extent = p.b - p.a;
    if (panel_distance(p, g.h, rt, zt) >= kNearFactor * extent) {
      for (int i = 0; i < kPanelOrder; ++i) {
        const int l = p.off + i;
        row[l] += kernel_comp(m, comp, rt, zt, g.r[l], g.z[l]);
      }
    } else {
      const double split = p.section == self_section
                               ? self_par
                               : std::numeric_limits<double>::quiet_NaN();
      const Eigen::VectorXd integ =
          basis_integral(m, comp, rt, zt, p, g.h, split);
      for (int i = 0; i < kPanelOrder; ++i)
        row[p.off + i] += integ[i] / g.w[p.off + i];
    }
  }
  return row;
}

// Lift of Dirichlet ring data to the internal nodes: Chebyshev analysis /
// synthesis in z on the wall; on the disks the r^m prefactor of the
// azimuthal mode is peeled off and the rest projected on Legendre
// polynomials in 2 r^2 - 1, which the Gauss ring values determine exactly.
Eigen::MatrixXd build_interp(const SurfaceRings& rings, const SolveGrid& g,
                             int m) {
  const int nd = rings.nd, nw = rings.nw;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(g.size(), rings.total());

  Eigen::MatrixXd cheb(nw, nw); // z-coefficient k <- wall ring i
  for (int k = 0; k < nw; ++k)
    for (int i = 0; i < nw; ++i) {
      const double th = kPi * (nw - 0.5 - i) / nw;
      cheb(k, i) = ((k == 0 ? 1.0 : 2.0) / nw) * std::cos(k * th);
    }

  const auto legendre_cols = [&](double x, Eigen::VectorXd& pk) {
    pk.resize(nd);
    pk[0] = 1.0;
    if (nd > 1) pk[1] = x;
    for (int k = 2; k < nd; ++k)
      pk[k] = ((2 * k - 1) * x * pk[k - 1] - (k - 1) * pk[k - 2]) / k;
  };
  Eigen::MatrixXd leg(nd, nd); // Legendre coefficient k <- peeled ring i
  {
    Eigen::VectorXd pk;
    for (int i = 0; i < nd; ++i) {
      legendre_cols(2.0 * rings.r[i] * rings.r[i] - 1.0, pk);
      const double gw = 4.0 * rings.w[i]; // plain-dx Gauss weight
      for (int k = 0; k < nd; ++k)
        leg(k, i) =
            0.5 * (2 * k + 1) * gw * pk[k] / std::pow(rings.r[i], m);
    }
  }

  Eigen::VectorXd pk;
  for (int l = 0; l < g.size(); ++l) {
    if (g.sec[l] == 1) {
      const double th =
          std::acos(std::clamp(2.0 * g.z[l] / rings.h, -1.0, 1.0));
      for (int i = 0; i < nw; ++i) {
        double v = 0.0;
        for (int k = 0; k < nw; ++k) v += std::cos(k * th) * cheb(k, i);
        e(l, nd + i) = v;
      }
    } else {
      const int col0 = g.sec[l] == 0 ? 0 : nd + nw;
      legendre_cols(2.0 * g.r[l] * g.r[l] - 1.0, pk);
      const double rm = std::pow(g.r[l], m);
      for (int i = 0; i < nd; ++i)
        e(l, col0 + i) = rm * pk.dot(leg.col(i));
    }
  }
  return e;
}

// Dyadic depth of the graded panels.  The corner sliver leaves a residual
// that scales like (sliver size)^{2/3} through the rho^{-1/3} density tail
// and leaks into ring outputs amplified by the inverse ring-corner
// distance, so the depth is pushed until that leak sits well below a
// target that tightens as the rings close in on the corners (keeping
// refinement studies decaying instead of hitting a fixed floor).
int grading_levels(const SurfaceRings& rings) {
  double s_ring = std::numeric_limits<double>::max();
  for (int i = 0; i < rings.total(); ++i) {
    const bool wall = i >= rings.wall_begin() && i < rings.top_begin();
    const double s = wall ? 0.5 * rings.h - std::abs(rings.z[i])
                          : 1.0 - rings.r[i];
    s_ring = std::min(s_ring, s);
  }
  const double cs = std::max(0.5, 0.25 * rings.h); // graded end length
  const double tol = std::max(1e-10, 1e-7 * std::pow(s_ring / 6e-3, 1.5));
  const double lev = std::log2(cs) - 1.5 * std::log2(20.0 * tol * s_ring);
  return std::clamp(static_cast<int>(std::ceil(lev)), 24, 72);
}

} // namespace

// ---------------------------------------------------------------------------

SurfaceRings surface_rings(double h, int nw, int nd) {
  if (nw < 2 || nd < 2 || h <= 0.0)
    throw std::invalid_argument("surface_rings: bad geometry");
  SurfaceRings s;
  s.h = h;
  s.nd = nd;
  s.nw = nw;
  const int n = 2 * nd + nw;
  s.r.resize(n);
  s.z.resize(n);
  s.w.resize(n);

  Eigen::VectorXd gx, gw;
  gauss_legendre(nd, gx, gw);
  for (int i = 0; i < nd; ++i) {
    const double r = std::sqrt(0.5 * (1.0 + gx[i]));
    // int_0^1 f(r) r dr = (1/4) int_-1^1 f(r(x)) dx
    s.r[i] = r;
    s.z[i] = -0.5 * h;
    s.w[i] = 0.25 * gw[i];
    s.r[nd + nw + i] = r;
    s.z[nd + nw + i] = 0.5 * h;
    s.w[nd + nw + i] = 0.25 * gw[i];
  }
  for (int i = 0; i < nw; ++i) {
    const double th = kPi * (nw - 0.5 - i) / nw; // ascending z
    s.r[nd + i] = 1.0;
    s.z[nd + i] = 0.5 * h * std::cos(th);
    s.w[nd + i] = 0.5 * h * fejer1_weight(nw, th);
  }
  return s;
}

DtnMap::DtnMap(int m, const SurfaceRings& rings, int threads)
    : m_(m), rings_(rings) {
  const int n = rings_.total();
  const int nd = rings_.nd, nw = rings_.nw;
  if (n == 0 || nd < 2 || nw < 2)
    throw std::invalid_argument("dtn: bad surface rings");

  const SolveGrid grid =
      build_grid(rings_.h, grading_levels(rings_), std::max(2, nw / 6),
                 std::max(2, nd / 6));
  const int ni = grid.size();
  ri_ = grid.r;
  zi_ = grid.z;
  wi_ = grid.w;

  interp_ = build_interp(rings_, grid, m_);

  Eigen::MatrixXd a(ni, ni);
  Eigen::MatrixXd gr(nw, ni), gzt(nd, ni), gzb(nd, ni);

  // task list: collocation rows at the internal nodes, then the
  // normal-derivative rows at the interface rings
  const auto fill = [&](int task) {
    if (task < ni) {
      a.row(task) = kernel_row(grid, m_, 0, grid.r[task], grid.z[task],
                               grid.sec[task], grid.par[task]);
      return;
    }
    const int t = task - ni;
    if (t < nw) {
      const int i = rings_.wall_begin() + t;
      gr.row(t) = kernel_row(grid, m_, 1, rings_.r[i], rings_.z[i], 1,
                             rings_.z[i]);
    } else if (t < nw + nd) {
      const int i = rings_.top_begin() + (t - nw);
      gzt.row(t - nw) = kernel_row(grid, m_, 2, rings_.r[i], rings_.z[i], 2,
                                   rings_.r[i]);
    } else {
      const int i = t - nw - nd;
      gzb.row(t - nw - nd) = kernel_row(grid, m_, 2, rings_.r[i],
                                        rings_.z[i], 0, rings_.r[i]);
    }
  };
  const int ntask = ni + nw + 2 * nd;
  const int nth = std::max(1, threads);
  if (nth == 1) {
    for (int i = 0; i < ntask; ++i) fill(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> cursor{0};
    for (int t = 0; t < nth; ++t)
      pool.emplace_back([&] {
        for (int i = cursor.fetch_add(1); i < ntask; i = cursor.fetch_add(1))
          fill(i);
      });
    for (auto& th : pool) th.join();
  }

  // exterior-limit jump of the normal derivative: the density at the ring,
  // through the Lagrange interpolant of the panel holding it
  const auto add_jump = [&](Eigen::MatrixXd& gmat, int row, int ring,
                            int section, double sign) {
    const double par = section == 1 ? rings_.z[ring] : rings_.r[ring];
    for (const auto& p : grid.panels) {
      if (p.section != section || par < p.a || par > p.b) continue;
      const Eigen::VectorXd bas =
          lagrange_at((2.0 * par - p.a - p.b) / (p.b - p.a));
      for (int i = 0; i < kPanelOrder; ++i)
        gmat(row, p.off + i) += sign * bas[i] / grid.w[p.off + i];
      break;
    }
  };
  for (int t = 0; t < nw; ++t)
    add_jump(gr, t, rings_.wall_begin() + t, 1, -0.5);
  for (int t = 0; t < nd; ++t) {
    add_jump(gzt, t, rings_.top_begin() + t, 2, -0.5);
    add_jump(gzb, t, t, 0, 0.5);
  }

  lu_.compute(a);
  cond_ = 1.0 / lu_.rcond();
  if (!(cond_ < 1e12))
    throw std::runtime_error(
        "single-layer system is near-singular for mode " +
        std::to_string(m_));

  // composed ring-to-ring maps
  const Eigen::MatrixXd x = lu_.solve(interp_);
  fr_ = gr * x;
  fzt_ = gzt * x;
  fzb_ = gzb * x;
}

Eigen::VectorXcd DtnMap::density(const Eigen::VectorXcd& dirichlet) const {
  if (dirichlet.size() != rings_.total())
    throw std::invalid_argument("dtn: Dirichlet data has wrong length");
  Eigen::VectorXcd out(wi_.size());
  out.real() = lu_.solve((interp_ * dirichlet.real()).eval());
  out.imag() = lu_.solve((interp_ * dirichlet.imag()).eval());
  return out;
}

DtnResult DtnMap::apply(const Eigen::VectorXcd& dirichlet) const {
  if (dirichlet.size() != rings_.total())
    throw std::invalid_argument("dtn: Dirichlet data has wrong length");
  const Eigen::VectorXd re = dirichlet.real();
  const Eigen::VectorXd im = dirichlet.imag();
  const auto act = [&](const Eigen::MatrixXd& mat) {
    Eigen::VectorXcd v(mat.rows());
    v.real() = mat * re;
    v.imag() = mat * im;
    return v;
  };
  DtnResult out;
  out.dr_wall = act(fr_);
  out.dz_top = act(fzt_);
  out.dz_bottom = act(fzb_);
  return out;
}

std::complex<double> DtnMap::potential(const Eigen::VectorXcd& charges,
                                       double r, double z) const {
  if (charges.size() != wi_.size())
    throw std::invalid_argument("dtn: charge vector has wrong length");
  std::complex<double> acc = 0.0;
  for (int l = 0; l < static_cast<int>(wi_.size()); ++l)
    acc += ring_kernel(m_, r, z, ri_[l], zi_[l]).value * charges[l];
  return acc;
}

} // namespace ptcyl::magnetic
