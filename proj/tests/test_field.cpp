// Transform-level checks: round trips between coefficients and the grid,
// dense least-squares fit as an independent analysis oracle, axis scaling of
// high-m modes, and exact meridional energies.

#include <doctest.h>

#include "../tests/support/testutil.hpp"

using namespace ptcyl::spectral;
using ptcyl::testutil::random_field;

TEST_SUITE_BEGIN("field");

TEST_CASE("analyze-synthesize round trip is tight") {
  BasisSpec spec{6, 12, 8, 1.4};
  Discretization d(spec);
  for (int m : {0, 1, 3}) {
    for (ZParity zp : {ZParity::Even, ZParity::Odd}) {
      SpectralField f = random_field(spec, m, m, zp, 17 + m);
      Eigen::MatrixXcd grid = synth_grid(d, f);
      Eigen::MatrixXcd full = analyze_full(d, m, grid);
      SpectralField g = take_parity(spec, m, m, full, zp);
      CHECK(ptcyl::testutil::max_abs(g.coeff - f.coeff) < 1e-13);
      // The opposite parity must come back numerically empty.
      SpectralField h = take_parity(spec, m, m, full, flip(zp));
      CHECK(ptcyl::testutil::max_abs(h.coeff) < 1e-13);
    }
  }
}

TEST_CASE("analysis agrees with a dense least-squares fit") {
  // Independent oracle: sample a smooth class-2 function on a dense grid and
  // fit the basis by QR least squares; compare against the quadrature-based
  // analysis coefficients.
  BasisSpec spec{4, 8, 7, 1.0};
  Discretization d(spec);
  const int c = 2;
  auto fn = [](double r, double z) {
    return r * r * std::sin(1.3 * r * r) * (0.5 + z * z);
  };
  // Quadrature-based projection.
  Eigen::MatrixXcd grid(d.nz_nodes(), d.nr_nodes());
  for (int i = 0; i < d.nz_nodes(); ++i)
    for (int j = 0; j < d.nr_nodes(); ++j)
      grid(i, j) = fn(d.r_nodes()[j], d.z_nodes()[i]);
  Eigen::MatrixXcd coef = analyze_full(d, c, grid);

  // Dense fit oracle (r only, at fixed z slice): 400 radial samples.
  const double zslice = d.z_nodes()[3];
  const int S = 400;
  Eigen::MatrixXd A(S, spec.nrad(c));
  Eigen::VectorXd b(S);
  for (int s = 0; s < S; ++s) {
    const double r = (s + 0.5) / S;
    Eigen::VectorXd q, dq;
    radial_eval(spec, c, r, q, dq);
    A.row(s) = q.transpose();
    b[s] = fn(r, zslice);
  }
  Eigen::VectorXd fit = A.colPivHouseholderQr().solve(b);
  // Reconstruct the z slice from the full coefficients.
  Eigen::VectorXd t;
  chebyshev_eval(spec.K - 1, 2.0 * zslice / spec.h, t);
  Eigen::VectorXcd slice = coef.transpose() * t;
  for (int j = 0; j < spec.nrad(c); ++j)
    CHECK(std::abs(slice[j] - fit[j]) < 2e-5); // limited by truncation of fn
}

TEST_CASE("high-m basis functions scale like r^m near the axis") {
  BasisSpec spec{8, 8, 8, 1.0};
  Discretization d(spec);
  const int m = 3;
  SpectralField f = SpectralField::zero(spec, m, m, ZParity::Even);
  f.coeff(0, 0) = 1.0;
  f.coeff(1, 1) = 0.5;
  const double r1 = 1e-3, r2 = 2e-3, z = 0.21;
  const double v1 = std::abs(evaluate(d, f, r1, z));
  const double v2 = std::abs(evaluate(d, f, r2, z));
  const double slope = std::log2(v2 / v1);
  CHECK(slope == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("meridional energy matches analytic and dense quadrature") {
  BasisSpec spec{0, 8, 6, 1.8};
  Discretization d(spec, 1);
  // Single product basis function: ||Q_2^0 T_2||^2 = gamma_1 * (h/2) * 14/15.
  SpectralField f = SpectralField::zero(spec, 0, 0, ZParity::Even);
  f.coeff(1, 1) = 1.0; // T_2 Q_2
  const double ref = radial_norm(0, 1) * 0.5 * spec.h * (14.0 / 15.0);
  CHECK(scalar_l2sq(d, f) == doctest::Approx(ref).epsilon(1e-13));

  // Random field vs dense midpoint quadrature oracle.
  SpectralField g = random_field(spec, 0, 0, ZParity::Odd, 5);
  double dense = 0;
  const int NR = 300, NZ = 300;
  for (int i = 0; i < NR; ++i) {
    const double r = (i + 0.5) / NR;
    for (int k = 0; k < NZ; ++k) {
      const double z = spec.h * ((k + 0.5) / NZ - 0.5);
      dense += std::norm(evaluate(d, g, r, z)) * r * (1.0 / NR) *
               (spec.h / NZ);
    }
  }
  CHECK(scalar_l2sq(d, g) == doctest::Approx(dense).epsilon(1e-4));
}

TEST_SUITE_END();
