// Influence-matrix linear algebra checks.  Oracles: the closed-form block
// equalization identities verified symbolically (diagonal scaled norms one,
// cross pairs equal, full consistency only on cyclically consistent norms),
// a hand-computed frozen example, and synthetic SVD constructions with
// planted zero singular values.

#include <doctest.h>

#include "ptcyl/influence/influence.hpp"
#include "ptcyl/influence/scaling.hpp"

#include <random>

using namespace ptcyl::influence;
using Cd = std::complex<double>;

namespace {

Eigen::MatrixXd random_positive(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = std::pow(10.0, expo(rng));
  return M;
}

Eigen::MatrixXd scaled_norms(const Eigen::MatrixXd& c,
                             const BlockScaleFactors& f) {
  return f.alpha.asDiagonal() * c * f.beta.asDiagonal();
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = Cd(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(M).householderQ();
}

} // namespace

TEST_SUITE_BEGIN("influence");

TEST_CASE("closed-form block equalization satisfies its defining identities") {
  for (unsigned seed : {11u, 12u, 13u, 14u, 15u, 16u, 17u, 18u, 19u, 20u}) {
    Eigen::MatrixXd c = random_positive(3, seed);
    Eigen::MatrixXd s = scaled_norms(c, equalize_blocks_3x3(c));
    CHECK(std::abs(s(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(s(1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(s(2, 2) - 1.0) < 1e-12);
    CHECK(std::abs(s(1, 0) / s(0, 1) - 1.0) < 1e-12);
    // The (2,3)/(3,2) pair is equalized by the same factors.
    CHECK(std::abs(s(1, 2) / s(2, 1) - 1.0) < 1e-12);
    // The remaining pair closes only on cyclically consistent norms.
    Eigen::MatrixXd cc = c;
    cc(0, 2) = c(0, 1) * c(1, 2) * c(2, 0) / (c(1, 0) * c(2, 1));
    Eigen::MatrixXd sc = scaled_norms(cc, equalize_blocks_3x3(cc));
    CHECK(std::abs(sc(2, 0) / sc(0, 2) - 1.0) < 1e-12);
  }
}

TEST_CASE("equalization leaves an all-ones norm matrix untouched") {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 3);
  BlockScaleFactors f = equalize_blocks_3x3(ones);
  CHECK((f.alpha - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.beta - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("frozen equalization example reproduces hand-computed factors") {
  // Representative velocity block norms at large Helmholtz constant; the
  // factors and scaled norms below were worked out by hand from the closed
  // forms.
  Eigen::MatrixXd c(3, 3);
  c << 1e7, 1.0, 1.0, 1e-2, 1e-5, 1e-5, 0.0, 1e-5, 1e-4;
  BlockScaleFactors f = equalize_blocks_3x3(c);
  const double s10 = std::sqrt(10.0);
  CHECK(std::abs(f.alpha[0] / (s10 * 1e-7) - 1.0) < 1e-12);
  CHECK(std::abs(f.alpha[1] / s10 - 1.0) < 1e-12);
  CHECK(std::abs(f.alpha[2] - 1.0) < 1e-14);
  CHECK(std::abs(f.beta[0] / (s10 * 0.1) - 1.0) < 1e-12);
  CHECK(std::abs(f.beta[1] / (s10 * 1e4) - 1.0) < 1e-12);
  CHECK(std::abs(f.beta[2] / 1e4 - 1.0) < 1e-12);
  Eigen::MatrixXd s = scaled_norms(c, f);
  Eigen::MatrixXd expect(3, 3);
  expect << 1.0, 1e-2, 1e-2 / s10, 1e-2, 1.0, 1.0 / s10, 0.0, 1.0 / s10, 1.0;
  CHECK((s - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("least-squares equalization solves consistent norms exactly") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> expo(-4.0, 4.0);
  for (int n : {3, 4}) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = expo(rng);
      y[i] = expo(rng);
    }
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = std::exp(-x[i] - y[j]);
    Eigen::MatrixXd s = scaled_norms(c, equalize_blocks_lsq(c));
    CHECK((s - Eigen::MatrixXd::Ones(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("least-squares equalization shrinks the log spread") {
  Eigen::MatrixXd c = random_positive(4, 99);
  Eigen::MatrixXd s = scaled_norms(c, equalize_blocks_lsq(c));
  auto spread = [](const Eigen::MatrixXd& M) {
    return std::log10(M.maxCoeff() / M.minCoeff());
  };
  CHECK(spread(s) <= spread(c) + 1e-12);
}

TEST_CASE("conditioned inverse reproduces a plain inverse when well posed") {
  const int n = 12;
  Eigen::MatrixXcd C = random_unitary(n, 5) *
                       Eigen::VectorXd::LinSpaced(n, 1.0, 4.0).asDiagonal() *
                       random_unitary(n, 6).adjoint();
  std::vector<int> blocks{5, 4, 3};
  for (ScalingMode mode : {ScalingMode::RowOnly, ScalingMode::ClosedForm3,
                           ScalingMode::LeastSquares}) {
    ConditionedInverse ci = condition_matrix(C, blocks, mode);
    CHECK(ci.zero_count() == 0);
    CHECK(ci.gap_ok());
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = Cd(std::sin(1.0 + i), std::cos(2.0 * i));
    CHECK((ci.solve(C * x) - x).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("planted zero singular values are detected and regularized") {
  const int n = 10;
  Eigen::VectorXd gam(n);
  gam << 5.0, 2.0, 1.0, 0.5, 0.1, 0.05, 0.01, 1e-3, 0.0, 0.0;
  Eigen::MatrixXcd U = random_unitary(n, 21), V = random_unitary(n, 22);
  Eigen::MatrixXcd C = U * gam.asDiagonal() * V.adjoint();
  ConditionedInverse ci = condition_matrix(C, {}, ScalingMode::RowOnly);
  CHECK(ci.zero_count() == 2);
  CHECK(ci.gap_ok());
  CHECK(ci.gap_ratio() > 1e10);
  // Solving for data in the range reproduces the range component.
  Eigen::VectorXcd x = V.col(1) + 0.3 * V.col(4);
  Eigen::VectorXcd xr = ci.solve(C * x);
  CHECK((C * xr - C * x).cwiseAbs().maxCoeff() < 1e-10);
  // Null directions pass through the replaced values without blowing up.
  Eigen::VectorXcd xn = V.col(n - 1);
  CHECK(ci.solve(C * xn).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("flags cutting into a dense spectrum are reported as gapless") {
  // A geometric spectrum with no jump: any cut leaves flagged and kept
  // values a small factor apart, so the detector must refuse the gap even
  // though it still flags (threshold-only mode).
  const int n = 8;
  Eigen::VectorXd gam(n);
  gam << 1.0, 0.5, 0.1, 0.02, 4e-3, 1e-3, 2e-4, 1e-4;
  Eigen::MatrixXcd U = random_unitary(n, 31), V = random_unitary(n, 32);
  Eigen::MatrixXcd C = U * gam.asDiagonal() * V.adjoint();
  Thresholds th;
  th.zero = 0.3; // deliberately cuts inside the dense part
  ConditionedInverse ci = condition_matrix(C, {}, ScalingMode::RowOnly, th);
  CHECK(ci.zero_count() > 0);
  CHECK_FALSE(ci.gap_ok());
}

TEST_CASE("column assembly fills the matrix probe by probe") {
  Eigen::MatrixXcd M(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = Cd(i + 1, j - i);
  auto col = [&](int j) { return Eigen::VectorXcd(M.col(j)); };
  InfluenceMatrix im =
      build_influence(2, 0, {2, 2}, col, ScalingMode::RowOnly);
  CHECK((im.C - M).cwiseAbs().maxCoeff() == 0.0);
  CHECK(im.m == 2);
  CHECK(im.blocks.size() == 2);
}

TEST_SUITE_END();
