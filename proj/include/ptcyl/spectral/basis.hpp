// Basis definitions for the cylinder solver: resolution bookkeeping, radial
// polynomial classes, Chebyshev helpers, and Gauss quadrature nodes.
//
// Geometry: r in [0,1], z in [-h/2, h/2], theta periodic.  A scalar field is
// expanded as sum_m sum_k sum_n c^m_{kn} Q_n(r) T_k(2z/h) exp(i m theta),
// with complex coefficients for m = 0..M/2 (negative m by conjugation).
//
// Radial class c: Q_n^c(r) = r^c P_{(n-c)/2}^{(0,c)}(2r^2 - 1) with n = c,
// c+2, c+4, ...  These are the analytic radial shapes of an m = c Fourier
// component that is smooth across the axis; they are orthogonal under
// int_0^1 Q Q' r dr and satisfy Q_n^c(1) = 1.  Fields built from first-order
// radial factor operators move between neighbouring classes, which is what
// keeps the discrete vector calculus exact.

#pragma once

#include <Eigen/Dense>

namespace ptcyl::spectral {

// Resolution parameters.  K must be even (axial parity packing splits the K
// Chebyshev modes into K/2 even and K/2 odd ones).
struct BasisSpec {
  int M = 0;      // azimuthal resolution; modes m = 0..M/2 retained
  int K = 0;      // axial Chebyshev modes T_0..T_{K-1}
  int N = 0;      // radial resolution; class c keeps N - c/2 functions
  double h = 1.0; // cylinder height

  int mmax() const { return M / 2; }
  int kpack() const { return K / 2; }
  int nrad(int c) const { return N - c / 2; }
  // Degree of the j-th retained function of class c.
  int degree(int c, int j) const { return c + 2 * j; }

  // Throws std::invalid_argument if the parameters cannot support the solver
  // (classes up to max_class need at least two radial functions each).
  void validate(int max_class = -1) const;
};

// Gauss-Legendre rule on [-1,1]: sum w_i f(x_i) = int_{-1}^{1} f dx exactly
// for polynomials of degree <= 2n-1.
struct Quadrature {
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};
Quadrature legendre_gauss(int n);

// Jacobi polynomials P_j^{(0,c)} with values and x-derivatives at a point,
// j = 0..jmax, by the three-term recurrence (derivative by differentiating
// the recurrence).
void jacobi_eval(int jmax, int c, double x, Eigen::VectorXd& val,
                 Eigen::VectorXd& dval);

// Values and r-derivatives of all retained Q_n^c at radius r.
void radial_eval(const BasisSpec& spec, int c, double r, Eigen::VectorXd& q,
                 Eigen::VectorXd& dq);

// Chebyshev T_k(x) for k = 0..kmax.
void chebyshev_eval(int kmax, double x, Eigen::VectorXd& t);

// Coefficient-space d/dx on T_0..T_{K-1} (strictly upper triangular).
Eigen::MatrixXd chebyshev_deriv_matrix(int K);

// int_{-1}^{1} T_k dx  (0 for odd k, 2/(1-k^2) for even k).
double chebyshev_integral(int k);

// L2 norm of Q_j-of-class-c under int_0^1 . . r dr: the Gram matrix of a
// class is diagonal with entries 1 / (2 (2j + c + 1)).
double radial_norm(int c, int j);

} // namespace ptcyl::spectral
