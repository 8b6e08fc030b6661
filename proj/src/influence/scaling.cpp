#include "ptcyl/influence/scaling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptcyl::influence {

Eigen::MatrixXd block_norms(const Eigen::MatrixXcd& C,
                            const std::vector<int>& sizes) {
  const int nb = static_cast<int>(sizes.size());
  int total = 0;
  for (int s : sizes) total += s;
  if (total != C.rows() || C.rows() != C.cols())
    throw std::invalid_argument("block_norms: partition does not tile C");
  Eigen::MatrixXd out(nb, nb);
  int r0 = 0;
  for (int i = 0; i < nb; ++i) {
    int c0 = 0;
    for (int j = 0; j < nb; ++j) {
      const auto blk = C.block(r0, c0, sizes[i], sizes[j]);
      out(i, j) =
          sizes[i] == 0 || sizes[j] == 0
              ? 0.0
              : blk.cwiseAbs().rowwise().sum().maxCoeff();
      c0 += sizes[j];
    }
    r0 += sizes[i];
  }
  return out;
}

namespace {

double smallest_nonzero(const Eigen::MatrixXd& M) {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) > 0.0) s = std::min(s, M(i, j));
  if (!std::isfinite(s))
    throw std::invalid_argument("block scaling: all block norms are zero");
  return s;
}

} // namespace

BlockScaleFactors equalize_blocks_3x3(const Eigen::MatrixXd& cnorm) {
  if (cnorm.rows() != 3 || cnorm.cols() != 3)
    throw std::invalid_argument("equalize_blocks_3x3: need a 3x3 norm matrix");
  const double floor = smallest_nonzero(cnorm);
  auto g = [&](int i, int j) {
    const double v = cnorm(i, j);
    return v > 0.0 ? v : floor;
  };
  BlockScaleFactors f;
  f.alpha.resize(3);
  f.beta.resize(3);
  f.alpha[0] = std::sqrt(g(1, 0) * g(2, 1) * g(2, 2) /
                         (g(0, 0) * g(0, 1) * g(1, 2)));
  f.alpha[1] = std::sqrt(g(2, 1) * g(2, 2) / (g(1, 1) * g(1, 2)));
  f.alpha[2] = 1.0;
  f.beta[0] = std::sqrt(g(0, 1) * g(1, 2) /
                        (g(0, 0) * g(1, 0) * g(2, 1) * g(2, 2)));
  f.beta[1] = std::sqrt(g(1, 2) / (g(1, 1) * g(2, 1) * g(2, 2)));
  f.beta[2] = 1.0 / g(2, 2);
  return f;
}

BlockScaleFactors equalize_blocks_lsq(const Eigen::MatrixXd& cnorm) {
  const int nb = static_cast<int>(cnorm.rows());
  if (cnorm.cols() != nb)
    throw std::invalid_argument("equalize_blocks_lsq: need a square norm matrix");
  std::vector<std::pair<int, int>> eqs;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      if (cnorm(i, j) > 0.0) eqs.emplace_back(i, j);
  if (eqs.empty())
    throw std::invalid_argument("block scaling: all block norms are zero");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<int>(eqs.size()), 2 * nb);
  Eigen::VectorXd b(static_cast<int>(eqs.size()));
  for (int k = 0; k < static_cast<int>(eqs.size()); ++k) {
    A(k, eqs[k].first) = 1.0;
    A(k, nb + eqs[k].second) = 1.0;
    b[k] = -std::log(cnorm(eqs[k].first, eqs[k].second));
  }
  Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(b);
  BlockScaleFactors f;
  f.alpha = x.head(nb).array().exp();
  f.beta = x.tail(nb).array().exp();
  return f;
}

Eigen::VectorXd expand_block_factors(const Eigen::VectorXd& f,
                                     const std::vector<int>& sizes) {
  if (f.size() != static_cast<Eigen::Index>(sizes.size()))
    throw std::invalid_argument("expand_block_factors: size mismatch");
  int total = 0;
  for (int s : sizes) total += s;
  Eigen::VectorXd out(total);
  int at = 0;
  for (int i = 0; i < static_cast<int>(sizes.size()); ++i) {
    out.segment(at, sizes[i]).setConstant(f[i]);
    at += sizes[i];
  }
  return out;
}

} // namespace ptcyl::influence
