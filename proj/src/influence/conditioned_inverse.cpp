#include "ptcyl/influence/conditioned_inverse.hpp"

#include "ptcyl/influence/scaling.hpp"

#include <limits>
#include <stdexcept>

namespace ptcyl::influence {

namespace {

// Largest / smallest singular value above the relative zero cut; the exact
// zeros a singular matrix carries by construction do not count.
double effective_condition(const Eigen::VectorXd& gamma, double rel_cut) {
  if (gamma.size() == 0) return 0.0;
  const double top = gamma[0];
  if (top == 0.0) return 0.0;
  double bottom = top;
  for (int i = 0; i < gamma.size(); ++i)
    if (gamma[i] >= rel_cut * top) bottom = gamma[i];
  return top / bottom;
}

} // namespace

ConditionedInverse condition_matrix(const Eigen::MatrixXcd& C,
                                    const std::vector<int>& blocks,
                                    ScalingMode mode, const Thresholds& th) {
  if (C.rows() != C.cols())
    throw std::invalid_argument("condition_matrix: matrix must be square");
  const int n = static_cast<int>(C.rows());
  ConditionedInverse ci;

  if (!blocks.empty()) ci.norms_raw_ = block_norms(C, blocks);

  if (mode == ScalingMode::RowOnly) {
    const int nb = blocks.empty() ? 1 : static_cast<int>(blocks.size());
    ci.alpha_ = Eigen::VectorXd::Ones(nb);
    ci.beta_ = Eigen::VectorXd::Ones(nb);
    ci.alpha_ent_ = Eigen::VectorXd::Ones(n);
    ci.beta_ent_ = Eigen::VectorXd::Ones(n);
  } else {
    if (blocks.empty())
      throw std::invalid_argument("condition_matrix: block scaling needs blocks");
    BlockScaleFactors f = mode == ScalingMode::ClosedForm3
                              ? equalize_blocks_3x3(ci.norms_raw_)
                              : equalize_blocks_lsq(ci.norms_raw_);
    ci.alpha_ = f.alpha;
    ci.beta_ = f.beta;
    ci.alpha_ent_ = expand_block_factors(f.alpha, blocks);
    ci.beta_ent_ = expand_block_factors(f.beta, blocks);
  }

  Eigen::MatrixXcd C1 =
      ci.alpha_ent_.asDiagonal() * C * ci.beta_ent_.asDiagonal();
  if (!blocks.empty()) ci.norms_scaled_ = block_norms(C1, blocks);

  ci.row_scale_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double m = C1.row(i).cwiseAbs().maxCoeff();
    ci.row_scale_[i] = m > 0.0 ? 1.0 / m : 1.0;
  }
  Eigen::MatrixXcd A = ci.row_scale_.asDiagonal() * C1;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  ci.U_ = svd.matrixU();
  ci.V_ = svd.matrixV();
  ci.gamma_ = svd.singularValues();
  ci.gamma_raw_ =
      Eigen::JacobiSVD<Eigen::MatrixXcd>(C).singularValues();

  // Zero flags live in the tail of the descending scaled spectrum.
  const double top = ci.gamma_.size() > 0 ? ci.gamma_[0] : 0.0;
  int flagged = 0;
  for (int i = n - 1; i >= 0; --i) {
    if (ci.gamma_[i] < th.zero * top)
      ++flagged;
    else
      break;
  }
  ci.zero_count_ = flagged;
  if (flagged > 0 && flagged < n) {
    const double kept = ci.gamma_[n - flagged - 1];
    const double cut = ci.gamma_[n - flagged];
    ci.gap_ratio_ = cut > 0.0 ? kept / cut
                              : std::numeric_limits<double>::infinity();
    ci.gap_ok_ = ci.gap_ratio_ >= th.gap;
  } else if (flagged == n) {
    ci.gap_ratio_ = 0.0;
    ci.gap_ok_ = false;
  } else {
    ci.gap_ratio_ = std::numeric_limits<double>::infinity();
    ci.gap_ok_ = true;
  }

  ci.gamma_reg_ = ci.gamma_;
  for (int i = n - ci.zero_count_; i < n; ++i) ci.gamma_reg_[i] = 1.0;

  ci.cond_raw_ = effective_condition(ci.gamma_raw_, th.zero);
  ci.cond_scaled_ = ci.gamma_reg_.size() > 0
                        ? ci.gamma_reg_.maxCoeff() / ci.gamma_reg_.minCoeff()
                        : 0.0;
  return ci;
}

Eigen::VectorXcd ConditionedInverse::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != gamma_.size())
    throw std::invalid_argument("ConditionedInverse::solve: size mismatch");
  Eigen::VectorXcd y =
      rhs.cwiseProduct(alpha_ent_.cast<std::complex<double>>())
          .cwiseProduct(row_scale_.cast<std::complex<double>>());
  Eigen::VectorXcd t = U_.adjoint() * y;
  t.array() /= gamma_reg_.array();
  return (V_ * t).cwiseProduct(beta_ent_.cast<std::complex<double>>());
}

} // namespace ptcyl::influence
