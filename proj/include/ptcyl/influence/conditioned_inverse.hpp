// Regularized inversion of influence matrices.
//
// An influence matrix is singular by construction: the corner of the
// cylinder makes one combination of the probed boundary data redundant, so
// exactly zero singular values appear (their count depends only on the
// geometry and the kind of boundary conditions, not on resolution or
// physical parameters).  The corresponding directions never affect the
// fields, so the zero singular values are replaced by one and the matrix is
// then inverted through its SVD factors.
//
// Zero detection must separate the structural zeros from the merely small
// singular values produced by bad scaling.  The matrix is therefore block
// equalized (see scaling.hpp), then each row is divided by its largest
// absolute entry, and only then decomposed.  A singular value is flagged
// zero when it falls below threshold_zero relative to the largest one AND
// the flagged set is separated from the kept set by at least threshold_gap;
// without such a gap the flags are kept (threshold-only mode) but the
// decomposition is marked so callers can warn.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ptcyl::influence {

struct Thresholds {
  double zero = 1e-14; // relative cut below which a singular value is flagged
  double gap = 1e3;    // required ratio smallest-kept / largest-flagged
};

enum class ScalingMode {
  RowOnly,      // axisymmetric matrices: rows only, no block factors
  ClosedForm3,  // three-block closed-form equalization, then rows
  LeastSquares, // general log-linear least-squares equalization, then rows
};

class ConditionedInverse {
public:
  // Regularized application of C^-1 (scalings undone on the way out).
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  int size() const { return static_cast<int>(gamma_.size()); }
  int zero_count() const { return zero_count_; }
  bool gap_ok() const { return gap_ok_; }
  double gap_ratio() const { return gap_ratio_; }
  double cond_raw() const { return cond_raw_; }
  double cond_scaled() const { return cond_scaled_; }
  const Eigen::VectorXd& gamma_raw() const { return gamma_raw_; }
  const Eigen::VectorXd& gamma_scaled() const { return gamma_; }
  const Eigen::MatrixXd& block_norms_raw() const { return norms_raw_; }
  const Eigen::MatrixXd& block_norms_scaled() const { return norms_scaled_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::VectorXd& row_scale() const { return row_scale_; }

  friend ConditionedInverse condition_matrix(const Eigen::MatrixXcd& C,
                                             const std::vector<int>& blocks,
                                             ScalingMode mode,
                                             const Thresholds& th);

private:
  Eigen::VectorXd alpha_, beta_;           // per block
  Eigen::VectorXd alpha_ent_, beta_ent_;   // per entry
  Eigen::VectorXd row_scale_;              // per row, applied after blocks
  Eigen::MatrixXcd U_, V_;
  Eigen::VectorXd gamma_, gamma_reg_, gamma_raw_;
  Eigen::MatrixXd norms_raw_, norms_scaled_;
  int zero_count_ = 0;
  bool gap_ok_ = true;
  double gap_ratio_ = 0.0;
  double cond_raw_ = 0.0, cond_scaled_ = 0.0;
};

// Scale, decompose, and regularize a square influence matrix.  blocks may be
// empty for RowOnly mode.
ConditionedInverse condition_matrix(const Eigen::MatrixXcd& C,
                                    const std::vector<int>& blocks,
                                    ScalingMode mode,
                                    const Thresholds& th = {});

} // namespace ptcyl::influence
