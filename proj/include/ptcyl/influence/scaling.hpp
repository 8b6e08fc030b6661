// Block equalization of influence matrices.
//
// The capacitance matrix that couples boundary probe amplitudes to paired
// boundary residuals is badly scaled: its blocks differ by many orders of
// magnitude because the probed functions and the evaluated residuals carry
// different physical dimensions (and one block grows linearly with the
// Helmholtz constant).  Two-sided diagonal scaling by per-block factors
// alpha_i (rows) and beta_j (columns) equalizes the block infinity norms
// before any row normalization or SVD.
//
// For the three-block velocity partition the equalization conditions have a
// closed form: the diagonal scaled norms become exactly 1 and the (2,1)/(1,2)
// and (3,1)/(1,3) pairs are equalized; the (3,2)/(2,3) pair comes out
// equalized as well.  The full set of pair conditions is only consistent
// when c12 c23 c31 = c13 c21 c32, which generally fails (one corner block is
// structurally zero), so the closed form is the exact solution of the
// achievable subset.  For other partitions the same goal is posed as a
// log-linear least-squares problem over nonzero blocks.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ptcyl::influence {

// Matrix of per-block infinity norms (max absolute row sum) for a square
// matrix partitioned by consecutive segment sizes.
Eigen::MatrixXd block_norms(const Eigen::MatrixXcd& C,
                            const std::vector<int>& sizes);

struct BlockScaleFactors {
  Eigen::VectorXd alpha; // per-block row factors
  Eigen::VectorXd beta;  // per-block column factors
};

// Closed-form equalization for a 3x3 block-norm matrix.  Zero norms are
// replaced by the smallest nonzero norm inside the formulas.
BlockScaleFactors equalize_blocks_3x3(const Eigen::MatrixXd& cnorm);

// Minimum-norm least-squares equalization log(alpha_i beta_j c_ij) ~ 0 over
// the nonzero blocks of an arbitrary partition.
BlockScaleFactors equalize_blocks_lsq(const Eigen::MatrixXd& cnorm);

// Per-entry diagonal built by repeating each block factor over its segment.
Eigen::VectorXd expand_block_factors(const Eigen::VectorXd& f,
                                     const std::vector<int>& sizes);

} // namespace ptcyl::influence
