#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gapforge/layer_operator.hpp"

namespace gapforge {

// Orthonormal basis of the range of the symmetrized odd half-layer. That range
// is a tensor product over the pairs (2j, 2j+1) of the D_c-dimensional ranges
// of the symmetrized odd-bond projectors, so a vector on it is stored with one
// D_c-dimensional factor per pair.
struct PairReduction {
  int eta = 0;
  int radix = 2;
  int dc = 2;
  // Per pair: (radix^2 x dc) isometry whose columns are the Loewdin-
  // orthonormalized symmetrized gate commutant elements (g a_mu) x (g b_mu).
  std::vector<Eigen::MatrixXd> isometries;

  int pairs() const { return eta / 2; }
  std::uint64_t dimension() const;
  std::uint64_t full_dimension() const;

  // U x and U^T y for U the tensor product of the pair isometries.
  Eigen::VectorXd lift(const Eigen::VectorXd& reduced) const;
  Eigen::VectorXd project(const Eigen::VectorXd& full) const;
};

PairReduction pair_reduction(const LayerOperator& op);

// Applies m (rows x cols) to the middle factor of v viewed as [pre, cols, post]
// (row-major, last index fastest), returning [pre, rows, post].
Eigen::VectorXd apply_factor(const Eigen::VectorXd& v, std::uint64_t pre, const Eigen::MatrixXd& m,
                             std::uint64_t post);

// Tensor product over sites of per-site vectors, site 0 most significant.
Eigen::VectorXd product_state(const std::vector<Eigen::VectorXd>& factors);

// In-place modified Gram-Schmidt (two passes); drops numerically dependent vectors.
std::vector<Eigen::VectorXd> orthonormalize(std::vector<Eigen::VectorXd> vs);

}  // namespace gapforge
