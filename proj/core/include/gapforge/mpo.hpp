#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>
#include <cstdint>
#include <vector>

#include "gapforge/layer_operator.hpp"
#include "gapforge/pairs.hpp"

namespace gapforge {

// Site tensor W(wl, wr, out, in).
using MpoTensor = Eigen::Tensor<double, 4>;

// Rank-1 product vectors v_a (one unit vector per site) and the coefficient
// matrix c with P = sum_ab c_ab |v_a><v_b| the orthogonal projector onto
// their span.
struct ProductDeflation {
  std::vector<std::vector<Eigen::VectorXd>> vectors;
  Eigen::MatrixXd coefficients;

  int count() const { return static_cast<int>(vectors.size()); }
  // Overlap matrix <v_a|v_b> (product over sites).
  Eigen::MatrixXd overlaps() const;
};

class MpoOperator {
 public:
  std::vector<MpoTensor> sites;
  ProductDeflation deflation;
  // Closed chains from build_paired_mpo: the operator as a sum of open-chain
  // MPOs, one per operator-Schmidt term of the wraparound bond. `sites` is
  // then their direct sum. Empty otherwise; not maintained by compress or
  // mpo_product.
  std::vector<std::vector<MpoTensor>> terms;

  int length() const { return static_cast<int>(sites.size()); }
  int phys_dim(int k) const { return static_cast<int>(sites[k].dimension(2)); }
  // Bond dimensions at the length+1 cuts (the outer ones are 1).
  std::vector<int> bond_dimensions() const;
  int max_bond_dimension() const;
  std::uint64_t dimension() const;

  // (W - P) v, or W v when include_deflation is false.
  Eigen::VectorXd apply(const Eigen::VectorXd& v, bool include_deflation = true) const;
  Eigen::MatrixXd to_dense(bool include_deflation = true) const;
  // Orthonormal dense basis of the deflated span.
  std::vector<Eigen::VectorXd> deflation_basis() const;
};

// Product of the bond projectors of `op`, one bond at a time, as a site MPO
// (bond dimensions not compressed).
MpoOperator layer_mpo(const LayerOperator& op);
// Operator product a * b.
MpoOperator mpo_product(const MpoOperator& a, const MpoOperator& b);
// Exact compression: QR sweep left to right, then SVD sweep right to left
// discarding singular values below rel_tol times the largest at each cut.
void compress(MpoOperator& mpo, double rel_tol = 1e-13);

// H = L1' L2' L1' - P on the eta reduced sites (local dimension 2 or 3), with
// the symmetrized constant-label product states as deflation vectors.
MpoOperator build_mpo(const CircuitSpec& spec);

// The same operator restricted to the range of L1': eta/2 sites of dimension
// D_c (2 or 3) carrying U^T L2' U, where U is the pair isometry.
MpoOperator build_paired_mpo(const CircuitSpec& spec);
MpoOperator build_paired_mpo(const CircuitSpec& spec, const PairReduction& pr);

}  // namespace gapforge
