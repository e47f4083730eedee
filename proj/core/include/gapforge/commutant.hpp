#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gapforge/rational.hpp"
#include "gapforge/types.hpp"

namespace gapforge {

// An element of the second-order commutant, acting on two copies of C^q
// (row/column index c1 * q + c2).
struct CommutantOperator {
  Label label;
  Eigen::MatrixXd matrix;
};

// Second-order commutant of G(q), q = d^m. Operators are materialized only
// when q <= explicit_cap; the Gram matrix is always available, both exactly
// and in floating point.
struct CommutantBasis {
  Group group = Group::Unitary;
  int d = 2;
  int m = 1;
  std::vector<Label> labels;
  std::vector<CommutantOperator> operators;
  RationalMatrix exact_gram;
  Eigen::MatrixXd gram;
  // Column k: the group's k-th commutant element (identity, swap, third
  // element) in this label basis. The identity matrix except where an
  // element is linearly dependent on the others or the labels span more
  // than the commutant.
  RationalMatrix elements;

  int dimension() const { return static_cast<int>(labels.size()); }
  std::uint64_t local_dim() const;
  bool has_operators() const { return !operators.empty(); }
  int index_of(Label l) const;  // -1 when absent
};

inline constexpr std::uint64_t kExplicitCommutantCap = 16;

CommutantBasis build_commutant_basis(Group g, int d, int m,
                                     std::uint64_t explicit_cap = kExplicitCommutantCap);

// Label basis of a reduced site that carries `g` gates. Equal to the commutant
// basis except for a symplectic site with d^m = 2: there the Omega-twisted
// element is I - S, and the site uses the orthogonal labels {I, S, Q} so that it
// keeps three labels like its orthogonal neighbours.
CommutantBasis site_basis(Group g, int d, int m, std::uint64_t explicit_cap = kExplicitCommutantCap);

// Symplectic form [[0, I], [-I, 0]] of size q (q even).
Eigen::MatrixXd symplectic_form(int q);

// Label basis of one pair of reduced sites: left site x right site.
struct AmbientBasis {
  CommutantBasis left;
  CommutantBasis right;

  int dimension() const { return left.dimension() * right.dimension(); }
  // Explicit operator for ambient element (a, b), in the gate's copy-major
  // ordering (copy1: site1, site2; copy2: site1, site2).
  Eigen::MatrixXd gate_ordered(int a, int b) const;
};

// Reduced matrix of a local moment operator on one pair of sites. Row and
// column index a * right_labels + b.
struct LocalMomentMatrix {
  std::vector<Label> left;
  std::vector<Label> right;
  Eigen::MatrixXd matrix;

  int ambient_dimension() const { return static_cast<int>(matrix.rows()); }
  double idempotence_error() const;
};

enum class MomentRoute { Trace, Explicit };

struct LabelPair {
  Label left;
  Label right;
};

// Commutant of the two-site gate group expressed as products of site labels.
std::vector<LabelPair> gate_commutant_pairs(Group g);

// Projector onto the gate commutant, expanded in the ambient product basis.
// `gate` is the commutant basis of G(d^{2m}); `ambient` the per-site label bases.
// The Trace route uses Gram factorization over sites (exact arithmetic,
// rounded at the end); the Explicit route projects the vectorized operators.
LocalMomentMatrix weingarten_moment_matrix(const CommutantBasis& gate, const AmbientBasis& ambient,
                                           MomentRoute route = MomentRoute::Trace);

RationalMatrix weingarten_moment_matrix_exact(Group gate, const AmbientBasis& ambient);

// Per-site label bases (site_basis) for a bond between sites of the given groups.
AmbientBasis make_ambient(Group left_site, Group right_site, int d, int m);

// Permutes an operator on (s1c1, s1c2, s2c1, s2c2) to (s1c1, s2c1, s1c2, s2c2).
Eigen::MatrixXd to_gate_order(const Eigen::MatrixXd& site_ordered, std::uint64_t q);

}  // namespace gapforge
