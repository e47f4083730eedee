#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gapforge/commutant.hpp"
#include "gapforge/types.hpp"

namespace gapforge {

struct CircuitSpec {
  int d = 2;
  int m = 1;
  int n = 8;
  Boundary boundary = Boundary::Open;
  Group group = Group::Unitary;

  int eta() const { return m > 0 ? n / m : 0; }
  // Throws InvalidSpec unless m | n, eta even and >= 4, d >= 2, and (for the
  // symplectic architecture) d^m even.
  void validate() const;
  std::string describe() const;
};

// Commutant group labelling each reduced site. The symplectic architecture
// puts symplectic gates on the bonds touching site 0 and orthogonal gates
// elsewhere, so only site 0 carries the Omega-twisted third label.
Group site_group(const CircuitSpec& spec, int site);
// Gate group acting on bond (left, right).
Group bond_group(const CircuitSpec& spec, int left, int right);
// Labels per reduced site: 2 for unitary, 3 otherwise.
int site_radix(Group g);

struct ReducedState {
  std::vector<Label> word;

  static ReducedState parse(std::string_view s);
  static ReducedState from_index(std::uint64_t index, int eta, int radix);
  std::uint64_t index(int radix) const;
  std::string str() const;
  int switches(Boundary b) const;
  bool operator==(const ReducedState&) const = default;
  auto operator<=>(const ReducedState& o) const { return word <=> o.word; }
};

int switch_count(std::span<const Label> word, Boundary b);
int switch_count(std::string_view word, Boundary b);

enum class BondKind { Odd, Even, Wrap };

struct Bond {
  int left = 0;
  int right = 0;
  BondKind kind = BondKind::Odd;
  Group gate = Group::Unitary;
  Eigen::MatrixXd matrix;  // (D^2 x D^2), index a * D + b with a the left label
};

enum class LayerPart { Full, Odd, Even };

using SparseVector = std::unordered_map<std::uint64_t, double>;

// Reduced single-layer moment operator. Bonds are stored in application order:
// even bonds, then the wraparound bond (closed boundary), then odd bonds.
class LayerOperator {
 public:
  explicit LayerOperator(const CircuitSpec& spec);

  const CircuitSpec& spec() const { return spec_; }
  int eta() const { return spec_.eta(); }
  int radix() const { return radix_; }
  // Throws InvalidDimension if radix^eta does not fit in 64 bits.
  std::uint64_t dimension() const;
  bool symmetrized() const { return symmetrized_; }
  LayerPart part() const { return part_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Gram matrix of site p's label basis and its principal square root.
  const Eigen::MatrixXd& site_gram(int p) const { return grams_[p]; }
  const Eigen::MatrixXd& site_sqrt_gram(int p) const { return sqrt_grams_[p]; }
  // Commutant elements of site p's group in its label basis (radix x count).
  // The global commutant is spanned by the products over sites of column a.
  const Eigen::MatrixXd& site_elements(int p) const { return elements_[p]; }
  int commutant_dimension() const { return static_cast<int>(elements_.front().cols()); }

  void apply_inplace(Eigen::VectorXd& v) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  SparseVector apply(const SparseVector& v) const;

  LayerOperator restricted(LayerPart part) const;
  LayerOperator symmetrized_copy() const;

 private:
  CircuitSpec spec_;
  int radix_ = 2;
  bool symmetrized_ = false;
  LayerPart part_ = LayerPart::Full;
  std::vector<Bond> bonds_;
  std::vector<Eigen::MatrixXd> grams_;
  std::vector<Eigen::MatrixXd> sqrt_grams_;
  std::vector<Eigen::MatrixXd> elements_;
};

// Coefficient count (rows * cols) of the largest matrix a dense path may materialize.
inline constexpr std::uint64_t kDenseCap = std::uint64_t(1) << 26;

Eigen::VectorXd apply_layer(const LayerOperator& op, const Eigen::VectorXd& v);
Eigen::MatrixXd build_dense(const LayerOperator& op, std::uint64_t cap = kDenseCap);
LayerOperator symmetrize(const LayerOperator& op);
std::pair<LayerOperator, LayerOperator> half_layer_factors(const LayerOperator& op);

// Unitary only: words whose constant blocks all have even length and that have
// exactly zeta switches. Closed boundary keeps the lexicographically smallest
// word of each two-site translation orbit. Sorted lexicographically.
std::vector<ReducedState> enumerate_sector(const CircuitSpec& spec, int zeta);

// Closed-boundary sector basis vectors: Sum is the plain orbit sum, Average
// the single representative word. Spectra agree; entries differ by the
// ratio of orbit sizes.
enum class OrbitNormalization { Sum, Average };

struct BlockMatrix {
  int zeta = 0;
  Boundary boundary = Boundary::Open;
  OrbitNormalization normalization = OrbitNormalization::Sum;
  std::vector<ReducedState> basis;
  std::vector<int> orbit_sizes;
  Eigen::MatrixXd matrix;
};

BlockMatrix build_block_matrix(const CircuitSpec& spec, int zeta,
                               OrbitNormalization norm = OrbitNormalization::Sum);

// Lambda applied to one word; for closed boundary the coefficients are summed
// per translation orbit and keyed by the orbit representative. Entries below
// 1e-15 in magnitude are dropped. Sorted by word.
std::vector<std::pair<ReducedState, double>> orbit_coefficients(const LayerOperator& op,
                                                                const ReducedState& w);

// Smallest word in the two-site translation orbit of w.
ReducedState orbit_representative(const ReducedState& w);
int orbit_size(const ReducedState& w);

}  // namespace gapforge
