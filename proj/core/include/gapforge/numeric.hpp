#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapforge/layer_operator.hpp"

namespace gapforge {

enum class Method { Dense, Iterative, Dmrg, Formula };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);

enum class Subspace { Auto, Full, Paired };

struct SolverConfig {
  double tolerance = 1e-10;
  long max_iterations = 100000;
  int krylov_dim = 50;
  std::uint64_t seed = 12345;
  std::uint64_t dense_cap = kDenseCap;
  // Iterative solves: Full works on all radix^eta words, Paired on the range of
  // the odd half-layer. Auto picks Full up to 4096 words.
  Subspace subspace = Subspace::Auto;
  // Dense solves: diagonalize the raw non-symmetric Lambda instead of the
  // symmetric operator compressed to the range of L1'.
  bool raw_dense = false;
  bool want_eigvec = false;
};

struct GapResult {
  CircuitSpec spec;
  double lambda = 0.0;
  Method method = Method::Dense;
  double residual = 0.0;
  long iterations = 0;
  double seconds = 0.0;
  int unit_eigenvalues = 0;  // dense only
  int multiplicity = 1;      // dense only
  bool converged = true;
  bool degenerate = false;    // gap eigenvalue has multiplicity > 1
  bool chi_too_small = false;  // DMRG advisory
  // Eigenvector of Lambda in the original (unsymmetrized) word basis.
  std::optional<Eigen::VectorXd> eigvec;

  // "ok", or a '|'-joined list of flags.
  std::string status() const;
};

GapResult dense_gap(const CircuitSpec& spec, const SolverConfig& cfg = {});
GapResult iterative_gap(const CircuitSpec& spec, const SolverConfig& cfg = {});
GapResult formula_gap(const CircuitSpec& spec);

// Symmetrized constant-label words, orthonormalized (dense, length radix^eta).
std::vector<Eigen::VectorXd> symmetrized_unit_vectors(const LayerOperator& op);

// Maps a symmetrized-basis vector back to the word basis (per-site g^{-1}).
Eigen::VectorXd unsymmetrize(const LayerOperator& op, const Eigen::VectorXd& v);
// Inverse of unsymmetrize (per-site g).
Eigen::VectorXd symmetrize_vector(const LayerOperator& op, const Eigen::VectorXd& v);

struct DecayPoint {
  int L = 0;
  double norm = 0.0;
};

struct DecayReport {
  std::vector<DecayPoint> points;
  double rate = 0.0;         // s_Lmax^(1/Lmax)
  double fitted_rate = 0.0;  // exp of the least-squares slope of ln s_L over the second half
  double prefactor = 0.0;    // s_Lmax / lambda^Lmax for the dense gap lambda
};

// s_L = ||(L1' L2')^L - P||_2 for L = 1..L_max.
DecayReport decay_check(const CircuitSpec& spec, int L_max, std::uint64_t cap = kDenseCap);

}  // namespace gapforge
