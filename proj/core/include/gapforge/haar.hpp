#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "gapforge/commutant.hpp"

namespace gapforge {

// Haar-random element of U(dim), O(dim) or Sp(dim/2) (the latter preserving
// symplectic_form(dim)).
Eigen::MatrixXcd haar_sample(Group g, int dim, std::uint64_t seed);
Eigen::MatrixXcd haar_sample(Group g, int dim, std::mt19937_64& rng);

struct MonteCarloMoment {
  LocalMomentMatrix estimate;
  Eigen::MatrixXd standard_error;
  std::int64_t samples = 0;
};

// Sample estimate of the local moment matrix of a G(d^{2m}) gate in its own
// ambient basis. Samples are drawn in fixed-size chunks with independent seed
// streams and reduced in chunk order, so the result does not depend on
// `threads` (0 means hardware concurrency).
MonteCarloMoment mc_local_moment(Group g, int d, int m, std::int64_t samples, std::uint64_t seed,
                                 unsigned threads = 1);

// Ambient bases used by mc_local_moment for the gate group.
AmbientBasis native_ambient(Group g, int d, int m);

}  // namespace gapforge
