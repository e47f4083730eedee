#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace gapforge {

using LinearMap = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct KrylovOptions {
  double tolerance = 1e-10;     // on ||A v - theta v|| with ||v|| = 1
  long max_iterations = 100000;  // operator applications
  int krylov_dim = 50;
  int keep = 0;                 // Ritz vectors kept at restart; 0 means krylov_dim / 2
  // Lanczos steps before the residual is tested inside a block; a start vector
  // nearly in the kernel otherwise looks converged at once
  int min_steps = 0;
};

struct KrylovResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Largest algebraic eigenpair of a symmetric operator by thick-restart
// Lanczos with full reorthogonalization. Every Krylov vector is also kept
// orthogonal to `locked` (assumed orthonormal).
KrylovResult largest_eigenpair(const LinearMap& op, Eigen::VectorXd start, const KrylovOptions& opt,
                               const std::vector<Eigen::VectorXd>& locked = {});

}  // namespace gapforge
