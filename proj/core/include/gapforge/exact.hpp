#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "gapforge/rational.hpp"
#include "gapforge/types.hpp"

namespace gapforge {

struct GapFormulaResult {
  double lambda = 0.0;
  Boundary boundary = Boundary::Open;
  int d = 2, m = 1, n = 0;
  // (k, coefficient): k is the number of leading sites in the first block
  // (open) or the length of the minority block (closed); coefficient
  // sin(k pi / eta).
  std::vector<std::pair<int, double>> eigenvector;
  int degeneracy = 1;
};

// d^m / (d^{2m} + 1), exactly.
Rational local_weight(int d, int m);

GapFormulaResult exact_gap(int d, int m, int n, Boundary b);

// One-switch (tridiagonal) and closed two-switch (pentadiagonal) blocks of size
// (eta-2)/2, built entrywise from their stencils.
RationalMatrix b1_matrix_exact(int d, int m, int eta);
RationalMatrix b2_matrix_exact(int d, int m, int eta);
Eigen::MatrixXd b1_matrix(int d, int m, int eta);
Eigen::MatrixXd b2_matrix(int d, int m, int eta);

struct ToeplitzEigenpair {
  double value;
  Eigen::VectorXd vector;  // unnormalized sine vector
};

// Symmetric tridiagonal Toeplitz matrix with diagonal a and off-diagonal b;
// sorted by decreasing eigenvalue when b >= 0.
std::vector<ToeplitzEigenpair> toeplitz_eigenpairs(int n, double a, double b);

// Stated bound (2 d^m/(d^{2m}+1))^(2^zeta) on every eigenvalue of B_zeta.
double zeta_bound(int zeta, int d, int m);
// Bound (2 d^m/(d^{2m}+1))^(2 zeta) from the row-sum argument; identical to
// zeta_bound for zeta <= 2.
double zeta_rowsum_bound(int zeta, int d, int m);

struct DominanceReport {
  bool holds = false;
  int zeta_excluded = 2;
  double gap = 0.0;
  double bound = 0.0;          // zeta_bound(zeta_excluded)
  double rowsum_bound = 0.0;   // zeta_rowsum_bound(zeta_excluded)
  bool sector_empty = false;   // no excluded sector exists at this eta
  bool dense_fallback = false;
  double verified_maximum = 0.0;  // largest eigenvalue of the excluded sectors (fallback only)
};

DominanceReport dominance_check(int d, int m, int eta, Boundary b);

struct DepthBound {
  int L_min = 1;
  double L_real = 0.0;
  double epsilon = 0.0;
  double C = 0.0;                   // asymptotic constant of the depth bound
  double linear_coefficient = 0.0;  // L ~ linear_coefficient * n at large n
  std::optional<double> comparison;  // prior-work bound for the same n, when comparable
};

DepthBound design_depth(int d, int m, int n, Boundary b, double epsilon);
DepthBound hunter_jones_depth(int n, int d, double epsilon);

struct GateCountComparison {
  double N_m1 = 0.0;
  double N_mlog = 0.0;
  double ratio = 0.0;
  int m_log = 1;
};

// Total gate count L(m) * (gates per layer) * m^exponent for m = 1 and for m
// the divisor of n closest to log2(n) with even eta >= 4.
GateCountComparison gate_count_compare(int n, double epsilon, double local_cost_exponent = 2.0,
                                       Boundary b = Boundary::Open);

}  // namespace gapforge
