#include "gapforge/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gapforge/layer_operator.hpp"

namespace gapforge {
namespace {

int checked_eta(int d, int m, int n) {
  CircuitSpec s{d, m, n, Boundary::Open, Group::Unitary};
  s.validate();
  return s.eta();
}

double weight(int d, int m) { return static_cast<double>(local_weight(d, m)); }

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidEpsilon("epsilon must lie in (0, 1)");
}

}  // namespace

Rational local_weight(int d, int m) {
  if (d < 2 || m < 1) throw InvalidDimension("need d >= 2 and m >= 1");
  BigInt q = 1;
  for (int k = 0; k < m; ++k) q *= d;
  return Rational(q, q * q + 1);
}

GapFormulaResult exact_gap(int d, int m, int n, Boundary b) {
  const int eta = checked_eta(d, m, n);
  const double x = weight(d, m);
  const double open = x * x * (2.0 + 2.0 * std::cos(2.0 * std::numbers::pi / eta));
  GapFormulaResult r;
  r.d = d;
  r.m = m;
  r.n = n;
  r.boundary = b;
  r.lambda = b == Boundary::Open ? open : open * open;
  r.degeneracy = b == Boundary::Open ? 2 : 1;
  for (int k = 2; k <= eta - 2; k += 2) r.eigenvector.emplace_back(k, std::sin(k * std::numbers::pi / eta));
  return r;
}

RationalMatrix b1_matrix_exact(int d, int m, int eta) {
  if (eta < 4 || eta % 2 != 0) throw InvalidSize("eta must be even and >= 4");
  const int s = (eta - 2) / 2;
  const Rational x = local_weight(d, m);
  const Rational x2 = x * x;
  RationalMatrix b(s, s);
  for (int i = 0; i < s; ++i) {
    b(i, i) = 2 * x2;
    if (i + 1 < s) b(i, i + 1) = b(i + 1, i) = x2;
  }
  return b;
}

RationalMatrix b2_matrix_exact(int d, int m, int eta) {
  if (eta < 4 || eta % 2 != 0) throw InvalidSize("eta must be even and >= 4");
  const int s = (eta - 2) / 2;
  const Rational x = local_weight(d, m);
  const Rational x4 = x * x * x * x;
  RationalMatrix b(s, s);
  for (int i = 0; i < s; ++i) {
    // interior stencil 1,4,6,4,1; each missing outer neighbour reflects
    // back onto the diagonal with weight -1
    b(i, i) = (6 - (i == 0 ? 1 : 0) - (i == s - 1 ? 1 : 0)) * x4;
    if (i + 1 < s) b(i, i + 1) = b(i + 1, i) = 4 * x4;
    if (i + 2 < s) b(i, i + 2) = b(i + 2, i) = x4;
  }
  return b;
}

Eigen::MatrixXd b1_matrix(int d, int m, int eta) { return b1_matrix_exact(d, m, eta).to_double(); }
Eigen::MatrixXd b2_matrix(int d, int m, int eta) { return b2_matrix_exact(d, m, eta).to_double(); }

std::vector<ToeplitzEigenpair> toeplitz_eigenpairs(int n, double a, double b) {
  if (n < 1) throw InvalidSize("Toeplitz size must be >= 1");
  std::vector<ToeplitzEigenpair> out;
  for (int j = 1; j <= n; ++j) {
    ToeplitzEigenpair p;
    p.value = a + 2.0 * b * std::cos(j * std::numbers::pi / (n + 1));
    p.vector.resize(n);
    for (int k = 1; k <= n; ++k) p.vector(k - 1) = std::sin(double(j) * k * std::numbers::pi / (n + 1));
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.value > r.value; });
  return out;
}

double zeta_bound(int zeta, int d, int m) {
  if (zeta < 1) throw InvalidArgument("zeta must be >= 1");
  return std::pow(2.0 * weight(d, m), std::ldexp(1.0, zeta));
}

double zeta_rowsum_bound(int zeta, int d, int m) {
  if (zeta < 1) throw InvalidArgument("zeta must be >= 1");
  return std::pow(2.0 * weight(d, m), 2.0 * zeta);
}

DominanceReport dominance_check(int d, int m, int eta, Boundary b) {
  CircuitSpec spec{d, m, eta * m, b, Group::Unitary};
  spec.validate();
  DominanceReport r;
  r.zeta_excluded = b == Boundary::Open ? 2 : 4;
  r.gap = exact_gap(d, m, spec.n, b).lambda;
  r.bound = zeta_bound(r.zeta_excluded, d, m);
  r.rowsum_bound = zeta_rowsum_bound(r.zeta_excluded, d, m);
  // pair-constant words have at most eta/2 - 1 (open) or eta/2 (closed) switches
  const int max_switch = b == Boundary::Open ? eta / 2 - 1 : eta / 2;
  r.sector_empty = max_switch < r.zeta_excluded;
  r.holds = !r.sector_empty && r.bound <= r.gap;
  if (r.holds) return r;

  const LayerOperator op(spec);
  if (op.dimension() > 1024) return r;
  const Eigen::MatrixXd dense = build_dense(op);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(dense, false).eigenvalues();
  double best = 0.0;
  for (int k = 0; k < ev.size(); ++k) {
    const double a = std::abs(ev(k));
    if (a < 1.0 - 1e-8) best = std::max(best, a);
  }
  r.dense_fallback = true;
  r.verified_maximum = best;
  r.holds = std::abs(best - r.gap) <= 1e-10;
  return r;
}

DepthBound design_depth(int d, int m, int n, Boundary b, double epsilon) {
  check_epsilon(epsilon);
  const double lambda = exact_gap(d, m, n, b).lambda;
  DepthBound r;
  r.epsilon = epsilon;
  r.L_real = (n * std::log(double(d)) + std::log(1.0 / epsilon)) / (-std::log(lambda));
  r.L_min = std::max(1, static_cast<int>(std::ceil(r.L_real)));
  const double q = std::pow(double(d), m);
  const double base = std::log((q * q + 1.0) / (2.0 * q));
  r.C = (b == Boundary::Open ? 2.0 : 4.0) * base;
  r.linear_coefficient = std::log(double(d)) / r.C;
  if (m == 1) r.comparison = hunter_jones_depth(n, d, epsilon).L_real;
  return r;
}

DepthBound hunter_jones_depth(int n, int d, double epsilon) {
  check_epsilon(epsilon);
  if (n < 1 || d < 2) throw InvalidArgument("need n >= 1 and d >= 2");
  DepthBound r;
  r.epsilon = epsilon;
  r.C = std::log((double(d) * d + 1.0) / (2.0 * d));
  r.L_real = (2.0 * n * std::log(double(d)) + std::log(double(n)) + std::log(1.0 / epsilon)) / r.C;
  r.L_min = std::max(1, static_cast<int>(std::ceil(r.L_real)));
  r.linear_coefficient = 2.0 * std::log(double(d)) / r.C;
  return r;
}

GateCountComparison gate_count_compare(int n, double epsilon, double exponent, Boundary b) {
  check_epsilon(epsilon);
  if (n < 16) throw InvalidSize("gate_count_compare needs n >= 16");
  if (n % 2 != 0) throw NoValidGrouping("m = 1 needs an even number of qudits");
  const double target = std::log2(double(n));
  int best = 0;
  for (int m = 1; m <= n / 4; ++m) {
    if (n % m != 0 || (n / m) % 2 != 0) continue;
    if (best == 0 || std::abs(m - target) < std::abs(best - target)) best = m;
  }
  if (best == 0) throw NoValidGrouping("no divisor of n gives an even eta >= 4");
  const int wrap = b == Boundary::Closed ? 1 : 0;
  auto count = [&](int m) {
    const int eta = n / m;
    const DepthBound L = design_depth(2, m, n, b, epsilon);
    return double(L.L_min) * double(eta - 1 + wrap) * std::pow(double(m), exponent);
  };
  GateCountComparison g;
  g.m_log = best;
  g.N_m1 = count(1);
  g.N_mlog = count(best);
  g.ratio = g.N_m1 / g.N_mlog;
  return g;
}

}  // namespace gapforge
