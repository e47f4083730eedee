#include "gapforge/numeric.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "gapforge/exact.hpp"
#include "gapforge/krylov.hpp"
#include "gapforge/mpo.hpp"
#include "gapforge/pairs.hpp"

namespace gapforge {
namespace {

constexpr double kUnitTol = 1e-8;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_dense_cap(std::uint64_t n, std::uint64_t cap) {
  if (n > (std::uint64_t(1) << 32) || n * n > cap)
    throw DimensionCap("dense solve needs " + std::to_string(n) + "^2 coefficients, cap is " +
                       std::to_string(cap));
}

std::uint64_t full_dimension(const LayerOperator& op) {
  try {
    return op.dimension();
  } catch (const InvalidDimension&) {
    throw DimensionCap("reduced dimension overflows");
  }
}

Eigen::VectorXd per_site(const LayerOperator& op, const Eigen::VectorXd& v, bool inverse) {
  const std::uint64_t d = op.radix();
  Eigen::VectorXd w = v;
  for (int p = 0; p < op.eta(); ++p) {
    const Eigen::MatrixXd g = inverse ? Eigen::MatrixXd(op.site_sqrt_gram(p).inverse()) : op.site_sqrt_gram(p);
    w = apply_factor(w, ipow(d, p), g, ipow(d, op.eta() - 1 - p));
  }
  return w;
}

void classify(const Eigen::VectorXd& moduli_desc, GapResult& r, int& gap_index) {
  r.unit_eigenvalues = 0;
  gap_index = -1;
  for (int k = 0; k < moduli_desc.size(); ++k) {
    if (moduli_desc(k) >= 1.0 - kUnitTol) {
      ++r.unit_eigenvalues;
    } else {
      gap_index = k;
      break;
    }
  }
  if (gap_index < 0) throw InvalidSpec("no eigenvalue below one");
  r.lambda = moduli_desc(gap_index);
  r.multiplicity = 0;
  for (int k = gap_index; k < moduli_desc.size(); ++k)
    if (std::abs(moduli_desc(k) - r.lambda) <= kUnitTol) ++r.multiplicity;
  r.degenerate = r.multiplicity > 1;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Dense: return "dense";
    case Method::Iterative: return "iterative";
    case Method::Dmrg: return "dmrg";
    case Method::Formula: return "formula";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "dense") return Method::Dense;
  if (s == "iterative") return Method::Iterative;
  if (s == "dmrg") return Method::Dmrg;
  if (s == "formula") return Method::Formula;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

std::string GapResult::status() const {
  std::string s = converged ? "ok" : "no_convergence";
  if (degenerate) s += ";degenerate";
  if (chi_too_small) s += ";chi_too_small";
  return s;
}

std::vector<Eigen::VectorXd> symmetrized_unit_vectors(const LayerOperator& op) {
  std::vector<Eigen::VectorXd> vs;
  for (int a = 0; a < op.commutant_dimension(); ++a) {
    std::vector<Eigen::VectorXd> f;
    for (int p = 0; p < op.eta(); ++p) f.push_back(op.site_sqrt_gram(p) * op.site_elements(p).col(a));
    vs.push_back(product_state(f));
  }
  return orthonormalize(std::move(vs));
}

Eigen::VectorXd unsymmetrize(const LayerOperator& op, const Eigen::VectorXd& v) {
  return per_site(op, v, true);
}

Eigen::VectorXd symmetrize_vector(const LayerOperator& op, const Eigen::VectorXd& v) {
  return per_site(op, v, false);
}

GapResult dense_gap(const CircuitSpec& spec, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const LayerOperator op(spec);
  GapResult r;
  r.spec = spec;
  r.method = Method::Dense;
  int gi = 0;

  if (cfg.raw_dense) {
    check_dense_cap(full_dimension(op), cfg.dense_cap);
    const Eigen::MatrixXd lam = build_dense(op, cfg.dense_cap);
    Eigen::EigenSolver<Eigen::MatrixXd> es(lam, cfg.want_eigvec);
    const Eigen::VectorXcd ev = es.eigenvalues();
    std::vector<int> order(ev.size());
    for (int k = 0; k < ev.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(ev(a)) > std::abs(ev(b)); });
    Eigen::VectorXd mod(ev.size());
    for (int k = 0; k < ev.size(); ++k) mod(k) = std::abs(ev(order[k]));
    classify(mod, r, gi);
    if (cfg.want_eigvec) {
      const Eigen::VectorXcd v = es.eigenvectors().col(order[gi]);
      r.residual = (lam.cast<std::complex<double>>() * v - ev(order[gi]) * v).norm() / v.norm();
      r.eigvec = v.real().norm() >= v.imag().norm() ? Eigen::VectorXd(v.real()) : Eigen::VectorXd(v.imag());
      r.eigvec->normalize();
    }
  } else {
    const LayerOperator sym = symmetrize(op);
    const PairReduction pr = pair_reduction(sym);
    const std::uint64_t nr = pr.dimension();
    check_dense_cap(nr, cfg.dense_cap);
    Eigen::MatrixXd h(nr, nr);
    // columns of U^T L' U: through the full word space while that is cheap,
    // otherwise through the paired MPO
    if (pr.full_dimension() <= (std::uint64_t(1) << 16)) {
      for (std::uint64_t k = 0; k < nr; ++k) {
        Eigen::VectorXd w = pr.lift(Eigen::VectorXd::Unit(nr, k));
        sym.apply_inplace(w);
        h.col(k) = pr.project(w);
      }
    } else {
      const MpoOperator mpo = build_paired_mpo(spec, pr);
      for (std::uint64_t k = 0; k < nr; ++k) h.col(k) = mpo.apply(Eigen::VectorXd::Unit(nr, k), false);
    }
    h = (0.5 * (h + h.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd mod = es.eigenvalues().reverse().cwiseAbs();
    classify(mod, r, gi);
    const Eigen::VectorXd y = es.eigenvectors().col(nr - 1 - gi);
    r.residual = (h * y - es.eigenvalues()(nr - 1 - gi) * y).norm();
    if (cfg.want_eigvec) r.eigvec = unsymmetrize(op, pr.lift(y)).normalized();
  }
  r.iterations = 0;
  r.converged = true;
  r.seconds = seconds_since(t0);
  return r;
}

GapResult iterative_gap(const CircuitSpec& spec, const SolverConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const LayerOperator op(spec);
  const LayerOperator sym = symmetrize(op);

  Subspace sub = cfg.subspace;
  if (sub == Subspace::Auto) {
    bool small = false;
    try {
      small = sym.dimension() <= 4096;
    } catch (const InvalidDimension&) {
    }
    sub = small ? Subspace::Full : Subspace::Paired;
  }

  std::vector<Eigen::VectorXd> units;
  LinearMap map;
  Eigen::Index n = 0;
  std::optional<PairReduction> pr;
  std::optional<MpoOperator> mpo;
  const auto [l1, l2] = half_layer_factors(sym);

  if (sub == Subspace::Full) {
    n = static_cast<Eigen::Index>(sym.dimension());
    units = symmetrized_unit_vectors(sym);
    map = [&, l1 = l1, l2 = l2](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      out = in;
      l1.apply_inplace(out);
      l2.apply_inplace(out);
      l1.apply_inplace(out);
      for (const auto& u : units) out -= u * u.dot(in);
    };
  } else {
    pr = pair_reduction(sym);
    mpo = build_paired_mpo(spec, *pr);
    n = static_cast<Eigen::Index>(pr->dimension());
    units = mpo->deflation_basis();
    map = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = mpo->apply(in, true); };
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd start(n);
  for (Eigen::Index k = 0; k < n; ++k) start(k) = nd(rng);

  KrylovOptions ko;
  ko.tolerance = cfg.tolerance;
  ko.max_iterations = cfg.max_iterations;
  ko.krylov_dim = cfg.krylov_dim;
  const KrylovResult kr = largest_eigenpair(map, start, ko, units);

  GapResult r;
  r.spec = spec;
  r.method = Method::Iterative;
  r.lambda = kr.value;
  r.residual = kr.residual;
  r.iterations = kr.iterations;
  r.converged = kr.converged;
  if (cfg.want_eigvec) {
    const Eigen::VectorXd w = sub == Subspace::Full ? kr.vector : pr->lift(kr.vector);
    r.eigvec = unsymmetrize(op, w).normalized();
  }
  r.seconds = seconds_since(t0);
  return r;
}

GapResult formula_gap(const CircuitSpec& spec) {
  if (spec.group != Group::Unitary) throw UnsupportedSpec("closed-form gaps exist for unitary gates only");
  const auto t0 = std::chrono::steady_clock::now();
  GapResult r;
  r.spec = spec;
  r.method = Method::Formula;
  r.lambda = exact_gap(spec.d, spec.m, spec.n, spec.boundary).lambda;
  r.degenerate = spec.boundary == Boundary::Open;
  r.multiplicity = spec.boundary == Boundary::Open ? 2 : 1;
  r.seconds = seconds_since(t0);
  return r;
}

DecayReport decay_check(const CircuitSpec& spec, int L_max, std::uint64_t cap) {
  if (L_max < 1) throw InvalidArgument("L_max must be >= 1");
  const LayerOperator op(spec);
  check_dense_cap(full_dimension(op), cap);
  const LayerOperator sym = symmetrize(op);
  const Eigen::MatrixXd lam = build_dense(sym, cap);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(lam.rows(), lam.cols());
  for (const auto& u : symmetrized_unit_vectors(sym)) p += u * u.transpose();
  const Eigen::MatrixXd m = lam - p;

  DecayReport rep;
  Eigen::MatrixXd q = m;
  for (int L = 1; L <= L_max; ++L) {
    if (L > 1) q = (m * q).eval();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
    rep.points.push_back({L, svd.singularValues()(0)});
  }
  rep.rate = std::pow(rep.points.back().norm, 1.0 / L_max);

  const int lo = std::max(1, L_max / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& pt : rep.points) {
    if (pt.L < lo) continue;
    const double y = std::log(pt.norm);
    sx += pt.L;
    sy += y;
    sxx += double(pt.L) * pt.L;
    sxy += pt.L * y;
    ++cnt;
  }
  const double slope = cnt > 1 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::log(rep.rate);
  rep.fitted_rate = std::exp(slope);
  const double lambda = dense_gap(spec).lambda;
  rep.prefactor = rep.points.back().norm / std::pow(lambda, L_max);
  return rep;
}

}  // namespace gapforge
