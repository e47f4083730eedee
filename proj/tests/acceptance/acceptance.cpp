// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <stdexcept>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gapforge/commutant.hpp"
#include "gapforge/dmrg.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/haar.hpp"
#include "gapforge/layer_operator.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/pairs.hpp"

using namespace gapforge;

namespace {

constexpr double kSquareLawFormulaTol = 1e-14;
constexpr double kSquareLawNumericTol = 1e-10;
constexpr double kSquareLawSeconds = 300.0;
constexpr double kFormulaNumericTol = 1e-8;
constexpr double kStencilTol = 1e-13;
constexpr double kSineResidualTol = 1e-12;
constexpr double kOverlapTol = 1e-8;
constexpr double kDepthOpen = 1.553, kDepthClosed = 0.776, kDepthPrior = 6.21, kDepthTol = 5e-3;
constexpr double kGateRatio = 3.1, kGateRatioRel = 0.10;
constexpr double kDecayRel = 0.01;
constexpr double kDmrgTol = 1e-6;
constexpr double kDmrgSeconds = 900.0;
constexpr double kDmrgEnergyStability = 1e-8;
constexpr double kMcSigmas = 3.0;
constexpr double kMcRounding = 1e-12;  // entries with zero sample variance
constexpr std::int64_t kMcSamples = 100000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReducedState word(std::string_view s) { return ReducedState::parse(s); }

double coefficient(const std::vector<std::pair<ReducedState, double>>& out, std::string_view w) {
  for (const auto& [u, v] : out)
    if (u.str() == w) return v;
  return 0.0;
}

bool pair_constant(const ReducedState& w) {
  for (std::size_t p = 0; p + 1 < w.word.size(); p += 2)
    if (w.word[p] != w.word[p + 1]) return false;
  return true;
}

// 1. exact local matrices
void golden_matrices(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RationalMatrix a =
      weingarten_moment_matrix_exact(Group::Unitary, make_ambient(Group::Unitary, Group::Unitary, 2, 1));
  const Rational x(2, 5);
  const Rational ua[4][4] = {{1, x, x, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, x, x, 1}};
  int bad = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) bad += a(r, c) != ua[r][c];

  // general weight d^m/(d^{2m}+1)
  for (int d : {2, 3, 5})
    for (int m : {1, 2}) {
      const RationalMatrix g =
          weingarten_moment_matrix_exact(Group::Unitary, make_ambient(Group::Unitary, Group::Unitary, d, m));
      bad += g(0, 1) != local_weight(d, m);
    }

  const RationalMatrix b =
      weingarten_moment_matrix_exact(Group::Orthogonal, make_ambient(Group::Orthogonal, Group::Orthogonal, 2, 1));
  const Rational s(7, 18), t(1, 18);
  const Rational rows[3][9] = {{1, s, s, s, 0, t, s, t, 0}, {0, s, t, s, 1, s, t, s, 0}, {0, t, s, t, 0, s, s, s, 1}};
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) {
      Rational expect = 0;
      if (r == 0) expect = rows[0][c];
      if (r == 4) expect = rows[1][c];
      if (r == 8) expect = rows[2][c];
      bad += b(r, c) != expect;
    }
  const double secs = seconds_since(t0);
  o.detail << "mismatched entries " << bad << ", " << sci(secs) << " s";
  o.require(bad == 0, "exact entries");
  o.require(secs < 1.0, "runtime < 1 s");
}

double numeric_gap(int d, int m, int eta, Boundary b) {
  const CircuitSpec spec{d, m, eta * m, b, Group::Unitary};
  if (eta <= 20) return dense_gap(spec).lambda;
  if (eta <= 28) {
    SolverConfig cfg;
    cfg.tolerance = 1e-13;
    const GapResult r = iterative_gap(spec, cfg);
    if (!r.converged) throw std::runtime_error("iterative solve did not converge");
    return r.lambda;
  }
  DmrgConfig cfg;
  cfg.chi = 32;
  cfg.energy_tol = 1e-13;
  cfg.svd_cutoff = 1e-12;
  cfg.local_tol = 1e-10;
  const DmrgResult r = dmrg_gap(spec, cfg);
  if (!r.gap.converged) throw std::runtime_error("DMRG did not converge");
  return r.gap.lambda;
}

// 2. closed gap equals open gap squared
void square_law(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double formula_dev = 0.0, numeric_dev = 0.0, vs_formula = 0.0;
  int solves = 0;
  for (int d : {2, 3, 5})
    for (int m : {1, 2})
      for (int eta = 4; eta <= 40; eta += 2) {
        const double fo = exact_gap(d, m, eta * m, Boundary::Open).lambda;
        const double fc = exact_gap(d, m, eta * m, Boundary::Closed).lambda;
        formula_dev = std::max(formula_dev, std::abs(fc - fo * fo));
        const double no = numeric_gap(d, m, eta, Boundary::Open);
        const double nc = numeric_gap(d, m, eta, Boundary::Closed);
        solves += 2;
        numeric_dev = std::max(numeric_dev, std::abs(nc - no * no));
        vs_formula = std::max({vs_formula, std::abs(no - fo), std::abs(nc - fc)});
      }
  const double secs = seconds_since(t0);
  o.detail << "formula max|closed-open^2| " << sci(formula_dev) << ", numeric " << sci(numeric_dev) << " over "
           << solves << " solves (dense eta<=20, iterative <=28, DMRG beyond; max |numeric-formula| "
           << sci(vs_formula) << "), " << sci(secs) << " s";
  o.require(formula_dev <= kSquareLawFormulaTol, "formula square law");
  o.require(numeric_dev <= kSquareLawNumericTol, "numeric square law");
  o.require(secs < kSquareLawSeconds, "runtime < 5 min");
}

// 3. closed form against dense and iterative gaps
void formula_vs_numeric(Outcome& o) {
  double worst = 0.0;
  for (Boundary b : {Boundary::Open, Boundary::Closed}) {
    for (int n = 4; n <= 12; n += 2) {
      const CircuitSpec spec{2, 1, n, b, Group::Unitary};
      worst = std::max(worst, std::abs(dense_gap(spec).lambda - exact_gap(2, 1, n, b).lambda));
    }
    for (int n : {16, 20, 24}) {
      const GapResult r = iterative_gap({2, 1, n, b, Group::Unitary});
      o.require(r.converged, "iterative convergence at n=" + std::to_string(n));
      worst = std::max(worst, std::abs(r.lambda - exact_gap(2, 1, n, b).lambda));
    }
  }
  o.detail << "max deviation " << sci(worst);
  o.require(worst <= kFormulaNumericTol, "deviation");
}

// 4. block structure of the unitary transfer matrix, d = 2, m = 1
void block_structure(Outcome& o) {
  int increase = 0;
  double leak = 0.0, bound_ratio = 0.0, block_dev = 0.0;
  bool exact_square = true;
  for (int eta = 4; eta <= 10; eta += 2) {
    for (Boundary b : {Boundary::Open, Boundary::Closed}) {
      const CircuitSpec spec{2, 1, eta, b, Group::Unitary};
      const LayerOperator op(spec);
      for (std::uint64_t idx = 0; idx < op.dimension(); ++idx) {
        const int sw = ReducedState::from_index(idx, eta, 2).switches(b);
        SparseVector in;
        in[idx] = 1.0;
        for (const auto& [u, c] : op.apply(in))
          if (c != 0.0) increase = std::max(increase, ReducedState::from_index(u, eta, 2).switches(b) - sw);
      }

      const Eigen::MatrixXd lam = build_dense(op);
      Eigen::EigenSolver<Eigen::MatrixXd> es(lam);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        if (std::abs(es.eigenvalues()(k)) <= 1e-10) continue;
        const Eigen::VectorXcd v = es.eigenvectors().col(k).normalized();
        for (std::uint64_t idx = 0; idx < op.dimension(); ++idx)
          if (!pair_constant(ReducedState::from_index(idx, eta, 2))) leak = std::max(leak, std::abs(v(idx)));
      }

      for (int z = 1; z <= eta; ++z) {
        if (enumerate_sector(spec, z).empty()) continue;
        const Eigen::VectorXcd ev =
            Eigen::EigenSolver<Eigen::MatrixXd>(build_block_matrix(spec, z).matrix, false).eigenvalues();
        for (const auto& e : ev) bound_ratio = std::max(bound_ratio, std::abs(e) / zeta_bound(z, 2, 1));
      }
    }
    const RationalMatrix b1 = b1_matrix_exact(2, 1, eta);
    const RationalMatrix b2 = b2_matrix_exact(2, 1, eta);
    exact_square = exact_square && b2 == b1 * b1;
    // the exact blocks are the ones the transfer matrix produces; the open
    // one-switch sector holds B1 once per label swap
    const Eigen::MatrixXd b1d = b1.to_double();
    Eigen::MatrixXd b1pair = Eigen::MatrixXd::Zero(2 * b1d.rows(), 2 * b1d.cols());
    b1pair.topLeftCorner(b1d.rows(), b1d.cols()) = b1d;
    b1pair.bottomRightCorner(b1d.rows(), b1d.cols()) = b1d;
    block_dev = std::max(block_dev, (build_block_matrix({2, 1, eta, Boundary::Open, Group::Unitary}, 1).matrix -
                                     b1pair).cwiseAbs().maxCoeff());
    block_dev = std::max(block_dev, (build_block_matrix({2, 1, eta, Boundary::Closed, Group::Unitary}, 2).matrix -
                                     b2.to_double()).cwiseAbs().maxCoeff());
  }
  o.detail << "max switch increase " << increase << ", off-sector eigenvector amplitude " << sci(leak)
           << ", max |eig|/bound " << sci(bound_ratio) << ", B2 = B1^2 " << (exact_square ? "exact" : "violated")
           << " (blocks vs transfer matrix " << sci(block_dev) << ")";
  o.require(increase <= 0, "no switch-count increase");
  o.require(leak <= 1e-8, "even-block support");
  o.require(bound_ratio <= 1.0 + 1e-12, "zeta bound");
  o.require(exact_square && block_dev <= 1e-15, "B2 = B1^2");

  // outside the tested grid the stated bound is not universal
  for (auto [d, m, eta] : {std::tuple{3, 1, 10}, std::tuple{2, 2, 8}}) {
    const CircuitSpec spec{d, m, eta * m, Boundary::Closed, Group::Unitary};
    const Eigen::VectorXcd ev =
        Eigen::EigenSolver<Eigen::MatrixXd>(build_block_matrix(spec, 4).matrix, false).eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    o.notes.push_back("zeta=4 at d=" + std::to_string(d) + " m=" + std::to_string(m) + " eta=" + std::to_string(eta) +
                      " closed: max |eig| " + sci(top) + " vs stated bound " + sci(zeta_bound(4, d, m)) +
                      ", row-sum bound " + sci(zeta_rowsum_bound(4, d, m)));
  }
}

// 5. action of one layer on one- and two-switch words, d = 2, m = 1
void stencils(Outcome& o) {
  const double x2 = 0.16, x4 = x2 * x2;
  double worst = 0.0;
  auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

  const LayerOperator open8({2, 1, 8, Boundary::Open, Group::Unitary});
  const auto one = orbit_coefficients(open8, word("iiiissss"));
  check(coefficient(one, "iiiiiiss"), x2);
  check(coefficient(one, "iiiissss"), 2 * x2);
  check(coefficient(one, "iissssss"), x2);

  // closed, eta = 12: minority block of length k, orbit representative i^(12-k) s^k
  const LayerOperator closed12({2, 1, 12, Boundary::Closed, Group::Unitary});
  auto rep = [](int k) { return std::string(12 - k, 'i') + std::string(k, 's'); };
  const auto mid = orbit_coefficients(closed12, word(rep(6)));
  const double interior[5] = {1, 4, 6, 4, 1};
  for (int j = 0; j < 5; ++j) check(coefficient(mid, rep(2 + 2 * j)), interior[j] * x4);
  const auto edge = orbit_coefficients(closed12, word(rep(2)));
  check(coefficient(edge, std::string(12, 'i')), 33.0 / 4.0 * x4);
  check(coefficient(edge, rep(2)), 5 * x4);
  check(coefficient(edge, rep(4)), 4 * x4);
  check(coefficient(edge, rep(6)), 1 * x4);
  o.detail << "max deviation " << sci(worst);
  o.require(worst <= kStencilTol, "stencil coefficients");
}

// 6. sine eigenvector
void sine_eigenvector(Outcome& o) {
  double resid = 0.0, worst_overlap = 1.0;
  for (int eta : {8, 10, 12}) {
    const auto ex = exact_gap(2, 1, eta, Boundary::Open);
    Eigen::VectorXd s(ex.eigenvector.size());
    for (std::size_t i = 0; i < ex.eigenvector.size(); ++i) s(i) = ex.eigenvector[i].second;
    resid = std::max(resid, (b1_matrix(2, 1, eta) * s - ex.lambda * s).norm() / s.norm());

    const CircuitSpec spec{2, 1, eta, Boundary::Open, Group::Unitary};
    const LayerOperator op(spec);
    const LayerOperator sym = symmetrize(op);
    const auto units = symmetrized_unit_vectors(sym);
    // the gap is twofold: i^k s^(eta-k) and its label swap
    std::vector<Eigen::VectorXd> basis;
    for (int flip = 0; flip < 2; ++flip) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(op.dimension());
      for (const auto& [k, c] : ex.eigenvector) {
        ReducedState st;
        for (int p = 0; p < eta; ++p) st.word.push_back((p < k) != (flip == 1) ? Label::I : Label::S);
        v(st.index(2)) = c;
      }
      Eigen::VectorXd sv = symmetrize_vector(op, v);
      for (const auto& u : units) sv -= u * u.dot(sv);
      basis.push_back(sv);
    }
    const auto span = orthonormalize(basis);

    SolverConfig cfg;
    cfg.want_eigvec = true;
    cfg.subspace = Subspace::Full;
    for (const GapResult& r : {dense_gap(spec, cfg), iterative_gap(spec, cfg)}) {
      if (!r.eigvec) {
        o.require(false, "eigenvector returned");
        continue;
      }
      const Eigen::VectorXd w = symmetrize_vector(op, *r.eigvec).normalized();
      double overlap = 0.0;
      for (const auto& b : span) overlap += std::pow(b.dot(w), 2);
      worst_overlap = std::min(worst_overlap, overlap);
    }
  }
  o.detail << "B1 residual " << sci(resid) << ", min overlap with sine span 1-" << sci(1.0 - worst_overlap);
  o.require(resid <= kSineResidualTol, "B1 residual");
  o.require(worst_overlap >= 1.0 - kOverlapTol, "overlap");
}

// 7. depth bounds
void depth_bounds(Outcome& o) {
  const double open = design_depth(2, 1, 1000, Boundary::Open, 1e-3).linear_coefficient;
  const double closed = design_depth(2, 1, 1000, Boundary::Closed, 1e-3).linear_coefficient;
  const double prior = hunter_jones_depth(1000, 2, 1e-3).linear_coefficient;
  const GateCountComparison g = gate_count_compare(1 << 20, 1e-3);
  int violations = 0, points = 0;
  for (Boundary b : {Boundary::Open, Boundary::Closed})
    for (int n : {4, 8, 16, 32, 64})
      for (double eps : {0.5, 1e-2, 1e-4, 1e-8, 1e-12}) {
        const DepthBound db = design_depth(2, 1, n, b, eps);
        const double lam = exact_gap(2, 1, n, b).lambda;
        violations += !(db.L_min * std::log(lam) <= std::log(eps) - n * std::log(2.0));
        ++points;
      }
  o.detail << "L/n open " << open << ", closed " << closed << ", prior " << prior << "; gate ratio " << g.ratio
           << " (m=" << g.m_log << "); consistency violations " << violations << "/" << points;
  o.require(std::abs(open - kDepthOpen) <= kDepthTol, "open constant");
  o.require(std::abs(closed - kDepthClosed) <= kDepthTol, "closed constant");
  o.require(std::abs(prior - kDepthPrior) <= 2 * kDepthTol, "prior constant");
  o.require(std::abs(g.ratio - kGateRatio) <= kGateRatioRel * kGateRatio, "gate-count ratio");
  o.require(points == 50 && violations == 0, "consistency grid");
}

// 8. decay of the deflated layer power
void decay(Outcome& o) {
  const DecayReport r = decay_check({2, 1, 8, Boundary::Open, Group::Unitary}, 50);
  const double lam = exact_gap(2, 1, 8, Boundary::Open).lambda;
  const double rel = std::abs(r.rate - lam) / lam;
  o.detail << "||M^50||^(1/50) " << r.rate << " vs gap " << lam << " (relative " << sci(rel) << ")";
  o.require(rel <= kDecayRel, "rate within 1%");
}

// 9. DMRG
void dmrg(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (Boundary b : {Boundary::Open, Boundary::Closed}) {
    DmrgConfig cfg;
    cfg.chi = 80;
    const DmrgResult r = dmrg_gap(CircuitSpec{2, 1, 40, b, Group::Unitary}, cfg);
    o.require(r.gap.converged, "unitary n=40 convergence");
    worst = std::max(worst, std::abs(r.gap.lambda - exact_gap(2, 1, 40, b).lambda));
  }
  const double secs = seconds_since(t0);
  o.detail << "unitary n=40 max deviation " << sci(worst) << " in " << sci(secs) << " s";
  o.require(worst <= kDmrgTol, "unitary n=40 deviation");
  o.require(secs < kDmrgSeconds, "unitary n=40 runtime < 15 min");

  int orderings = 0, bad_order = 0, unconverged = 0;
  double worst_delta = 0.0;
  std::ostringstream table;
  for (Boundary b : {Boundary::Open, Boundary::Closed})
    for (int n : {20, 40, 70}) {
      double lam[3];
      int gi = 0;
      for (Group g : {Group::Unitary, Group::Orthogonal, Group::Symplectic}) {
        DmrgConfig cfg;
        cfg.chi = 80;
        const DmrgResult r = dmrg_gap(CircuitSpec{2, 1, n, b, g}, cfg);
        unconverged += !r.gap.converged;
        if (r.history.size() >= 2) worst_delta = std::max(worst_delta, std::abs(r.history.back().delta));
        lam[gi++] = r.gap.lambda;
      }
      table << " " << to_string(b)[0] << n << ":" << sci(lam[0]) << "/" << sci(lam[1]) << "/" << sci(lam[2]);
      orderings += 2;
      bad_order += !(lam[0] < lam[1]) + !(lam[0] < lam[2]);
      if (b == Boundary::Closed) {
        ++orderings;
        bad_order += !(lam[2] > lam[1]);
      }
    }
  // small closed chains: symplectic below orthogonal
  for (int n : {4, 6}) {
    const double s = dense_gap({2, 1, n, Boundary::Closed, Group::Symplectic}).lambda;
    const double t = dense_gap({2, 1, n, Boundary::Closed, Group::Orthogonal}).lambda;
    table << " c" << n << ":S/O " << sci(s) << "/" << sci(t);
    ++orderings;
    bad_order += !(s < t);
  }
  o.detail << "; U/O/S gaps" << table.str() << "; unconverged " << unconverged << ", last sweep |dE| "
           << sci(worst_delta) << ", ordering violations " << bad_order << "/" << orderings;
  o.require(unconverged == 0 && worst_delta < kDmrgEnergyStability, "orthogonal/symplectic convergence");
  o.require(bad_order == 0, "ordering");
}

// 10. Monte-Carlo against the Weingarten values
void monte_carlo(Outcome& o) {
  for (Group g : {Group::Unitary, Group::Orthogonal}) {
    const MonteCarloMoment mc = mc_local_moment(g, 2, 1, kMcSamples, 20240607, 0);
    const LocalMomentMatrix w = weingarten_moment_matrix(build_commutant_basis(g, 2, 2), native_ambient(g, 2, 1));
    int outside = 0, deterministic = 0;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < w.matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < w.matrix.cols(); ++c) {
        const double dev = std::abs(mc.estimate.matrix(r, c) - w.matrix(r, c));
        const double se = mc.standard_error(r, c);
        outside += dev > kMcSigmas * se + kMcRounding;
        if (se <= kMcRounding) ++deterministic;
        else worst = std::max(worst, dev / se);
      }
    o.detail << to_string(g) << " " << w.matrix.size() << " entries, " << outside << " outside 3 sigma (max "
             << sci(worst) << " sigma, " << deterministic << " with zero sample variance); ";
    o.require(outside == 0, std::string(to_string(g)) + " entries");
  }
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "golden local matrices", golden_matrices},
      {2, "square law", square_law},
      {3, "formula vs numeric", formula_vs_numeric},
      {4, "block structure", block_structure},
      {5, "action stencils", stencils},
      {6, "sine eigenvector", sine_eigenvector},
      {7, "depth bounds", depth_bounds},
      {8, "decay law", decay},
      {9, "DMRG", dmrg},
      {10, "Monte-Carlo oracle", monte_carlo},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(),
                seconds_since(t0));
    for (const auto& n : o.notes) std::printf("     note: %s\n", n.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
