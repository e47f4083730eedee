#include <cmath>
#include <sstream>

#include "app.hpp"
#include "gapforge/commutant.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/haar.hpp"
#include "gapforge/layer_operator.hpp"
#include "gapforge/numeric.hpp"

namespace gapforge::cli {
namespace {

struct Report {
  std::ostream& out;
  int failed = 0;
  int passed = 0;

  void check(bool ok, const std::string& name, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    (ok ? passed : failed)++;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool pair_constant(const ReducedState& w) {
  for (std::size_t p = 0; p + 1 < w.word.size(); p += 2)
    if (w.word[p] != w.word[p + 1]) return false;
  return true;
}

void lemma_suite(Report& rep, int d, int m, int eta) {
  for (Boundary b : {Boundary::Open, Boundary::Closed}) {
    const CircuitSpec spec{d, m, eta * m, b, Group::Unitary};
    const LayerOperator op(spec);
    const std::string tag = "[" + spec.describe() + "]";

    // no output word has more switches than its input
    int worst = 0;
    for (std::uint64_t idx = 0; idx < op.dimension(); ++idx) {
      const ReducedState w = ReducedState::from_index(idx, eta, 2);
      SparseVector in;
      in[idx] = 1.0;
      for (const auto& [u, c] : op.apply(in)) {
        if (std::abs(c) <= 1e-13) continue;
        worst = std::max(worst, ReducedState::from_index(u, eta, 2).switches(b) - w.switches(b));
      }
    }
    rep.check(worst <= 0, "switch-monotonicity " + tag, "max switch increase " + std::to_string(worst));

    // eigenvectors with nonzero eigenvalue live on pair-constant words
    const Eigen::MatrixXd lam = build_dense(op);
    Eigen::EigenSolver<Eigen::MatrixXd> es(lam);
    double leak = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      if (std::abs(es.eigenvalues()(k)) <= 1e-10) continue;
      const Eigen::VectorXcd v = es.eigenvectors().col(k).normalized();
      for (std::uint64_t idx = 0; idx < op.dimension(); ++idx)
        if (!pair_constant(ReducedState::from_index(idx, eta, 2))) leak = std::max(leak, std::abs(v(idx)));
    }
    rep.check(leak <= 1e-8, "even-block-support " + tag, "max off-sector amplitude " + fmt(leak));

    // every B_zeta eigenvalue below the stated bound
    for (int z = 1; z <= eta; ++z) {
      if (enumerate_sector(spec, z).empty()) continue;
      const BlockMatrix bm = build_block_matrix(spec, z);
      const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(bm.matrix, false).eigenvalues();
      double top = 0.0;
      for (const auto& e : ev) top = std::max(top, std::abs(e));
      const double bound = zeta_bound(z, d, m);
      rep.check(top <= bound * (1 + 1e-12), "zeta-bound " + tag + " zeta=" + std::to_string(z),
                "max |eig| " + fmt(top) + " vs " + fmt(bound) + " (row-sum bound " +
                    fmt(zeta_rowsum_bound(z, d, m)) + ")");
    }
  }
  const RationalMatrix b1 = b1_matrix_exact(d, m, eta);
  rep.check(b2_matrix_exact(d, m, eta) == b1 * b1, "B2=B1^2 [eta=" + std::to_string(eta) + "]", "exact rational");
}

void mc_suite(Report& rep, std::int64_t samples, std::uint64_t seed) {
  for (Group g : {Group::Unitary, Group::Orthogonal, Group::Symplectic}) {
    const MonteCarloMoment mc = mc_local_moment(g, 2, 1, samples, seed, worker_count());
    const LocalMomentMatrix w =
        weingarten_moment_matrix(build_commutant_basis(g, 2, 2), native_ambient(g, 2, 1));
    int outside = 0;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < w.matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < w.matrix.cols(); ++c) {
        const double dev = std::abs(mc.estimate.matrix(r, c) - w.matrix(r, c));
        const double se = mc.standard_error(r, c);
        // entries with zero sample variance are compared with a rounding slack
        outside += dev > 3 * se + 1e-12;
        if (se > 0) worst = std::max(worst, dev / se);
      }
    rep.check(outside == 0, std::string("monte-carlo ") + std::string(to_string(g)),
              std::to_string(w.matrix.size()) + " entries, " + std::to_string(outside) + " outside 3 sigma, max " +
                  fmt(worst) + " sigma");
  }
}

void square_law_suite(Report& rep, const std::string& grid) {
  std::vector<int> ds{2, 3, 5}, ms{1, 2, 3};
  int eta_max = 40;
  if (grid == "small") {
    ds = {2};
    ms = {1};
    eta_max = 12;
  }
  double worst = 0.0;
  for (int d : ds)
    for (int m : ms)
      for (int eta = 4; eta <= eta_max; eta += 2) {
        const double o = exact_gap(d, m, eta * m, Boundary::Open).lambda;
        const double c = exact_gap(d, m, eta * m, Boundary::Closed).lambda;
        worst = std::max(worst, std::abs(c - o * o));
      }
  rep.check(worst <= 1e-14, "square-law formula", "max deviation " + fmt(worst));

  worst = 0.0;
  double formula_dev = 0.0;
  for (int d : ds)
    for (int m : ms) {
      if (m > 2) continue;
      for (int eta = 4; eta <= std::min(eta_max, 10); eta += 2) {
        const double o = dense_gap({d, m, eta * m, Boundary::Open, Group::Unitary}).lambda;
        const double c = dense_gap({d, m, eta * m, Boundary::Closed, Group::Unitary}).lambda;
        worst = std::max(worst, std::abs(c - o * o));
        formula_dev = std::max(formula_dev, std::abs(o - exact_gap(d, m, eta * m, Boundary::Open).lambda));
      }
    }
  rep.check(worst <= 1e-10, "square-law dense", "max deviation " + fmt(worst));
  rep.check(formula_dev <= 1e-10, "dense-vs-formula", "max deviation " + fmt(formula_dev));
}

}  // namespace

int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run verification suites", "verify"};
  std::string suite = "all", grid = "default";
  int eta = 8, d = 2, m = 1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 20240607;
  app.add_option("--suite", suite, "lemmas, mc, square-law or all")
      ->check(CLI::IsMember({"lemmas", "mc", "square-law", "all"}));
  app.add_option("--eta", eta, "Reduced sites for the lemma suite (even, 4..12)");
  app.add_option("--d", d, "Local dimension for the lemma suite");
  app.add_option("--m", m, "Group size for the lemma suite");
  app.add_option("--samples", samples, "Monte-Carlo samples");
  app.add_option("--seed", seed, "Monte-Carlo seed");
  app.add_option("--grid", grid, "default or small")->check(CLI::IsMember({"default", "small"}));
  if (auto rc = parse_app(app, args, out, err)) return *rc;
  if (eta < 4 || eta > 12 || eta % 2 != 0 || d < 2 || m < 1 || samples < 100) {
    err << "verify: need even 4 <= eta <= 12, d >= 2, m >= 1 and samples >= 100\n";
    return kBadArguments;
  }

  Report rep{out};
  try {
    if (suite == "lemmas" || suite == "all") lemma_suite(rep, d, m, eta);
    if (suite == "mc" || suite == "all") mc_suite(rep, samples, seed);
    if (suite == "square-law" || suite == "all") square_law_suite(rep, grid);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kBadArguments;
  }
  out << rep.passed << " passed, " << rep.failed << " failed\n";
  return rep.failed == 0 ? kOk : kCheckFailed;
}

}  // namespace gapforge::cli
