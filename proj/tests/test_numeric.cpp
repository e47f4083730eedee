#include <gtest/gtest.h>

#include <cmath>

#include "gapforge/exact.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/pairs.hpp"

using namespace gapforge;

namespace {

CircuitSpec spec(Group g, Boundary b, int n, int d = 2, int m = 1) { return {d, m, n, b, g}; }

}  // namespace

TEST(DenseGap, UnitaryMatchesFormula) {
  for (Boundary b : {Boundary::Open, Boundary::Closed})
    for (int n : {4, 6, 8, 10, 12}) {
      const auto r = dense_gap(spec(Group::Unitary, b, n));
      EXPECT_NEAR(r.lambda, exact_gap(2, 1, n, b).lambda, 1e-10) << n;
      EXPECT_EQ(r.unit_eigenvalues, 2);
    }
}

TEST(DenseGap, RawRouteAgrees) {
  SolverConfig raw;
  raw.raw_dense = true;
  for (Group g : {Group::Unitary, Group::Orthogonal, Group::Symplectic})
    for (Boundary b : {Boundary::Open, Boundary::Closed}) {
      const auto a = dense_gap(spec(g, b, 4));
      const auto c = dense_gap(spec(g, b, 4), raw);
      EXPECT_NEAR(a.lambda, c.lambda, 1e-9) << to_string(g) << " " << to_string(b);
      EXPECT_EQ(c.unit_eigenvalues, g == Group::Unitary ? 2 : 3);
    }
  const auto u = dense_gap(spec(Group::Unitary, Boundary::Open, 8), raw);
  EXPECT_NEAR(u.lambda, 0.546274, 1e-6);
  EXPECT_TRUE(u.degenerate);
  EXPECT_EQ(u.multiplicity, 2);
}

TEST(DenseGap, OpenUnitaryDegenerate) {
  const auto r = dense_gap(spec(Group::Unitary, Boundary::Open, 8));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.multiplicity, 2);
  EXPECT_EQ(r.status(), "ok;degenerate");
}

TEST(DenseGap, OrthogonalAboveUnitary) {
  const double u = dense_gap(spec(Group::Unitary, Boundary::Open, 6)).lambda;
  const double o = dense_gap(spec(Group::Orthogonal, Boundary::Open, 6)).lambda;
  EXPECT_GT(o, u);
  EXPECT_NEAR(o, 0.527612, 1e-6);
}

TEST(DenseGap, CapIsEnforced) {
  SolverConfig cfg;
  cfg.dense_cap = 100;
  EXPECT_THROW(dense_gap(spec(Group::Unitary, Boundary::Open, 8), cfg), DimensionCap);
}

TEST(DenseGap, EigenvectorIsLambdaEigenvector) {
  SolverConfig cfg;
  cfg.want_eigvec = true;
  const CircuitSpec s = spec(Group::Orthogonal, Boundary::Closed, 6);
  const auto r = dense_gap(s, cfg);
  ASSERT_TRUE(r.eigvec);
  const LayerOperator op(s);
  const Eigen::VectorXd lv = apply_layer(op, *r.eigvec);
  EXPECT_LE((lv - r.lambda * *r.eigvec).norm(), 1e-9);
}

TEST(IterativeGap, MatchesDense) {
  for (Group g : {Group::Unitary, Group::Orthogonal, Group::Symplectic})
    for (Boundary b : {Boundary::Open, Boundary::Closed})
      for (int n : {6, 8}) {
        const double d = dense_gap(spec(g, b, n)).lambda;
        const auto it = iterative_gap(spec(g, b, n));
        EXPECT_TRUE(it.converged);
        EXPECT_NEAR(it.lambda, d, 1e-8) << to_string(g) << " " << to_string(b) << " " << n;
        EXPECT_LE(it.residual, 1e-10);
      }
}

TEST(IterativeGap, FullAndPairedSubspacesAgree) {
  SolverConfig full, paired;
  full.subspace = Subspace::Full;
  paired.subspace = Subspace::Paired;
  for (Group g : {Group::Unitary, Group::Orthogonal})
    for (Boundary b : {Boundary::Open, Boundary::Closed}) {
      const auto s = spec(g, b, 8);
      EXPECT_NEAR(iterative_gap(s, full).lambda, iterative_gap(s, paired).lambda, 1e-9);
    }
}

TEST(IterativeGap, FormulaAgreement) {
  for (Boundary b : {Boundary::Open, Boundary::Closed})
    for (int n : {8, 12, 16, 20, 24}) {
      const auto r = iterative_gap(spec(Group::Unitary, b, n));
      EXPECT_NEAR(r.lambda, exact_gap(2, 1, n, b).lambda, 1e-8) << n;
    }
}

TEST(IterativeGap, SymplecticOrthogonalCrossoverClosed) {
  for (int n : {4, 6})
    EXPECT_LT(iterative_gap(spec(Group::Symplectic, Boundary::Closed, n)).lambda,
              iterative_gap(spec(Group::Orthogonal, Boundary::Closed, n)).lambda);
  for (int n : {8, 12})
    EXPECT_GT(iterative_gap(spec(Group::Symplectic, Boundary::Closed, n)).lambda,
              iterative_gap(spec(Group::Orthogonal, Boundary::Closed, n)).lambda);
}

TEST(IterativeGap, EigenvectorDeflatedAndIdentified) {
  SolverConfig cfg;
  cfg.want_eigvec = true;
  cfg.subspace = Subspace::Full;
  const CircuitSpec s = spec(Group::Unitary, Boundary::Open, 10);
  const auto r = iterative_gap(s, cfg);
  ASSERT_TRUE(r.eigvec);
  const LayerOperator op(s);
  const LayerOperator sym = symmetrize(op);
  const Eigen::VectorXd w = symmetrize_vector(op, *r.eigvec).normalized();
  for (const auto& u : symmetrized_unit_vectors(sym)) EXPECT_LE(std::abs(u.dot(w)), 1e-10);

  // span of the symmetrized sine vectors on i^k s^(eta-k) and s^k i^(eta-k);
  // the true eigenvector also carries constant-word weight, removed by deflation
  const auto units = symmetrized_unit_vectors(sym);
  const auto ex = exact_gap(2, 1, 10, Boundary::Open);
  std::vector<Eigen::VectorXd> basis;
  for (int flip = 0; flip < 2; ++flip) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(op.dimension());
    for (const auto& [k, c] : ex.eigenvector) {
      ReducedState st;
      for (int p = 0; p < 10; ++p) st.word.push_back((p < k) != (flip == 1) ? Label::I : Label::S);
      v(st.index(2)) = c;
    }
    Eigen::VectorXd sv = symmetrize_vector(op, v);
    for (const auto& u : units) sv -= u * u.dot(sv);
    basis.push_back(sv);
  }
  const auto on = orthonormalize(basis);
  double overlap = 0;
  for (const auto& b : on) overlap += std::pow(b.dot(w), 2);
  EXPECT_GE(overlap, 1 - 1e-8);
}

TEST(IterativeGap, InvalidTolerance) {
  SolverConfig cfg;
  cfg.tolerance = 0;
  EXPECT_THROW(iterative_gap(spec(Group::Unitary, Boundary::Open, 8), cfg), InvalidArgument);
}

TEST(FormulaGap, UnitaryOnly) {
  EXPECT_NEAR(formula_gap(spec(Group::Unitary, Boundary::Closed, 8)).lambda, 0.298415, 1e-6);
  EXPECT_THROW(formula_gap(spec(Group::Orthogonal, Boundary::Closed, 8)), UnsupportedSpec);
}

TEST(Decay, RateApproachesGap) {
  const auto r = decay_check(spec(Group::Unitary, Boundary::Open, 8), 50);
  const double lam = exact_gap(2, 1, 8, Boundary::Open).lambda;
  EXPECT_LT(r.points.front().norm, 1.0);
  EXPECT_NEAR(r.rate, lam, 0.01 * lam);
  EXPECT_NEAR(r.fitted_rate, lam, 1e-3 * lam);
  const auto c = decay_check(spec(Group::Unitary, Boundary::Closed, 8), 50);
  EXPECT_NEAR(c.rate, r.rate * r.rate, 0.01 * r.rate * r.rate);
}

TEST(PairReduction, IsometriesAndRoundTrip) {
  const LayerOperator sym = symmetrize(LayerOperator(spec(Group::Orthogonal, Boundary::Open, 6)));
  const PairReduction pr = pair_reduction(sym);
  EXPECT_EQ(pr.dimension(), 27u);
  for (const auto& u : pr.isometries)
    EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(27, -1, 1);
  EXPECT_LE((pr.project(pr.lift(y)) - y).norm(), 1e-12);
  // the lifted vectors lie in the range of the odd half layer
  const auto [l1, l2] = half_layer_factors(sym);
  const Eigen::VectorXd x = pr.lift(y);
  EXPECT_LE((l1.apply(x) - x).norm(), 1e-12);
}
