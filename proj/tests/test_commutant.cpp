#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "gapforge/commutant.hpp"
#include "gapforge/haar.hpp"
#include "oracle.hpp"

using namespace gapforge;

namespace {

Eigen::MatrixXd explicit_trace_gram(const CommutantBasis& b) {
  const int n = b.dimension();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = (b.operators[i].matrix.transpose() * b.operators[j].matrix).trace();
  return g;
}

}  // namespace

TEST(CommutantBasis, UnitaryGramD2M1) {
  const auto b = build_commutant_basis(Group::Unitary, 2, 1);
  ASSERT_EQ(b.dimension(), 2);
  Eigen::Matrix2d expect;
  expect << 4, 2, 2, 4;
  EXPECT_EQ(b.gram, Eigen::MatrixXd(expect));
  EXPECT_LE((explicit_trace_gram(b) - b.gram).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CommutantBasis, UnitaryGramD2M2) {
  const auto b = build_commutant_basis(Group::Unitary, 2, 2);
  Eigen::Matrix2d expect;
  expect << 16, 4, 4, 16;
  EXPECT_EQ(b.gram, Eigen::MatrixXd(expect));
  EXPECT_LE((explicit_trace_gram(b) - b.gram).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CommutantBasis, OrthogonalAndSymplecticHaveThreeElements) {
  for (auto [g, d] : {std::pair{Group::Orthogonal, 2}, std::pair{Group::Symplectic, 4}}) {
    const auto b = build_commutant_basis(g, d, 1);
    EXPECT_EQ(b.dimension(), 3);
    EXPECT_LE((explicit_trace_gram(b) - b.gram).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.gram);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(CommutantBasis, SymplecticQubitCollapsesToSwap) {
  // Sp(1) = SU(2): the projector onto the symplectic form equals I - S
  const auto b = build_commutant_basis(Group::Symplectic, 2, 1);
  EXPECT_EQ(b.dimension(), 2);
  const auto s = site_basis(Group::Symplectic, 2, 1);
  EXPECT_EQ(s.dimension(), 3);
  ASSERT_EQ(s.elements.rows(), 3);
  EXPECT_EQ(s.elements(0, 2), 1);
  EXPECT_EQ(s.elements(1, 2), -1);
  EXPECT_EQ(s.elements(2, 2), 0);
}

TEST(CommutantBasis, SymplecticOddDimensionUnsupported) {
  EXPECT_THROW(build_commutant_basis(Group::Symplectic, 3, 1), UnsupportedGroupDimension);
}

TEST(CommutantBasis, LargeDimensionsKeepGramOnly) {
  const auto b = build_commutant_basis(Group::Unitary, 5, 2);
  EXPECT_FALSE(b.has_operators());
  EXPECT_EQ(b.gram(0, 0), 625.0);
  EXPECT_EQ(b.gram(0, 1), 25.0);
}

TEST(CommutantBasis, OperatorsCommuteWithHaarSamples) {
  for (Group g : {Group::Unitary, Group::Orthogonal, Group::Symplectic}) {
    const auto b = build_commutant_basis(g, 2, 2);  // q = 4
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Eigen::MatrixXcd v = haar_sample(g, 4, seed);
      const Eigen::MatrixXcd f = Eigen::kroneckerProduct(v, v);
      for (const auto& op : b.operators) {
        const Eigen::MatrixXcd p = op.matrix.cast<std::complex<double>>();
        EXPECT_LE((p * f - f * p).cwiseAbs().maxCoeff(), 1e-10) << to_string(g) << " " << to_char(op.label);
      }
    }
  }
}

TEST(WeingartenMoment, UnitaryExactEntries) {
  const auto amb = make_ambient(Group::Unitary, Group::Unitary, 2, 1);
  const RationalMatrix a = weingarten_moment_matrix_exact(Group::Unitary, amb);
  const Rational x(2, 5);
  EXPECT_EQ(a(0, 0), 1);
  EXPECT_EQ(a(3, 3), 1);
  EXPECT_EQ(a(0, 1), x);
  EXPECT_EQ(a(0, 2), x);
  EXPECT_EQ(a(3, 1), x);
  EXPECT_EQ(a(3, 2), x);
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(a(1, c), 0);
    EXPECT_EQ(a(2, c), 0);
  }
}

TEST(WeingartenMoment, UnitaryGeneralWeight) {
  for (int d : {2, 3, 5})
    for (int m : {1, 2, 3}) {
      const auto amb = make_ambient(Group::Unitary, Group::Unitary, d, m);
      const RationalMatrix a = weingarten_moment_matrix_exact(Group::Unitary, amb);
      Rational q = 1;
      for (int k = 0; k < m; ++k) q *= d;
      EXPECT_EQ(a(0, 1), q / (q * q + 1));
    }
}

TEST(WeingartenMoment, OrthogonalMatchesPrintedMatrixExactly) {
  const auto amb = make_ambient(Group::Orthogonal, Group::Orthogonal, 2, 1);
  const RationalMatrix a = weingarten_moment_matrix_exact(Group::Orthogonal, amb);
  const Rational s(7, 18), o(1, 18);
  const Rational golden[3][9] = {{1, s, s, s, 0, o, s, o, 0},
                                 {0, s, o, s, 1, s, o, s, 0},
                                 {0, o, s, o, 0, s, s, s, 1}};
  const int rows[3] = {0, 4, 8};
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) {
      Rational expect = 0;
      for (int k = 0; k < 3; ++k)
        if (rows[k] == r) expect = golden[k][c];
      EXPECT_EQ(a(r, c), expect) << r << "," << c;
    }
}

TEST(WeingartenMoment, ExplicitRouteMatchesTraceRoute) {
  struct Case {
    Group gate, left, right;
  };
  const Case cases[] = {{Group::Unitary, Group::Unitary, Group::Unitary},
                        {Group::Orthogonal, Group::Orthogonal, Group::Orthogonal},
                        {Group::Symplectic, Group::Symplectic, Group::Orthogonal},
                        {Group::Unitary, Group::Orthogonal, Group::Orthogonal}};
  for (const auto& c : cases) {
    const auto gate = build_commutant_basis(c.gate, 2, 2);
    const auto amb = make_ambient(c.left, c.right, 2, 1);
    const auto ex = weingarten_moment_matrix(gate, amb, MomentRoute::Explicit);
    const auto tr = weingarten_moment_matrix(gate, amb, MomentRoute::Trace);
    EXPECT_LE((ex.matrix - tr.matrix).cwiseAbs().maxCoeff(), 1e-12) << to_string(c.gate);
    EXPECT_LE(ex.idempotence_error(), 1e-12);
    EXPECT_LE(tr.idempotence_error(), 1e-12);
  }
}

TEST(WeingartenMoment, UnitaryOnThreeLabelAmbientRestrictsToA) {
  const auto gate = build_commutant_basis(Group::Unitary, 2, 2);
  const auto amb = make_ambient(Group::Orthogonal, Group::Orthogonal, 2, 1);
  const auto m = weingarten_moment_matrix(gate, amb, MomentRoute::Explicit);
  ASSERT_EQ(m.ambient_dimension(), 9);
  EXPECT_LE(m.idempotence_error(), 1e-12);
  // {i,s} x {i,s} sits at indices 0,1,3,4 of the 3-label product basis
  const int idx[4] = {0, 1, 3, 4};
  const Eigen::MatrixXd a = oracle::unitary_A(0.4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(m.matrix(idx[r], idx[c]), a(r, c), 1e-12);
}

TEST(WeingartenMoment, ProjectionOutsideAmbientSpanFails) {
  // orthogonal gate commutant contains Q x Q, which the 2-label ambient cannot express
  const auto gate = build_commutant_basis(Group::Orthogonal, 2, 2);
  const auto amb = make_ambient(Group::Unitary, Group::Unitary, 2, 1);
  EXPECT_THROW(weingarten_moment_matrix(gate, amb, MomentRoute::Explicit), AmbientExpansionFailure);
  EXPECT_THROW(weingarten_moment_matrix(gate, amb, MomentRoute::Trace), AmbientExpansionFailure);
}

TEST(WeingartenMoment, IdempotentAcrossDimensions) {
  for (Group g : {Group::Unitary, Group::Orthogonal})
    for (int d : {2, 3})
      for (int m : {1, 2}) {
        const auto amb = make_ambient(g, g, d, m);
        const auto a = weingarten_moment_matrix(build_commutant_basis(g, d, 2 * m), amb);
        EXPECT_LE(a.idempotence_error(), 1e-12);
      }
}
