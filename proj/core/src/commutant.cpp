#include "gapforge/commutant.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>

namespace gapforge {
namespace {

Eigen::MatrixXd identity_op(int q) {
  return Eigen::MatrixXd::Identity(q * q, q * q);
}

Eigen::MatrixXd swap_op(int q) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(q * q, q * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) s(a * q + b, b * q + a) = 1.0;
  return s;
}

// |J><J| with |J> = vec(J) in the copy-major ordering.
Eigen::MatrixXd rank_one_op(const Eigen::MatrixXd& j) {
  const int q = static_cast<int>(j.rows());
  Eigen::VectorXd v(q * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) v(a * q + b) = j(a, b);
  return v * v.transpose();
}

RationalMatrix site_gram(Group g, const BigInt& q) {
  const Rational q1(q);
  const Rational q2(q * q);
  const int dim = g == Group::Unitary ? 2 : 3;
  RationalMatrix gram(dim, dim);
  for (int i = 0; i < dim; ++i) gram(i, i) = q2;
  gram(0, 1) = gram(1, 0) = q1;
  if (dim == 3) {
    gram(0, 2) = gram(2, 0) = q1;
    // <SWAP, Q> = q for the transposition pair, -q for its Omega twist.
    gram(1, 2) = gram(2, 1) = g == Group::Symplectic ? Rational(-q1) : q1;
  }
  return gram;
}

std::uint64_t checked_local_dim(int d, int m) {
  if (d < 2 || m < 1) throw InvalidDimension("need d >= 2 and m >= 1");
  return ipow(static_cast<std::uint64_t>(d), static_cast<unsigned>(m));
}

Eigen::VectorXd vec(const Eigen::MatrixXd& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
}

}  // namespace

std::uint64_t CommutantBasis::local_dim() const {
  return ipow(static_cast<std::uint64_t>(d), static_cast<unsigned>(m));
}

int CommutantBasis::index_of(Label l) const {
  for (int k = 0; k < dimension(); ++k)
    if (labels[k] == l) return k;
  return -1;
}

Eigen::MatrixXd symplectic_form(int q) {
  if (q % 2 != 0) throw InvalidDimension("symplectic form needs an even dimension");
  const int h = q / 2;
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(q, q);
  om.topRightCorner(h, h) = Eigen::MatrixXd::Identity(h, h);
  om.bottomLeftCorner(h, h) = -Eigen::MatrixXd::Identity(h, h);
  return om;
}

CommutantBasis build_commutant_basis(Group g, int d, int m, std::uint64_t explicit_cap) {
  const std::uint64_t q = checked_local_dim(d, m);
  if (g == Group::Symplectic && q % 2 != 0)
    throw UnsupportedGroupDimension("symplectic commutant needs an even local dimension, got " +
                                    std::to_string(q));
  CommutantBasis b;
  b.group = g;
  b.d = d;
  b.m = m;
  b.labels = {Label::I, Label::S};
  if (g != Group::Unitary) b.labels.push_back(Label::T);
  b.exact_gram = site_gram(g, BigInt(q));
  b.elements = RationalMatrix::identity(b.dimension());
  if (g == Group::Symplectic && q == 2) {
    // Sp(1) = SU(2): |Omega><Omega| = I - S
    b.labels.pop_back();
    RationalMatrix gram(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gram(i, j) = b.exact_gram(i, j);
    b.exact_gram = gram;
    b.elements = RationalMatrix(2, 3);
    b.elements(0, 0) = 1;
    b.elements(1, 1) = 1;
    b.elements(0, 2) = 1;
    b.elements(1, 2) = -1;
  }
  b.gram = b.exact_gram.to_double();

  if (q <= explicit_cap) {
    const int qi = static_cast<int>(q);
    b.operators.push_back({Label::I, identity_op(qi)});
    b.operators.push_back({Label::S, swap_op(qi)});
    if (g == Group::Orthogonal)
      b.operators.push_back({Label::T, rank_one_op(Eigen::MatrixXd::Identity(qi, qi))});
    else if (g == Group::Symplectic && q > 2)
      b.operators.push_back({Label::T, rank_one_op(symplectic_form(qi))});
  }
  return b;
}

CommutantBasis site_basis(Group g, int d, int m, std::uint64_t explicit_cap) {
  CommutantBasis b = build_commutant_basis(g, d, m, explicit_cap);
  if (g != Group::Symplectic || b.dimension() == 3) return b;
  const RationalMatrix twisted = b.elements;
  b = build_commutant_basis(Group::Orthogonal, d, m, explicit_cap);
  b.group = Group::Symplectic;
  b.elements = RationalMatrix(3, 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) b.elements(r, c) = twisted(r, c);
  return b;
}

Eigen::MatrixXd to_gate_order(const Eigen::MatrixXd& op, std::uint64_t q64) {
  const int q = static_cast<int>(q64);
  const int n = q * q * q * q;
  if (op.rows() != n || op.cols() != n) throw DimensionMismatch("operator is not on two doubled sites");
  std::vector<int> perm(n);
  for (int a1 = 0; a1 < q; ++a1)
    for (int a2 = 0; a2 < q; ++a2)
      for (int b1 = 0; b1 < q; ++b1)
        for (int b2 = 0; b2 < q; ++b2)
          perm[((a1 * q + a2) * q + b1) * q + b2] = ((a1 * q + b1) * q + a2) * q + b2;
  Eigen::MatrixXd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(perm[r], perm[c]) = op(r, c);
  return out;
}

Eigen::MatrixXd AmbientBasis::gate_ordered(int a, int b) const {
  if (!left.has_operators() || !right.has_operators())
    throw UnsupportedGroupDimension("ambient basis has no explicit operators at this dimension");
  Eigen::MatrixXd k = Eigen::kroneckerProduct(left.operators[a].matrix, right.operators[b].matrix);
  return to_gate_order(k, left.local_dim());
}

double LocalMomentMatrix::idempotence_error() const {
  return (matrix * matrix - matrix).cwiseAbs().maxCoeff();
}

std::vector<LabelPair> gate_commutant_pairs(Group g) {
  std::vector<LabelPair> p = {{Label::I, Label::I}, {Label::S, Label::S}};
  if (g != Group::Unitary) p.push_back({Label::T, Label::T});
  return p;
}

AmbientBasis make_ambient(Group left_site, Group right_site, int d, int m) {
  return {site_basis(left_site, d, m), site_basis(right_site, d, m)};
}

RationalMatrix weingarten_moment_matrix_exact(Group gate, const AmbientBasis& amb) {
  const auto pairs = gate_commutant_pairs(gate);
  const int dc = static_cast<int>(pairs.size());
  const int dl = amb.left.dimension();
  const int dr = amb.right.dimension();
  const RationalMatrix& gl = amb.left.exact_gram;
  const RationalMatrix& gr = amb.right.exact_gram;

  // coefficient vectors of the site factors of every gate commutant element
  std::vector<std::vector<Rational>> al(dc), ar(dc);
  auto factor = [](const CommutantBasis& site, Label l) {
    const int k = static_cast<int>(l);
    if (k >= site.elements.cols())
      throw AmbientExpansionFailure("gate commutant element is outside the ambient label span");
    std::vector<Rational> v(site.dimension());
    for (int r = 0; r < site.dimension(); ++r) v[r] = site.elements(r, k);
    return v;
  };
  for (int k = 0; k < dc; ++k) {
    al[k] = factor(amb.left, pairs[k].left);
    ar[k] = factor(amb.right, pairs[k].right);
  }
  // <x, G y> for coefficient vectors, and <x, G e_a>
  auto form = [](const RationalMatrix& g, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0)
        for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * g(i, j) * y[j];
    return s;
  };
  auto unit = [](int n, int a) {
    std::vector<Rational> e(n, Rational(0));
    e[a] = 1;
    return e;
  };

  RationalMatrix w(dc, dc);
  for (int mu = 0; mu < dc; ++mu)
    for (int nu = 0; nu < dc; ++nu) w(mu, nu) = form(gl, al[mu], al[nu]) * form(gr, ar[mu], ar[nu]);

  RationalMatrix rhs(dc, dl * dr);
  for (int nu = 0; nu < dc; ++nu)
    for (int a = 0; a < dl; ++a)
      for (int b = 0; b < dr; ++b) rhs(nu, a * dr + b) = form(gl, al[nu], unit(dl, a)) * form(gr, ar[nu], unit(dr, b));

  RationalMatrix coef;
  try {
    coef = solve(w, rhs);
  } catch (const std::domain_error&) {
    throw SingularGram("gate commutant Gram matrix is singular");
  }
  RationalMatrix out(dl * dr, dl * dr);
  for (int mu = 0; mu < dc; ++mu)
    for (int a = 0; a < dl; ++a)
      for (int b = 0; b < dr; ++b) {
        const Rational f = al[mu][a] * ar[mu][b];
        if (f == 0) continue;
        for (int col = 0; col < dl * dr; ++col) out(a * dr + b, col) += f * coef(mu, col);
      }
  return out;
}

namespace {

LocalMomentMatrix explicit_route(const CommutantBasis& gate, const AmbientBasis& amb) {
  if (!gate.has_operators())
    throw UnsupportedGroupDimension("explicit route needs materialized gate commutant operators");
  const int dc = gate.dimension();
  const int dl = amb.left.dimension();
  const int dr = amb.right.dimension();
  const int na = dl * dr;

  Eigen::MatrixXd gv(gate.operators[0].matrix.size(), dc);
  for (int mu = 0; mu < dc; ++mu) gv.col(mu) = vec(gate.operators[mu].matrix);
  const Eigen::MatrixXd w = gv.transpose() * gv;
  Eigen::JacobiSVD<Eigen::MatrixXd> wsvd(w);
  const auto& sv = wsvd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw SingularGram("gate commutant Gram matrix is singular");

  Eigen::MatrixXd av(gv.rows(), na);
  for (int a = 0; a < dl; ++a)
    for (int b = 0; b < dr; ++b) {
      const Eigen::MatrixXd x = amb.gate_ordered(a, b);
      if (x.size() != gv.rows()) throw DimensionMismatch("ambient and gate dimensions differ");
      av.col(a * dr + b) = vec(x);
    }

  // Projection of every ambient operator onto the gate commutant.
  const Eigen::MatrixXd projected = gv * w.ldlt().solve(gv.transpose() * av);
  // Expansion back in ambient coordinates.
  Eigen::MatrixXd gamb = av.transpose() * av;
  Eigen::MatrixXd coef = gamb.ldlt().solve(av.transpose() * projected);
  const double resid = (av * coef - projected).norm();
  if (resid > 1e-10 * std::max(1.0, projected.norm()))
    throw AmbientExpansionFailure("projected operator does not lie in the ambient span (residual " +
                                  std::to_string(resid) + ")");

  LocalMomentMatrix out;
  out.left = amb.left.labels;
  out.right = amb.right.labels;
  out.matrix = coef;
  return out;
}

}  // namespace

LocalMomentMatrix weingarten_moment_matrix(const CommutantBasis& gate, const AmbientBasis& amb,
                                           MomentRoute route) {
  if (gate.d != amb.left.d || gate.d != amb.right.d || gate.m != amb.left.m + amb.right.m)
    throw DimensionMismatch("gate commutant must act on the two ambient sites");
  if (route == MomentRoute::Explicit) return explicit_route(gate, amb);
  LocalMomentMatrix out;
  out.left = amb.left.labels;
  out.right = amb.right.labels;
  out.matrix = weingarten_moment_matrix_exact(gate.group, amb).to_double();
  return out;
}

}  // namespace gapforge
