#include "gapforge/pairs.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace gapforge {

std::uint64_t PairReduction::dimension() const {
  return ipow(static_cast<std::uint64_t>(dc), static_cast<unsigned>(pairs()));
}

std::uint64_t PairReduction::full_dimension() const {
  return ipow(static_cast<std::uint64_t>(radix), static_cast<unsigned>(eta));
}

Eigen::VectorXd apply_factor(const Eigen::VectorXd& v, std::uint64_t pre, const Eigen::MatrixXd& m,
                             std::uint64_t post) {
  const std::uint64_t rows = m.rows(), cols = m.cols();
  if (static_cast<std::uint64_t>(v.size()) != pre * cols * post)
    throw DimensionMismatch("apply_factor: vector length does not match factor layout");
  Eigen::VectorXd out(pre * rows * post);
  for (std::uint64_t a = 0; a < pre; ++a) {
    // block a is a (cols x post) row-major matrix == (post x cols) column-major
    Eigen::Map<const Eigen::MatrixXd> in(v.data() + a * cols * post, post, cols);
    Eigen::Map<Eigen::MatrixXd> o(out.data() + a * rows * post, post, rows);
    o.noalias() = in * m.transpose();
  }
  return out;
}

Eigen::VectorXd PairReduction::lift(const Eigen::VectorXd& r) const {
  if (static_cast<std::uint64_t>(r.size()) != dimension()) throw DimensionMismatch("lift: wrong length");
  const int k = pairs();
  const std::uint64_t d2 = static_cast<std::uint64_t>(radix) * radix;
  Eigen::VectorXd v = r;
  for (int j = 0; j < k; ++j) {
    const std::uint64_t pre = ipow(d2, j);
    const std::uint64_t post = ipow(static_cast<std::uint64_t>(dc), k - 1 - j);
    v = apply_factor(v, pre, isometries[j], post);
  }
  return v;
}

Eigen::VectorXd PairReduction::project(const Eigen::VectorXd& full) const {
  if (static_cast<std::uint64_t>(full.size()) != full_dimension())
    throw DimensionMismatch("project: wrong length");
  const int k = pairs();
  const std::uint64_t d2 = static_cast<std::uint64_t>(radix) * radix;
  Eigen::VectorXd v = full;
  for (int j = 0; j < k; ++j) {
    const std::uint64_t pre = ipow(static_cast<std::uint64_t>(dc), j);
    const std::uint64_t post = ipow(d2, k - 1 - j);
    v = apply_factor(v, pre, isometries[j].transpose(), post);
  }
  return v;
}

PairReduction pair_reduction(const LayerOperator& op) {
  PairReduction pr;
  pr.eta = op.eta();
  pr.radix = op.radix();
  const int dd = op.radix();
  for (const Bond& b : op.bonds()) {
    if (b.kind != BondKind::Odd) continue;
    const auto labels = gate_commutant_pairs(b.gate);
    const int dc = static_cast<int>(labels.size());
    Eigen::MatrixXd c(dd * dd, dc);
    for (int mu = 0; mu < dc; ++mu) {
      const Eigen::VectorXd gl =
          op.site_sqrt_gram(b.left) * op.site_elements(b.left).col(static_cast<int>(labels[mu].left));
      const Eigen::VectorXd gr =
          op.site_sqrt_gram(b.right) * op.site_elements(b.right).col(static_cast<int>(labels[mu].right));
      c.col(mu) = Eigen::kroneckerProduct(gl, gr);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.transpose() * c);
    pr.isometries.push_back(c * es.operatorInverseSqrt());
    pr.dc = dc;
  }
  if (static_cast<int>(pr.isometries.size()) != pr.pairs())
    throw InvalidArgument("pair_reduction needs an operator containing the odd half-layer");
  return pr;
}

Eigen::VectorXd product_state(const std::vector<Eigen::VectorXd>& factors) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXd next(v.size() * f.size());
    for (Eigen::Index a = 0; a < v.size(); ++a) next.segment(a * f.size(), f.size()) = v(a) * f;
    v = std::move(next);
  }
  return v;
}

std::vector<Eigen::VectorXd> orthonormalize(std::vector<Eigen::VectorXd> vs) {
  std::vector<Eigen::VectorXd> out;
  for (auto& v : vs) {
    const double n0 = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= u * u.dot(v);
    const double n1 = v.norm();
    if (n1 > 1e-12 * n0) out.push_back(v / n1);
  }
  return out;
}

}  // namespace gapforge
