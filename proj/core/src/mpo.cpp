#include "gapforge/mpo.hpp"

#include <algorithm>
#include <unsupported/Eigen/KroneckerProduct>

namespace gapforge {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

MpoTensor identity_site(int d) {
  MpoTensor w(1, 1, d, d);
  w.setZero();
  for (int s = 0; s < d; ++s) w(0, 0, s, s) = 1.0;
  return w;
}

MpoTensor channel_identity_site(int d, int chi) {
  MpoTensor w(chi, chi, d, d);
  w.setZero();
  for (int c = 0; c < chi; ++c)
    for (int s = 0; s < d; ++s) w(c, c, s, s) = 1.0;
  return w;
}

// Operator-Schmidt split of a two-site matrix a[(l' r'), (l r)] into
// sum_k X_k (x) Y_k with X acting on the left site.
void operator_schmidt(const Eigen::MatrixXd& a, int d, std::vector<Eigen::MatrixXd>& xs,
                      std::vector<Eigen::MatrixXd>& ys) {
  Eigen::MatrixXd t(d * d, d * d);
  for (int lo = 0; lo < d; ++lo)
    for (int ro = 0; ro < d; ++ro)
      for (int li = 0; li < d; ++li)
        for (int ri = 0; ri < d; ++ri) t(lo * d + li, ro * d + ri) = a(lo * d + ro, li * d + ri);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  xs.clear();
  ys.clear();
  for (int k = 0; k < sv.size(); ++k) {
    if (sv(k) <= 1e-14 * sv(0)) break;
    const double r = std::sqrt(sv(k));
    Eigen::MatrixXd x(d, d), y(d, d);
    for (int o = 0; o < d; ++o)
      for (int i = 0; i < d; ++i) {
        x(o, i) = r * svd.matrixU()(o * d + i, k);
        y(o, i) = r * svd.matrixV()(o * d + i, k);
      }
    xs.push_back(x);
    ys.push_back(y);
  }
}

MpoOperator bond_mpo(const Bond& b, int eta, int d) {
  std::vector<Eigen::MatrixXd> xs, ys;
  operator_schmidt(b.matrix, d, xs, ys);
  const int chi = static_cast<int>(xs.size());
  MpoOperator m;
  for (int p = 0; p < eta; ++p) m.sites.push_back(identity_site(d));
  auto fill = [&](int site, bool left_side, const std::vector<Eigen::MatrixXd>& ops) {
    MpoTensor w(left_side ? 1 : chi, left_side ? chi : 1, d, d);
    for (int k = 0; k < chi; ++k)
      for (int o = 0; o < d; ++o)
        for (int i = 0; i < d; ++i) {
          if (left_side) w(0, k, o, i) = ops[k](o, i);
          else w(k, 0, o, i) = ops[k](o, i);
        }
    m.sites[site] = w;
  };
  if (b.right == b.left + 1) {
    fill(b.left, true, xs);
    fill(b.right, false, ys);
  } else {
    // wraparound: the channel runs from site 0 (right member) to eta-1
    fill(b.right, true, ys);
    for (int p = b.right + 1; p < b.left; ++p) m.sites[p] = channel_identity_site(d, chi);
    fill(b.left, false, xs);
  }
  return m;
}

MpoOperator bonds_mpo(const std::vector<Bond>& bonds, int eta, int d) {
  MpoOperator m;
  for (int p = 0; p < eta; ++p) m.sites.push_back(identity_site(d));
  for (const Bond& b : bonds) m = mpo_product(bond_mpo(b, eta, d), m);
  return m;
}

// U^T (x y) U for the two site tensors of one pair.
MpoTensor pair_site(const MpoTensor& x, const MpoTensor& y, const Eigen::MatrixXd& u, int d) {
  const int wl = x.dimension(0), mid = x.dimension(1), wr = y.dimension(1);
  const int dc = static_cast<int>(u.cols());
  MpoTensor w(wl, wr, dc, dc);
  w.setZero();
  Eigen::MatrixXd block(d * d, d * d);
  for (int l = 0; l < wl; ++l)
    for (int r = 0; r < wr; ++r) {
      block.setZero();
      for (int c = 0; c < mid; ++c)
        for (int o1 = 0; o1 < d; ++o1)
          for (int i1 = 0; i1 < d; ++i1) {
            const double xv = x(l, c, o1, i1);
            if (xv == 0.0) continue;
            for (int o2 = 0; o2 < d; ++o2)
              for (int i2 = 0; i2 < d; ++i2) block(o1 * d + o2, i1 * d + i2) += xv * y(c, r, o2, i2);
          }
      const Eigen::MatrixXd red = u.transpose() * block * u;
      for (int o = 0; o < dc; ++o)
        for (int i = 0; i < dc; ++i) w(l, r, o, i) = red(o, i);
    }
  return w;
}

MpoOperator paired_sites(const MpoOperator& l2, const PairReduction& pr, int d) {
  MpoOperator out;
  for (int j = 0; j < pr.pairs(); ++j)
    out.sites.push_back(pair_site(l2.sites[2 * j], l2.sites[2 * j + 1], pr.isometries[j], d));
  compress(out);
  return out;
}

// Block-diagonal stacking of open-chain MPOs of equal length along the bonds.
std::vector<MpoTensor> direct_sum(const std::vector<std::vector<MpoTensor>>& terms) {
  const std::size_t len = terms.front().size();
  std::vector<MpoTensor> out;
  for (std::size_t k = 0; k < len; ++k) {
    int wl = 0, wr = 0;
    for (const auto& t : terms) {
      wl += k == 0 ? 0 : t[k].dimension(0);
      wr += k + 1 == len ? 0 : t[k].dimension(1);
    }
    wl = std::max(wl, 1);
    wr = std::max(wr, 1);
    const int dout = terms.front()[k].dimension(2), din = terms.front()[k].dimension(3);
    MpoTensor w(wl, wr, dout, din);
    w.setZero();
    int ol = 0, orr = 0;
    for (const auto& t : terms) {
      const MpoTensor& x = t[k];
      for (int l = 0; l < x.dimension(0); ++l)
        for (int r = 0; r < x.dimension(1); ++r)
          for (int o = 0; o < dout; ++o)
            for (int i = 0; i < din; ++i) w(ol + l, orr + r, o, i) = x(l, r, o, i);
      if (k != 0) ol += x.dimension(0);
      if (k + 1 != len) orr += x.dimension(1);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Eigen::VectorXd> constant_label_factors(const LayerOperator& op, int label) {
  std::vector<Eigen::VectorXd> f;
  for (int p = 0; p < op.eta(); ++p) f.push_back((op.site_sqrt_gram(p) * op.site_elements(p).col(label)).normalized());
  return f;
}

ProductDeflation finish_deflation(std::vector<std::vector<Eigen::VectorXd>> vecs) {
  ProductDeflation d;
  d.vectors = std::move(vecs);
  d.coefficients = d.overlaps().inverse();
  return d;
}

}  // namespace

Eigen::MatrixXd ProductDeflation::overlaps() const {
  const int n = count();
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double o = 1.0;
      for (std::size_t k = 0; k < vectors[a].size(); ++k) o *= vectors[a][k].dot(vectors[b][k]);
      m(a, b) = o;
    }
  return m;
}

std::vector<int> MpoOperator::bond_dimensions() const {
  std::vector<int> b;
  b.push_back(sites.empty() ? 1 : static_cast<int>(sites[0].dimension(0)));
  for (const auto& w : sites) b.push_back(static_cast<int>(w.dimension(1)));
  return b;
}

int MpoOperator::max_bond_dimension() const {
  int m = 1;
  for (int b : bond_dimensions()) m = std::max(m, b);
  return m;
}

std::uint64_t MpoOperator::dimension() const {
  std::uint64_t n = 1;
  for (int k = 0; k < length(); ++k) n *= static_cast<std::uint64_t>(phys_dim(k));
  return n;
}

Eigen::VectorXd MpoOperator::apply(const Eigen::VectorXd& v, bool include_deflation) const {
  if (static_cast<std::uint64_t>(v.size()) != dimension()) throw DimensionMismatch("MPO apply: wrong length");
  // t holds [done (a), bond (w), remaining (b)] in row-major order
  Eigen::VectorXd t = v;
  std::uint64_t a_dim = 1;
  std::uint64_t rest = static_cast<std::uint64_t>(v.size());
  for (const MpoTensor& w : sites) {
    const int wl = static_cast<int>(w.dimension(0)), wr = static_cast<int>(w.dimension(1));
    const int dout = static_cast<int>(w.dimension(2)), din = static_cast<int>(w.dimension(3));
    RowMat k(dout * wr, wl * din);
    for (int l = 0; l < wl; ++l)
      for (int r = 0; r < wr; ++r)
        for (int o = 0; o < dout; ++o)
          for (int i = 0; i < din; ++i) k(o * wr + r, l * din + i) = w(l, r, o, i);
    rest /= static_cast<std::uint64_t>(din);
    Eigen::VectorXd next(a_dim * dout * wr * rest);
    const std::uint64_t in_block = static_cast<std::uint64_t>(wl) * din * rest;
    const std::uint64_t out_block = static_cast<std::uint64_t>(dout) * wr * rest;
    for (std::uint64_t a = 0; a < a_dim; ++a) {
      Eigen::Map<const RowMat> mi(t.data() + a * in_block, wl * din, rest);
      Eigen::Map<RowMat> mo(next.data() + a * out_block, dout * wr, rest);
      mo.noalias() = k * mi;
    }
    t = std::move(next);
    a_dim *= static_cast<std::uint64_t>(dout);
  }
  if (include_deflation && deflation.count() > 0) {
    const int nd = deflation.count();
    std::vector<Eigen::VectorXd> states;
    Eigen::VectorXd ov(nd);
    for (int b = 0; b < nd; ++b) {
      states.push_back(product_state(deflation.vectors[b]));
      ov(b) = states.back().dot(v);
    }
    const Eigen::VectorXd c = deflation.coefficients * ov;
    for (int a = 0; a < nd; ++a) t -= c(a) * states[a];
  }
  return t;
}

Eigen::MatrixXd MpoOperator::to_dense(bool include_deflation) const {
  const std::uint64_t n = dimension();
  if (n > 8192) throw DimensionCap("MPO too large to densify");
  Eigen::MatrixXd m(n, n);
  for (std::uint64_t j = 0; j < n; ++j) m.col(j) = apply(Eigen::VectorXd::Unit(n, j), include_deflation);
  return m;
}

std::vector<Eigen::VectorXd> MpoOperator::deflation_basis() const {
  std::vector<Eigen::VectorXd> s;
  for (const auto& f : deflation.vectors) s.push_back(product_state(f));
  return orthonormalize(s);
}

MpoOperator mpo_product(const MpoOperator& a, const MpoOperator& b) {
  if (a.length() != b.length()) throw DimensionMismatch("MPO product: lengths differ");
  MpoOperator r;
  for (int k = 0; k < a.length(); ++k) {
    const MpoTensor& x = a.sites[k];
    const MpoTensor& y = b.sites[k];
    const int al = x.dimension(0), ar = x.dimension(1), bl = y.dimension(0), br = y.dimension(1);
    const int dout = x.dimension(2), dmid = x.dimension(3), din = y.dimension(3);
    if (y.dimension(2) != dmid) throw DimensionMismatch("MPO product: physical dimensions differ");
    MpoTensor w(al * bl, ar * br, dout, din);
    w.setZero();
    for (int i1 = 0; i1 < al; ++i1)
      for (int j1 = 0; j1 < ar; ++j1)
        for (int i2 = 0; i2 < bl; ++i2)
          for (int j2 = 0; j2 < br; ++j2)
            for (int o = 0; o < dout; ++o)
              for (int i = 0; i < din; ++i) {
                double s = 0.0;
                for (int t = 0; t < dmid; ++t) s += x(i1, j1, o, t) * y(i2, j2, t, i);
                w(i1 * bl + i2, j1 * br + j2, o, i) = s;
              }
    r.sites.push_back(std::move(w));
  }
  return r;
}

void compress(MpoOperator& mpo, double rel_tol) {
  const int len = mpo.length();
  if (len < 2) return;
  // left-canonicalize
  for (int k = 0; k + 1 < len; ++k) {
    MpoTensor& w = mpo.sites[k];
    const int wl = w.dimension(0), wr = w.dimension(1), dout = w.dimension(2), din = w.dimension(3);
    const int rows = wl * dout * din;
    Eigen::MatrixXd m(rows, wr);
    for (int l = 0; l < wl; ++l)
      for (int o = 0; o < dout; ++o)
        for (int i = 0; i < din; ++i)
          for (int r = 0; r < wr; ++r) m((l * dout + o) * din + i, r) = w(l, r, o, i);
    const int rank = std::min(rows, wr);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, rank);
    const Eigen::MatrixXd rmat = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    MpoTensor nw(wl, rank, dout, din);
    for (int l = 0; l < wl; ++l)
      for (int o = 0; o < dout; ++o)
        for (int i = 0; i < din; ++i)
          for (int r = 0; r < rank; ++r) nw(l, r, o, i) = q((l * dout + o) * din + i, r);
    w = nw;
    MpoTensor& nx = mpo.sites[k + 1];
    const int xr = nx.dimension(1), xo = nx.dimension(2), xi = nx.dimension(3);
    MpoTensor merged(rank, xr, xo, xi);
    merged.setZero();
    for (int a = 0; a < rank; ++a)
      for (int b = 0; b < wr; ++b) {
        const double f = rmat(a, b);
        if (f == 0.0) continue;
        for (int r = 0; r < xr; ++r)
          for (int o = 0; o < xo; ++o)
            for (int i = 0; i < xi; ++i) merged(a, r, o, i) += f * nx(b, r, o, i);
      }
    nx = merged;
  }
  // right sweep with truncation
  for (int k = len - 1; k > 0; --k) {
    MpoTensor& w = mpo.sites[k];
    const int wl = w.dimension(0), wr = w.dimension(1), dout = w.dimension(2), din = w.dimension(3);
    const int cols = wr * dout * din;
    Eigen::MatrixXd m(wl, cols);
    for (int l = 0; l < wl; ++l)
      for (int r = 0; r < wr; ++r)
        for (int o = 0; o < dout; ++o)
          for (int i = 0; i < din; ++i) m(l, (r * dout + o) * din + i) = w(l, r, o, i);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    int keep = 0;
    while (keep < sv.size() && sv(keep) > rel_tol * sv(0)) ++keep;
    keep = std::max(keep, 1);
    MpoTensor nw(keep, wr, dout, din);
    for (int a = 0; a < keep; ++a)
      for (int r = 0; r < wr; ++r)
        for (int o = 0; o < dout; ++o)
          for (int i = 0; i < din; ++i) nw(a, r, o, i) = svd.matrixV()((r * dout + o) * din + i, a);
    w = nw;
    const Eigen::MatrixXd us = svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal();
    MpoTensor& px = mpo.sites[k - 1];
    const int pl = px.dimension(0), po = px.dimension(2), pi = px.dimension(3);
    MpoTensor merged(pl, keep, po, pi);
    merged.setZero();
    for (int l = 0; l < pl; ++l)
      for (int b = 0; b < wl; ++b)
        for (int a = 0; a < keep; ++a) {
          const double f = us(b, a);
          if (f == 0.0) continue;
          for (int o = 0; o < po; ++o)
            for (int i = 0; i < pi; ++i) merged(l, a, o, i) += f * px(l, b, o, i);
        }
    px = merged;
  }
}

MpoOperator layer_mpo(const LayerOperator& op) { return bonds_mpo(op.bonds(), op.eta(), op.radix()); }

MpoOperator build_mpo(const CircuitSpec& spec) {
  const LayerOperator sym = symmetrize(LayerOperator(spec));
  const auto [l1, l2] = half_layer_factors(sym);
  const MpoOperator m1 = layer_mpo(l1);
  MpoOperator m2 = layer_mpo(l2);
  compress(m2);
  MpoOperator h = mpo_product(mpo_product(m1, m2), m1);
  compress(h);
  std::vector<std::vector<Eigen::VectorXd>> vecs;
  for (int a = 0; a < sym.commutant_dimension(); ++a) vecs.push_back(constant_label_factors(sym, a));
  h.deflation = finish_deflation(std::move(vecs));
  return h;
}

MpoOperator build_paired_mpo(const CircuitSpec& spec) {
  const LayerOperator sym = symmetrize(LayerOperator(spec));
  return build_paired_mpo(spec, pair_reduction(sym));
}

MpoOperator build_paired_mpo(const CircuitSpec& spec, const PairReduction& pr) {
  const LayerOperator sym = symmetrize(LayerOperator(spec));
  const LayerOperator even = half_layer_factors(sym).second;
  const int d = sym.radix();
  const auto wrap = std::find_if(even.bonds().begin(), even.bonds().end(),
                                 [](const Bond& b) { return b.right != b.left + 1; });
  MpoOperator out;
  if (wrap == even.bonds().end()) {
    out = paired_sites(layer_mpo(even), pr, d);
  } else {
    // one open-chain term per Schmidt component of the wraparound bond
    std::vector<Bond> rest;
    for (const Bond& b : even.bonds())
      if (&b != &*wrap) rest.push_back(b);
    const MpoOperator base = bonds_mpo(rest, sym.eta(), d);
    std::vector<Eigen::MatrixXd> xs, ys;
    operator_schmidt(wrap->matrix, d, xs, ys);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      MpoOperator ends;
      for (int p = 0; p < sym.eta(); ++p) ends.sites.push_back(identity_site(d));
      for (int o = 0; o < d; ++o)
        for (int i = 0; i < d; ++i) {
          ends.sites[wrap->right](0, 0, o, i) = ys[a](o, i);
          ends.sites[wrap->left](0, 0, o, i) = xs[a](o, i);
        }
      out.terms.push_back(paired_sites(mpo_product(ends, base), pr, d).sites);
    }
    out.sites = direct_sum(out.terms);
  }
  std::vector<std::vector<Eigen::VectorXd>> vecs;
  for (int a = 0; a < sym.commutant_dimension(); ++a) {
    const auto f = constant_label_factors(sym, a);
    std::vector<Eigen::VectorXd> pv;
    for (int j = 0; j < pr.pairs(); ++j)
      pv.push_back(pr.isometries[j].transpose() * Eigen::kroneckerProduct(f[2 * j], f[2 * j + 1]).eval());
    vecs.push_back(std::move(pv));
  }
  out.deflation = finish_deflation(std::move(vecs));
  return out;
}

}  // namespace gapforge
