#include "gapforge/layer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <unsupported/Eigen/KroneckerProduct>

namespace gapforge {

void CircuitSpec::validate() const {
  if (d < 2) throw InvalidSpec("d must be >= 2");
  if (m < 1) throw InvalidSpec("m must be >= 1");
  if (n < 1 || n % m != 0) throw InvalidSpec("m must divide n (n=" + std::to_string(n) +
                                             ", m=" + std::to_string(m) + ")");
  const int e = n / m;
  if (e % 2 != 0 || e < 4) throw InvalidSpec("eta = n/m must be an even integer >= 4, got " +
                                             std::to_string(e));
  std::uint64_t q = 0;
  try {
    q = ipow(static_cast<std::uint64_t>(d), static_cast<unsigned>(2 * m));
  } catch (const InvalidDimension&) {
    throw InvalidSpec("d^(2m) overflows");
  }
  if (group == Group::Symplectic && q % 2 != 0)
    throw InvalidSpec("symplectic gates need an even local dimension");
}

std::string CircuitSpec::describe() const {
  std::ostringstream os;
  os << to_string(group) << " " << to_string(boundary) << " d=" << d << " m=" << m << " n=" << n;
  return os.str();
}

Group site_group(const CircuitSpec& spec, int site) {
  if (spec.group == Group::Symplectic) return site == 0 ? Group::Symplectic : Group::Orthogonal;
  return spec.group;
}

Group bond_group(const CircuitSpec& spec, int left, int right) {
  if (spec.group == Group::Symplectic)
    return (left == 0 || right == 0) ? Group::Symplectic : Group::Orthogonal;
  return spec.group;
}

int site_radix(Group g) { return g == Group::Unitary ? 2 : 3; }

ReducedState ReducedState::parse(std::string_view s) {
  ReducedState r;
  for (char c : s) r.word.push_back(parse_label(c));
  return r;
}

ReducedState ReducedState::from_index(std::uint64_t index, int eta, int radix) {
  ReducedState r;
  r.word.resize(eta);
  for (int p = eta - 1; p >= 0; --p) {
    r.word[p] = static_cast<Label>(index % radix);
    index /= radix;
  }
  return r;
}

std::uint64_t ReducedState::index(int radix) const {
  std::uint64_t idx = 0;
  for (Label l : word) {
    if (static_cast<int>(l) >= radix) throw InvalidArgument("label outside the site alphabet");
    idx = idx * radix + static_cast<std::uint64_t>(l);
  }
  return idx;
}

std::string ReducedState::str() const {
  std::string s;
  for (Label l : word) s.push_back(to_char(l));
  return s;
}

int ReducedState::switches(Boundary b) const { return switch_count(word, b); }

int switch_count(std::span<const Label> w, Boundary b) {
  if (w.size() < 2) throw InvalidArgument("switch_count needs a word of length >= 2");
  int z = 0;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) z += w[k] != w[k + 1];
  if (b == Boundary::Closed) z += w.back() != w.front();
  return z;
}

int switch_count(std::string_view w, Boundary b) {
  return ReducedState::parse(w).switches(b);
}

namespace {

Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
    throw SingularGram("site Gram matrix is not positive definite");
  return es.operatorSqrt();
}

}  // namespace

LayerOperator::LayerOperator(const CircuitSpec& spec) : spec_(spec) {
  spec_.validate();
  const int e = spec_.eta();
  radix_ = site_radix(spec_.group);

  std::vector<CommutantBasis> sites;
  for (int p = 0; p < e; ++p) {
    sites.push_back(site_basis(site_group(spec_, p), spec_.d, spec_.m, 0));
    grams_.push_back(sites.back().gram);
    elements_.push_back(sites.back().elements.to_double());
    sqrt_grams_.push_back(principal_sqrt(grams_.back()));
  }

  std::map<std::tuple<int, int, int>, Eigen::MatrixXd> cache;
  auto add = [&](int l, int r, BondKind kind) {
    const Group g = bond_group(spec_, l, r);
    const auto key = std::make_tuple(int(sites[l].group), int(sites[r].group), int(g));
    auto it = cache.find(key);
    if (it == cache.end()) {
      const AmbientBasis amb{sites[l], sites[r]};
      it = cache.emplace(key, weingarten_moment_matrix_exact(g, amb).to_double()).first;
    }
    bonds_.push_back({l, r, kind, g, it->second});
  };
  for (int p = 1; p + 1 < e; p += 2) add(p, p + 1, BondKind::Even);
  if (spec_.boundary == Boundary::Closed) add(e - 1, 0, BondKind::Wrap);
  for (int p = 0; p < e; p += 2) add(p, p + 1, BondKind::Odd);
}

std::uint64_t LayerOperator::dimension() const {
  return ipow(static_cast<std::uint64_t>(radix_), static_cast<unsigned>(eta()));
}

namespace {

struct BondLayout {
  std::uint64_t outer_count, outer_stride, inner_count;
  std::uint64_t stride_left, stride_right;
};

BondLayout layout(const Bond& b, int eta, int radix) {
  auto pw = [&](int k) { return ipow(static_cast<std::uint64_t>(radix), static_cast<unsigned>(k)); };
  BondLayout l{};
  l.stride_left = pw(eta - 1 - b.left);
  l.stride_right = pw(eta - 1 - b.right);
  if (b.right == b.left + 1) {
    l.outer_count = pw(b.left);
    l.outer_stride = pw(eta - b.left);
    l.inner_count = pw(eta - b.left - 2);
  } else {
    // wraparound: left = eta-1 is the least significant digit, right = 0 the most
    l.outer_count = pw(eta - 2);
    l.outer_stride = static_cast<std::uint64_t>(radix);
    l.inner_count = 1;
  }
  return l;
}

}  // namespace

void LayerOperator::apply_inplace(Eigen::VectorXd& v) const {
  const std::uint64_t n = dimension();
  if (static_cast<std::uint64_t>(v.size()) != n)
    throw DimensionMismatch("vector length " + std::to_string(v.size()) + " != " + std::to_string(n));
  const int dd = radix_;
  const int k2 = dd * dd;
  double in[9], out[9];
  std::uint64_t off[9];
  for (const Bond& b : bonds_) {
    const BondLayout l = layout(b, eta(), radix_);
    for (int a = 0; a < dd; ++a)
      for (int c = 0; c < dd; ++c) off[a * dd + c] = a * l.stride_left + c * l.stride_right;
    const double* mat = b.matrix.data();  // column-major
    double* x = v.data();
    for (std::uint64_t o = 0; o < l.outer_count; ++o) {
      const std::uint64_t base0 = o * l.outer_stride;
      for (std::uint64_t r = 0; r < l.inner_count; ++r) {
        const std::uint64_t base = base0 + r;
        bool any = false;
        for (int k = 0; k < k2; ++k) {
          in[k] = x[base + off[k]];
          any |= in[k] != 0.0;
        }
        if (!any) continue;
        for (int k = 0; k < k2; ++k) out[k] = 0.0;
        for (int c = 0; c < k2; ++c) {
          const double s = in[c];
          if (s == 0.0) continue;
          const double* col = mat + c * k2;
          for (int k = 0; k < k2; ++k) out[k] += col[k] * s;
        }
        for (int k = 0; k < k2; ++k) x[base + off[k]] = out[k];
      }
    }
  }
}

Eigen::VectorXd LayerOperator::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd w = v;
  apply_inplace(w);
  return w;
}

SparseVector LayerOperator::apply(const SparseVector& v) const {
  const int dd = radix_;
  const int k2 = dd * dd;
  SparseVector cur = v;
  for (const Bond& b : bonds_) {
    const BondLayout l = layout(b, eta(), radix_);
    SparseVector next;
    next.reserve(cur.size() * 2);
    for (const auto& [idx, val] : cur) {
      const int a = static_cast<int>((idx / l.stride_left) % dd);
      const int c = static_cast<int>((idx / l.stride_right) % dd);
      const std::uint64_t base = idx - a * l.stride_left - c * l.stride_right;
      const int col = a * dd + c;
      for (int k = 0; k < k2; ++k) {
        const double coef = b.matrix(k, col);
        if (coef == 0.0) continue;
        next[base + (k / dd) * l.stride_left + (k % dd) * l.stride_right] += coef * val;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

LayerOperator LayerOperator::restricted(LayerPart part) const {
  LayerOperator r = *this;
  r.part_ = part;
  if (part == LayerPart::Full) return r;
  r.bonds_.clear();
  for (const Bond& b : bonds_) {
    const bool odd = b.kind == BondKind::Odd;
    if ((part == LayerPart::Odd) == odd) r.bonds_.push_back(b);
  }
  return r;
}

LayerOperator LayerOperator::symmetrized_copy() const {
  if (symmetrized_) return *this;
  LayerOperator r = *this;
  r.symmetrized_ = true;
  for (Bond& b : r.bonds_) {
    const Eigen::MatrixXd g = Eigen::kroneckerProduct(sqrt_grams_[b.left], sqrt_grams_[b.right]);
    const Eigen::MatrixXd ginv = g.inverse();
    Eigen::MatrixXd a = g * b.matrix * ginv;
    // exact symmetry holds analytically; remove rounding asymmetry
    b.matrix = 0.5 * (a + a.transpose());
  }
  return r;
}

Eigen::VectorXd apply_layer(const LayerOperator& op, const Eigen::VectorXd& v) {
  return op.apply(v);
}

Eigen::MatrixXd build_dense(const LayerOperator& op, std::uint64_t cap) {
  const std::uint64_t n = op.dimension();
  if (n > (std::uint64_t(1) << 32) || n * n > cap)
    throw DimensionCap("dense Lambda would have " + std::to_string(n) + "^2 coefficients, cap is " +
                       std::to_string(cap));
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd col(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    col = m.col(j);
    op.apply_inplace(col);
    m.col(j) = col;
  }
  return m;
}

LayerOperator symmetrize(const LayerOperator& op) { return op.symmetrized_copy(); }

std::pair<LayerOperator, LayerOperator> half_layer_factors(const LayerOperator& op) {
  return {op.restricted(LayerPart::Odd), op.restricted(LayerPart::Even)};
}

ReducedState orbit_representative(const ReducedState& w) {
  ReducedState best = w;
  ReducedState cur = w;
  const std::size_t n = w.word.size();
  for (std::size_t k = 0; k + 2 <= n; k += 2) {
    std::rotate(cur.word.rbegin(), cur.word.rbegin() + 2, cur.word.rend());
    if (cur.word < best.word) best = cur;
  }
  return best;
}

int orbit_size(const ReducedState& w) {
  ReducedState cur = w;
  const int half = static_cast<int>(w.word.size() / 2);
  for (int k = 1; k <= half; ++k) {
    std::rotate(cur.word.rbegin(), cur.word.rbegin() + 2, cur.word.rend());
    if (cur == w) return k;
  }
  return half;
}

std::vector<ReducedState> enumerate_sector(const CircuitSpec& spec, int zeta) {
  spec.validate();
  if (spec.group != Group::Unitary)
    throw UnsupportedSpec("sector enumeration is implemented for the two-label alphabet only");
  if (zeta < 0) throw InvalidArgument("zeta must be >= 0");
  const int k = spec.eta() / 2;
  if (k > 40) throw InvalidDimension("sector enumeration limited to eta <= 80");
  std::vector<ReducedState> out;
  ReducedState w;
  w.word.resize(spec.eta());
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    for (int j = 0; j < k; ++j) {
      const Label l = (mask >> (k - 1 - j)) & 1 ? Label::S : Label::I;
      w.word[2 * j] = w.word[2 * j + 1] = l;
    }
    if (w.switches(spec.boundary) != zeta) continue;
    if (spec.boundary == Boundary::Closed && !(orbit_representative(w) == w)) continue;
    out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockMatrix build_block_matrix(const CircuitSpec& spec, int zeta, OrbitNormalization norm) {
  BlockMatrix bm;
  bm.zeta = zeta;
  bm.boundary = spec.boundary;
  bm.normalization = norm;
  bm.basis = enumerate_sector(spec, zeta);
  if (bm.basis.empty()) throw InvalidArgument("empty switch sector");
  const LayerOperator op(spec);
  const int radix = op.radix();
  const bool closed = spec.boundary == Boundary::Closed;

  std::map<std::uint64_t, int> row_of;
  for (std::size_t r = 0; r < bm.basis.size(); ++r) {
    row_of[bm.basis[r].index(radix)] = static_cast<int>(r);
    bm.orbit_sizes.push_back(closed ? orbit_size(bm.basis[r]) : 1);
  }
  const int nb = static_cast<int>(bm.basis.size());
  bm.matrix = Eigen::MatrixXd::Zero(nb, nb);

  for (int c = 0; c < nb; ++c) {
    SparseVector in;
    in[bm.basis[c].index(radix)] = 1.0;
    const SparseVector out = op.apply(in);
    for (const auto& [idx, val] : out) {
      ReducedState u = ReducedState::from_index(idx, spec.eta(), radix);
      const int z = u.switches(spec.boundary);
      if (z > zeta) {
        if (std::abs(val) > 1e-13)
          throw SectorLeak("output word " + u.str() + " has " + std::to_string(z) + " > " +
                           std::to_string(zeta) + " switches");
        continue;
      }
      if (z < zeta) continue;
      if (closed) u = orbit_representative(u);
      const auto it = row_of.find(u.index(radix));
      if (it == row_of.end()) {
        if (std::abs(val) > 1e-13) throw SectorLeak("output word " + u.str() + " leaves the even-block sector");
        continue;
      }
      bm.matrix(it->second, c) += val;
    }
  }
  if (closed && norm == OrbitNormalization::Sum)
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c < nb; ++c)
        bm.matrix(r, c) *= static_cast<double>(bm.orbit_sizes[c]) / bm.orbit_sizes[r];
  return bm;
}

std::vector<std::pair<ReducedState, double>> orbit_coefficients(const LayerOperator& op,
                                                                const ReducedState& w) {
  SparseVector in;
  in[w.index(op.radix())] = 1.0;
  const SparseVector out = op.apply(in);
  std::map<ReducedState, double> acc;
  for (const auto& [idx, val] : out) {
    ReducedState u = ReducedState::from_index(idx, op.eta(), op.radix());
    if (op.spec().boundary == Boundary::Closed) u = orbit_representative(u);
    acc[u] += val;
  }
  std::vector<std::pair<ReducedState, double>> r;
  for (const auto& [u, val] : acc)
    if (std::abs(val) > 1e-15) r.emplace_back(u, val);
  return r;
}

}  // namespace gapforge
