#include "gapforge/haar.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

namespace gapforge {
namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd ginibre(int rows, int cols, bool complex_entries, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXcd z(rows, cols);
  const double s = complex_entries ? std::sqrt(0.5) : 1.0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = complex_entries ? nd(rng) : 0.0;
      z(i, j) = cd(s * re, s * im);
    }
  return z;
}

Eigen::MatrixXcd qr_haar(int dim, bool complex_entries, std::mt19937_64& rng) {
  const Eigen::MatrixXcd z = ginibre(dim, dim, complex_entries, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

// Columns v_j and partners w_j = -Omega conj(v_j), orthonormalized one
// quaternionic pair at a time.
Eigen::MatrixXcd symplectic_haar(int dim, std::mt19937_64& rng) {
  const int h = dim / 2;
  const Eigen::MatrixXd om = symplectic_form(dim);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < h; ++j) {
    Eigen::VectorXcd v = ginibre(dim, 1, true, rng).col(0);
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        v -= u.col(k) * u.col(k).dot(v);
        v -= u.col(h + k) * u.col(h + k).dot(v);
      }
    v.normalize();
    u.col(j) = v;
    u.col(h + j) = -(om.cast<cd>() * v.conjugate());
  }
  return u;
}

// Per-sample reduced coefficients accumulated over one chunk.
struct Chunk {
  Eigen::MatrixXd sum;
  Eigen::MatrixXd sumsq;
};

}  // namespace

Eigen::MatrixXcd haar_sample(Group g, int dim, std::mt19937_64& rng) {
  if (dim < 1) throw InvalidDimension("Haar sample needs dim >= 1");
  switch (g) {
    case Group::Unitary: return qr_haar(dim, true, rng);
    case Group::Orthogonal: return qr_haar(dim, false, rng);
    case Group::Symplectic:
      if (dim % 2 != 0) throw InvalidDimension("symplectic Haar sample needs an even dimension");
      return symplectic_haar(dim, rng);
  }
  throw InvalidDimension("unknown group");
}

Eigen::MatrixXcd haar_sample(Group g, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_sample(g, dim, rng);
}

AmbientBasis native_ambient(Group g, int d, int m) {
  if (g == Group::Symplectic) return make_ambient(Group::Symplectic, Group::Orthogonal, d, m);
  return make_ambient(g, g, d, m);
}

MonteCarloMoment mc_local_moment(Group g, int d, int m, std::int64_t samples, std::uint64_t seed,
                                 unsigned threads) {
  if (samples < 100) throw InvalidArgument("mc_local_moment needs at least 100 samples");
  const AmbientBasis amb = native_ambient(g, d, m);
  if (!amb.left.has_operators())
    throw UnsupportedGroupDimension("Monte-Carlo moment needs explicit site operators");
  const int dl = amb.left.dimension();
  const int dr = amb.right.dimension();
  const int na = dl * dr;
  const int qg = static_cast<int>(amb.left.local_dim() * amb.right.local_dim());

  std::vector<Eigen::MatrixXcd> ops(na);
  for (int a = 0; a < dl; ++a)
    for (int b = 0; b < dr; ++b) ops[a * dr + b] = amb.gate_ordered(a, b).cast<cd>();
  const Eigen::MatrixXd gamb = Eigen::kroneckerProduct(amb.left.gram, amb.right.gram);
  const Eigen::LDLT<Eigen::MatrixXd> gsolve(gamb);

  constexpr std::int64_t kChunk = 1000;
  const std::int64_t nchunks = (samples + kChunk - 1) / kChunk;
  std::vector<Chunk> chunks(nchunks);

  auto run_chunk = [&](std::int64_t c) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(ss);
    const std::int64_t count = std::min(kChunk, samples - c * kChunk);
    Chunk out{Eigen::MatrixXd::Zero(na, na), Eigen::MatrixXd::Zero(na, na)};
    Eigen::MatrixXd traces(na, na);
    for (std::int64_t k = 0; k < count; ++k) {
      const Eigen::MatrixXcd v = haar_sample(g, qg, rng);
      const Eigen::MatrixXcd f = Eigen::kroneckerProduct(v, v);
      for (int col = 0; col < na; ++col) {
        const Eigen::MatrixXcd y = f * ops[col] * f.adjoint();
        // ambient operators are real, so Tr(P^T Y) is an entrywise sum
        for (int row = 0; row < na; ++row) traces(row, col) = (ops[row].real().cwiseProduct(y.real())).sum();
      }
      const Eigen::MatrixXd coef = gsolve.solve(traces);
      out.sum += coef;
      out.sumsq += coef.cwiseProduct(coef);
    }
    chunks[c] = std::move(out);
  };

  unsigned nt = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  nt = static_cast<unsigned>(std::min<std::int64_t>(nt, nchunks));
  if (nt <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::int64_t c = t; c < nchunks; c += nt) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(na, na);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(na, na);
  for (const auto& c : chunks) {
    sum += c.sum;
    sumsq += c.sumsq;
  }
  const double ns = static_cast<double>(samples);
  MonteCarloMoment r;
  r.samples = samples;
  r.estimate.left = amb.left.labels;
  r.estimate.right = amb.right.labels;
  r.estimate.matrix = sum / ns;
  const Eigen::MatrixXd var =
      ((sumsq - ns * r.estimate.matrix.cwiseProduct(r.estimate.matrix)) / (ns - 1.0)).cwiseMax(0.0);
  r.standard_error = (var / ns).cwiseSqrt();
  return r;
}

}  // namespace gapforge
