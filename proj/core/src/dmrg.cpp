#include "gapforge/dmrg.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <iomanip>

#include "gapforge/krylov.hpp"

namespace gapforge {
namespace {

using T3 = Eigen::Tensor<double, 3>;
using T4 = Eigen::Tensor<double, 4>;
using IdxPair = Eigen::IndexPair<int>;

class Engine {
 public:
  Engine(const MpoOperator& mpo, const DmrgConfig& cfg) : h_(mpo), cfg_(cfg), len_(mpo.length()) {
    if (len_ < 2) throw InvalidArgument("DMRG needs at least two sites");
    // a sum of open-chain terms is cheaper to contract than their direct sum
    if (mpo.terms.empty()) ops_.push_back(&mpo.sites);
    else
      for (const auto& t : mpo.terms) ops_.push_back(&t);
    if (cfg.chi < 2) throw InvalidArgument("chi must be >= 2");
    init_state();
  }

  DmrgResult run() {
    DmrgResult out;
    double prev = 0.0;
    bool converged = false;
    for (int sweep = 1; sweep <= cfg_.max_sweeps; ++sweep) {
      max_entropy_ = 0.0;
      first_sweep_ = sweep == 1;
      // early sweeps run at a reduced bond dimension; only full-chi sweeps are compared
      const int ramp = std::max(0, cfg_.ramp_sweeps + 1 - sweep);
      chi_ = std::max(2, cfg_.chi >> ramp);
      for (int k = 0; k + 1 < len_; ++k) step(k, true);
      for (int k = len_ - 2; k >= 0; --k) step(k, false);
      SweepRecord rec;
      rec.sweep = sweep;
      rec.energy = energy_;
      rec.delta = sweep == 1 ? 0.0 : energy_ - prev;
      rec.max_entropy = max_entropy_;
      rec.max_bond = 1;
      for (const auto& a : mps_) rec.max_bond = std::max<int>(rec.max_bond, a.dimension(2));
      out.history.push_back(rec);
      if (sweep >= cfg_.min_sweeps && sweep > cfg_.ramp_sweeps + 1 && std::abs(rec.delta) < cfg_.energy_tol) {
        converged = true;
        break;
      }
      prev = energy_;
    }
    out.gap.method = Method::Dmrg;
    out.gap.lambda = -energy_;
    out.gap.residual = residual_;
    out.gap.iterations = matvecs_;
    out.gap.converged = converged;
    out.bond_dims.push_back(1);
    for (const auto& a : mps_) out.bond_dims.push_back(a.dimension(2));
    return out;
  }

 private:
  const MpoOperator& h_;
  DmrgConfig cfg_;
  int len_;
  std::vector<const std::vector<MpoTensor>*> ops_;
  std::vector<T3> mps_;
  // per term; left_[t][k]: sites < k, right_[t][k]: sites >= k
  std::vector<std::vector<T3>> left_, right_;
  // deflation overlaps, [term][cut]
  std::vector<std::vector<Eigen::VectorXd>> dleft_, dright_;
  double energy_ = 0.0;
  double residual_ = 0.0;
  double max_entropy_ = 0.0;
  long matvecs_ = 0;
  bool first_sweep_ = true;
  int chi_ = 2;

  int phys(int k) const { return h_.phys_dim(k); }

  static T3 unit_env() {
    T3 e(1, 1, 1);
    e.setConstant(1.0);
    return e;
  }

  void init_state() {
    std::mt19937_64 rng(cfg_.seed);
    std::normal_distribution<double> nd;
    std::vector<int> dims(len_ + 1, 1);
    // bond dims bounded by the Hilbert space on either side
    for (int k = 1; k < len_; ++k) {
      double left = 1, right = 1;
      for (int j = 0; j < k; ++j) left *= phys(j);
      for (int j = k; j < len_; ++j) right *= phys(j);
      dims[k] = static_cast<int>(std::min<double>({double(cfg_.initial_chi), left, right}));
    }
    mps_.clear();
    for (int k = 0; k < len_; ++k) {
      T3 a(dims[k], phys(k), dims[k + 1]);
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
      mps_.push_back(a);
    }
    // right-canonicalize
    for (int k = len_ - 1; k > 0; --k) {
      const int cl = mps_[k].dimension(0), d = mps_[k].dimension(1), cr = mps_[k].dimension(2);
      Eigen::Map<Eigen::MatrixXd> m(mps_[k].data(), cl, d * cr);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(m.transpose());
      const int r = std::min(cl, d * cr);
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d * cr, r);
      const Eigen::MatrixXd rt = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
      T3 b(r, d, cr);
      Eigen::Map<Eigen::MatrixXd>(b.data(), r, d * cr) = q.transpose();
      mps_[k] = b;
      T3& p = mps_[k - 1];
      const int pl = p.dimension(0), pd = p.dimension(1);
      Eigen::Map<Eigen::MatrixXd> pm(p.data(), pl * pd, cl);
      T3 np(pl, pd, r);
      Eigen::Map<Eigen::MatrixXd>(np.data(), pl * pd, r) = pm * rt.transpose();
      mps_[k - 1] = np;
    }
    Eigen::Map<Eigen::VectorXd> first(mps_[0].data(), mps_[0].size());
    first.normalize();

    const int nd_terms = h_.deflation.count();
    left_.assign(ops_.size(), std::vector<T3>(len_ + 1));
    right_.assign(ops_.size(), std::vector<T3>(len_ + 1));
    dleft_.assign(nd_terms, std::vector<Eigen::VectorXd>(len_ + 1));
    dright_.assign(nd_terms, std::vector<Eigen::VectorXd>(len_ + 1));
    for (std::size_t t = 0; t < ops_.size(); ++t) {
      left_[t][0] = unit_env();
      right_[t][len_] = unit_env();
    }
    for (int a = 0; a < nd_terms; ++a) {
      dleft_[a][0] = Eigen::VectorXd::Ones(1);
      dright_[a][len_] = Eigen::VectorXd::Ones(1);
    }
    for (int k = len_ - 1; k >= 1; --k) update_right(k);
  }

  void update_left(int k) {
    const T3& a = mps_[k];
    for (std::size_t op = 0; op < ops_.size(); ++op) {
      const T4& w = (*ops_[op])[k];
      const T4 t1 = left_[op][k].contract(a, std::array<IdxPair, 1>{IdxPair(2, 0)});     // a' w s b
      const T4 t2 = t1.contract(w, std::array<IdxPair, 2>{IdxPair(1, 0), IdxPair(2, 3)});  // a' b w' s'
      const T3 t3 = t2.contract(a, std::array<IdxPair, 2>{IdxPair(0, 0), IdxPair(3, 1)});  // b w' b'
      left_[op][k + 1] = t3.shuffle(std::array<int, 3>{2, 1, 0});
    }
    const int cl = a.dimension(0), d = a.dimension(1), cr = a.dimension(2);
    Eigen::Map<const Eigen::MatrixXd> am(a.data(), cl, d * cr);
    for (int t = 0; t < h_.deflation.count(); ++t) {
      const Eigen::VectorXd& v = h_.deflation.vectors[t][k];
      const Eigen::RowVectorXd lv = dleft_[t][k].transpose() * am;  // (s, b) flattened
      Eigen::VectorXd nv = Eigen::VectorXd::Zero(cr);
      for (int b = 0; b < cr; ++b)
        for (int s = 0; s < d; ++s) nv(b) += lv(s + d * b) * v(s);
      dleft_[t][k + 1] = nv;
    }
  }

  void update_right(int k) {
    const T3& b = mps_[k];
    for (std::size_t op = 0; op < ops_.size(); ++op) {
      const T4& w = (*ops_[op])[k];
      const T4 t1 = b.contract(right_[op][k + 1], std::array<IdxPair, 1>{IdxPair(2, 2)});  // a s b' w'
      const T4 t2 = t1.contract(w, std::array<IdxPair, 2>{IdxPair(3, 1), IdxPair(1, 3)});  // a b' w s'
      const T3 t3 = t2.contract(b, std::array<IdxPair, 2>{IdxPair(1, 2), IdxPair(3, 1)});  // a w a'
      right_[op][k] = t3.shuffle(std::array<int, 3>{2, 1, 0});
    }
    const int cl = b.dimension(0), d = b.dimension(1), cr = b.dimension(2);
    Eigen::Map<const Eigen::MatrixXd> bm(b.data(), cl * d, cr);
    for (int t = 0; t < h_.deflation.count(); ++t) {
      const Eigen::VectorXd& v = h_.deflation.vectors[t][k];
      const Eigen::VectorXd rv = bm * dright_[t][k + 1];  // (a, s) flattened
      Eigen::VectorXd nv = Eigen::VectorXd::Zero(cl);
      for (int s = 0; s < d; ++s)
        for (int a = 0; a < cl; ++a) nv(a) += rv(a + cl * s) * v(s);
      dright_[t][k] = nv;
    }
  }

  void step(int k, bool to_right) {
    const T3& a1 = mps_[k];
    const T3& a2 = mps_[k + 1];
    const int cl = a1.dimension(0), d1 = a1.dimension(1), d2 = a2.dimension(1), cr = a2.dimension(2);
    const T4 theta = a1.contract(a2, std::array<IdxPair, 1>{IdxPair(2, 0)});
    const Eigen::Index n = theta.size();

    // projected deflation vectors
    const int nd = h_.deflation.count();
    std::vector<Eigen::VectorXd> proj(nd);
    for (int t = 0; t < nd; ++t) {
      const Eigen::VectorXd& l = dleft_[t][k];
      const Eigen::VectorXd& r = dright_[t][k + 2];
      const Eigen::VectorXd& v1 = h_.deflation.vectors[t][k];
      const Eigen::VectorXd& v2 = h_.deflation.vectors[t][k + 1];
      Eigen::VectorXd p(n);
      for (int b = 0; b < cr; ++b)
        for (int s2 = 0; s2 < d2; ++s2)
          for (int s1 = 0; s1 < d1; ++s1)
            for (int a = 0; a < cl; ++a)
              p(a + cl * (s1 + d1 * (s2 + d2 * b))) = l(a) * v1(s1) * v2(s2) * r(b);
      proj[t] = p;
    }
    const Eigen::MatrixXd& coef = h_.deflation.coefficients;

    // Per term, the two-site operator fused over the inner MPO bond:
    // m12[(w, s1, s2), (o1, o2, wr)] = sum_c w1(w, c, o1, s1) w2(c, wr, o2, s2).
    struct Term {
      Eigen::MatrixXd m12;
      const T3* lenv;
      const T3* renv;
      int wl, wr;
      Eigen::MatrixXd x1, x2;
    };
    std::vector<Term> terms(ops_.size());
    const int cl_out = left_[0][k].dimension(0), cr_out = right_[0][k + 2].dimension(0);
    for (std::size_t op = 0; op < ops_.size(); ++op) {
      const T4& w1 = (*ops_[op])[k];
      const T4& w2 = (*ops_[op])[k + 1];
      Term& tm = terms[op];
      tm.lenv = &left_[op][k];
      tm.renv = &right_[op][k + 2];
      const int wl = w1.dimension(0), wc = w1.dimension(1), wr = w2.dimension(1);
      tm.wl = wl;
      tm.wr = wr;
      tm.m12 = Eigen::MatrixXd::Zero(wl * d1 * d2, d1 * d2 * wr);
      for (int a = 0; a < wl; ++a)
        for (int c = 0; c < wc; ++c)
          for (int o1 = 0; o1 < d1; ++o1)
            for (int s1 = 0; s1 < d1; ++s1) {
              const double x = w1(a, c, o1, s1);
              if (x == 0.0) continue;
              for (int b = 0; b < wr; ++b)
                for (int o2 = 0; o2 < d2; ++o2)
                  for (int s2 = 0; s2 < d2; ++s2)
                    tm.m12(a + wl * (s1 + d1 * s2), o1 + d1 * (o2 + d2 * b)) += x * w2(c, b, o2, s2);
            }
      tm.x1.resize(cl_out * wl, d1 * d2 * cr);
      tm.x2.resize(cl_out * d1 * d2, wr * cr);
    }
    Eigen::MatrixXd slab;

    LinearMap op = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      out.setZero(n);
      Eigen::Map<Eigen::MatrixXd> om(out.data(), cl_out * d1 * d2, cr_out);
      const Eigen::Map<const Eigen::MatrixXd> theta_m(in.data(), cl, d1 * d2 * cr);
      for (Term& tm : terms) {
        // environments as matrices: lenv (bra, w, ket) -> (bra w) x ket, renv -> bra x (w ket)
        Eigen::Map<const Eigen::MatrixXd> lm(tm.lenv->data(), cl_out * tm.wl, cl);
        Eigen::Map<const Eigen::MatrixXd> rm(tm.renv->data(), cr_out, tm.wr * cr);
        // x1[(bra, w), (s1, s2, b)] = lenv * theta
        tm.x1.noalias() = lm * theta_m;
        // per ket-right index b: [bra, (w s1 s2)] * m12 -> [bra, (o1 o2 wr)]
        const int blk = cl_out * tm.wl * d1 * d2;
        for (int b = 0; b < cr; ++b) {
          slab.noalias() =
              Eigen::Map<const Eigen::MatrixXd>(tm.x1.data() + std::size_t(b) * blk, cl_out, tm.wl * d1 * d2) * tm.m12;
          // x2 rows (bra, o1, o2), columns (wr, b)
          for (int w = 0; w < tm.wr; ++w)
            tm.x2.col(w + tm.wr * b) = Eigen::Map<const Eigen::VectorXd>(
                slab.data() + std::size_t(w) * cl_out * d1 * d2, cl_out * d1 * d2);
        }
        om.noalias() += tm.x2 * rm.transpose();
      }
      if (nd > 0) {
        Eigen::VectorXd ov(nd);
        for (int t = 0; t < nd; ++t) ov(t) = proj[t].dot(in);
        const Eigen::VectorXd c = coef * ov;
        for (int t = 0; t < nd; ++t) out -= c(t) * proj[t];
      }
    };

    KrylovOptions ko;
    ko.tolerance = cfg_.local_tol;
    ko.krylov_dim = cfg_.krylov_dim;
    ko.max_iterations = cfg_.local_max_iterations;
    // the random start state is far from the target, so take full blocks first
    ko.min_steps = first_sweep_ ? cfg_.krylov_dim : 0;
    const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(theta.data(), n);
    const KrylovResult kr = largest_eigenpair(op, start, ko);
    matvecs_ += kr.iterations;
    energy_ = -kr.value;
    residual_ = kr.residual;

    Eigen::Map<const Eigen::MatrixXd> m(kr.vector.data(), cl * d1, d2 * cr);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int keep = 0;
    while (keep < sv.size() && keep < chi_ && sv(keep) > cfg_.svd_cutoff * sv(0)) ++keep;
    keep = std::max(keep, 1);
    const Eigen::VectorXd s = sv.head(keep) / sv.head(keep).norm();
    double ent = 0.0;
    for (int i = 0; i < keep; ++i) {
      const double p = s(i) * s(i);
      if (p > 0) ent -= p * std::log(p);
    }
    max_entropy_ = std::max(max_entropy_, ent);

    T3 na(cl, d1, keep), nb(keep, d2, cr);
    Eigen::Map<Eigen::MatrixXd> am(na.data(), cl * d1, keep);
    Eigen::Map<Eigen::MatrixXd> bm(nb.data(), keep, d2 * cr);
    if (to_right) {
      am = svd.matrixU().leftCols(keep);
      bm = s.asDiagonal() * svd.matrixV().leftCols(keep).transpose();
    } else {
      am = svd.matrixU().leftCols(keep) * s.asDiagonal();
      bm = svd.matrixV().leftCols(keep).transpose();
    }
    mps_[k] = na;
    mps_[k + 1] = nb;
    if (to_right) update_left(k);
    else update_right(k + 1);
  }
};

}  // namespace

DmrgResult dmrg_gap(const MpoOperator& mpo, const DmrgConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  DmrgResult r = Engine(mpo, cfg).run();
  if (cfg.check_chi) {
    DmrgConfig wider = cfg;
    wider.chi = static_cast<int>(std::ceil(cfg.chi * 1.2));
    wider.check_chi = false;
    const DmrgResult w = Engine(mpo, wider).run();
    r.gap.chi_too_small = std::abs(w.gap.lambda - r.gap.lambda) > cfg.energy_tol;
  }
  r.gap.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

DmrgResult dmrg_gap(const CircuitSpec& spec, const DmrgConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const MpoOperator mpo = cfg.layout == MpoLayout::Paired ? build_paired_mpo(spec) : build_mpo(spec);
  DmrgResult r = dmrg_gap(mpo, cfg);
  r.gap.spec = spec;
  r.gap.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string history_csv(const std::vector<SweepRecord>& h) {
  std::ostringstream os;
  os << "sweep,energy,delta,max_bond_entropy\n";
  os << std::setprecision(17);
  for (const auto& r : h) os << r.sweep << ',' << r.energy << ',' << r.delta << ',' << r.max_entropy << '\n';
  return os.str();
}

}  // namespace gapforge
