#include "gapforge/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace gapforge {
namespace {

void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& locked) {
  for (const auto& u : locked) v -= u * u.dot(v);
}

}  // namespace

KrylovResult largest_eigenpair(const LinearMap& op, Eigen::VectorXd start, const KrylovOptions& opt,
                               const std::vector<Eigen::VectorXd>& locked) {
  const Eigen::Index n = start.size();
  KrylovResult res;
  project_out(start, locked);
  if (start.norm() == 0.0) start.setOnes(), project_out(start, locked);
  start.normalize();

  const int mdim = static_cast<int>(std::max<Eigen::Index>(1, std::min<Eigen::Index>(opt.krylov_dim, n)));
  const int keep = std::clamp(opt.keep > 0 ? opt.keep : mdim / 2, 1, std::max(1, mdim - 1));

  Eigen::MatrixXd v(n, mdim + 1);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(mdim, mdim);
  v.col(0) = start;
  int k = 0;  // number of kept Ritz vectors at the front of v
  Eigen::VectorXd w(n);
  double best_resid = INFINITY;

  while (true) {
    int m = mdim;
    double beta = 0.0;
    bool out_of_budget = false;
    for (int j = k; j < mdim; ++j) {
      // one application stays reserved for the final residual
      if (res.iterations + 1 >= opt.max_iterations) {
        m = j;
        out_of_budget = true;
        break;
      }
      op(v.col(j), w);
      ++res.iterations;
      project_out(w, locked);
      Eigen::VectorXd h = v.leftCols(j + 1).transpose() * w;
      w.noalias() -= v.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = v.leftCols(j + 1).transpose() * w;
      w.noalias() -= v.leftCols(j + 1) * h2;
      h += h2;
      s.col(j).head(j + 1) = h;
      s.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      if (beta <= 1e-14 * std::max(1.0, std::abs(h(j)))) {
        // invariant subspace reached
        m = j + 1;
        beta = 0.0;
        break;
      }
      v.col(j + 1) = w / beta;
      // early exit on the Ritz residual; the projected matrix is tiny next to one operator application
      if (j + 1 < mdim && j + 1 >= opt.min_steps) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.topLeftCorner(j + 1, j + 1));
        if (std::abs(beta * es.eigenvectors()(j, j)) <= opt.tolerance) {
          m = j + 1;
          break;
        }
      }
    }

    if (m == 0) {
      res.vector = v.col(0);
      break;
    }
    if (out_of_budget) beta = 0.0, v.col(m).setZero();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.topLeftCorner(m, m));
    // eigenvalues ascending; reverse to descending order
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd y = es.eigenvectors().rowwise().reverse();
    const double resid = std::abs(beta * y(m - 1, 0));

    if (resid < best_resid || resid <= opt.tolerance) {
      best_resid = resid;
      res.value = theta(0);
      res.vector = v.leftCols(m) * y.col(0);
      res.residual = resid;
    }
    if (resid <= opt.tolerance || beta == 0.0 || m < mdim) break;

    // thick restart: keep the leading Ritz vectors plus the residual direction
    const int kk = std::min(keep, m - 1);
    Eigen::MatrixXd vk = v.leftCols(m) * y.leftCols(kk);
    v.leftCols(kk) = vk;
    v.col(kk) = v.col(m);
    s.setZero();
    for (int i = 0; i < kk; ++i) s(i, i) = theta(i);
    k = kk;
  }

  res.vector.normalize();
  // true residual, independent of the recurrence
  op(res.vector, w);
  ++res.iterations;
  project_out(w, locked);
  res.value = res.vector.dot(w);
  res.residual = (w - res.value * res.vector).norm();
  res.converged = res.residual <= opt.tolerance;
  return res;
}

}  // namespace gapforge
