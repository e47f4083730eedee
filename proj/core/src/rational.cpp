#include "gapforge/rational.hpp"

#include <stdexcept>

namespace gapforge {

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("rational matrix shape mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
  RationalMatrix r = *this;
  for (auto& x : r.data_) x *= s;
  return r;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = static_cast<double>((*this)(i, j));
  return m;
}

RationalMatrix solve(const RationalMatrix& m, const RationalMatrix& b) {
  const int n = m.rows();
  if (m.cols() != n || b.rows() != n) throw std::invalid_argument("rational solve shape mismatch");
  RationalMatrix a = m;
  RationalMatrix x = b;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) throw std::domain_error("singular rational matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
    }
    const Rational inv = 1 / a(col, col);
    for (int j = 0; j < n; ++j) a(col, j) *= inv;
    for (int j = 0; j < x.cols(); ++j) x(col, j) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational f = a(r, col);
      for (int j = 0; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
    }
  }
  return x;
}

RationalMatrix inverse(const RationalMatrix& m) {
  return solve(m, RationalMatrix::identity(m.rows()));
}

std::string to_string(const Rational& q) {
  return q.str();
}

}  // namespace gapforge
