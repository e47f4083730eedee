#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace gapforge {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Dense row-major matrix over the rationals. Sizes here are tiny (at most a
// few dozen), so no attempt is made at anything clever.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator*(const Rational& s) const;
  bool operator==(const RationalMatrix& o) const = default;

  RationalMatrix transpose() const;
  Eigen::MatrixXd to_double() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

// Gauss-Jordan inverse. Throws std::domain_error when singular.
RationalMatrix inverse(const RationalMatrix& m);

// Solves m * x = b exactly (b may have several columns).
RationalMatrix solve(const RationalMatrix& m, const RationalMatrix& b);

std::string to_string(const Rational& q);

}  // namespace gapforge
