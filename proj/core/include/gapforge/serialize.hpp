#pragma once

#include <Eigen/Dense>
#include <string>

#include "gapforge/commutant.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/layer_operator.hpp"
#include "gapforge/numeric.hpp"

namespace gapforge {

// Shortest round-trip-safe decimal: 17 significant digits.
std::string format_double(double x);

// Row-major arrays of decimal strings.
std::string matrix_json(const Eigen::MatrixXd& m);
std::string to_json(const LocalMomentMatrix& m);
std::string to_json(const BlockMatrix& b);
std::string to_json(const GapResult& r);
std::string to_json(const DepthBound& b);

}  // namespace gapforge
