#include "gapforge/serialize.hpp"

#include <cstdio>

#include "json.hpp"

namespace gapforge {
namespace {

using nlohmann::json;

json matrix_value(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(format_double(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json labels_value(const std::vector<Label>& ls) {
  std::string s;
  for (Label l : ls) s.push_back(to_char(l));
  return s;
}

json spec_value(const CircuitSpec& s) {
  return {{"group", to_string(s.group)}, {"boundary", to_string(s.boundary)},
          {"d", s.d}, {"m", s.m}, {"n", s.n}};
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_json(const Eigen::MatrixXd& m) { return matrix_value(m).dump(); }

std::string to_json(const LocalMomentMatrix& m) {
  json j{{"left_labels", labels_value(m.left)}, {"right_labels", labels_value(m.right)},
         {"matrix", matrix_value(m.matrix)}};
  return j.dump();
}

std::string to_json(const BlockMatrix& b) {
  json basis = json::array();
  for (const auto& w : b.basis) basis.push_back(w.str());
  json j{{"zeta", b.zeta}, {"basis", basis}, {"matrix", matrix_value(b.matrix)}};
  return j.dump();
}

std::string to_json(const GapResult& r) {
  json j{{"spec", spec_value(r.spec)},
         {"lambda", format_double(r.lambda)},
         {"method", to_string(r.method)},
         {"residual", format_double(r.residual)},
         {"iterations", r.iterations},
         {"seconds", format_double(r.seconds)},
         {"status", r.status()}};
  if (r.method == Method::Dense) {
    j["unit_eigenvalues"] = r.unit_eigenvalues;
    j["multiplicity"] = r.multiplicity;
  }
  if (r.eigvec) {
    json v = json::array();
    for (Eigen::Index k = 0; k < r.eigvec->size(); ++k) v.push_back(format_double((*r.eigvec)(k)));
    j["eigvec"] = v;
  }
  return j.dump();
}

std::string to_json(const DepthBound& b) {
  json j{{"L_min", b.L_min}, {"L_real", format_double(b.L_real)}, {"epsilon", format_double(b.epsilon)},
         {"C", format_double(b.C)}, {"linear_coefficient", format_double(b.linear_coefficient)}};
  if (b.comparison) j["comparison"] = format_double(*b.comparison);
  return j.dump();
}

}  // namespace gapforge
