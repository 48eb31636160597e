// JSON encoding of complex matrices: arrays of rows, each entry a [re, im]
// pair (plain numbers are accepted as real entries on input).
#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "pinchkit/core.hpp"

namespace pinchkit::io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::BadSpec, "complex entries must be numbers or [re, im] pairs, got " + j.dump());
}

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::BadSpec, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw Error(ErrorCode::BadSpec, "matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorCode::BadSpec, "matrix rows must share one length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  require_finite(m, "matrix");
  return m;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadSpec, path + ": " + e.what());
  }
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
  const json j = read_json_file(path);
  return matrix_from_json(j.is_object() && j.contains("matrix") ? j.at("matrix") : j);
}

}  // namespace pinchkit::io
