#include "diracstep/io/representation_json.hpp"

#include <stdexcept>
#include <string>

namespace diracstep::io {

namespace {

using nlohmann::json;

json matrix_to_json(const algebra::ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

algebra::ComplexMatrix matrix_from_json(const json& doc, const std::string& what) {
  if (!doc.is_array() || doc.empty()) {
    throw std::invalid_argument(what + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto& first = doc.front();
  if (!first.is_array() || first.empty()) {
    throw std::invalid_argument(what + ": rows must be non-empty arrays");
  }
  const auto cols = static_cast<Eigen::Index>(first.size());
  algebra::ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = doc[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(what + ": ragged row " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& entry = row[static_cast<std::size_t>(j)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw std::invalid_argument(what + ": entries must be [re, im] number pairs");
      }
      m(i, j) = {entry[0].get<double>(), entry[1].get<double>()};
    }
  }
  return m;
}

}  // namespace

json to_json(const algebra::DiracRepresentation& rep) {
  json alphas = json::array();
  for (const auto& alpha : rep.alphas) alphas.push_back(matrix_to_json(alpha));
  return {{"n", rep.n}, {"dim", rep.dim}, {"alphas", alphas}, {"beta", matrix_to_json(rep.beta)}};
}

algebra::DiracRepresentation representation_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("representation must be a JSON object");
  for (const char* key : {"n", "dim", "alphas", "beta"}) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  if (!doc["n"].is_number_integer() || !doc["dim"].is_number_integer()) {
    throw std::invalid_argument("'n' and 'dim' must be integers");
  }
  if (!doc["alphas"].is_array()) throw std::invalid_argument("'alphas' must be an array");

  algebra::DiracRepresentation rep;
  rep.n = doc["n"].get<int>();
  rep.dim = doc["dim"].get<int>();
  for (std::size_t i = 0; i < doc["alphas"].size(); ++i) {
    rep.alphas.push_back(matrix_from_json(doc["alphas"][i], "alphas[" + std::to_string(i) + "]"));
  }
  rep.beta = matrix_from_json(doc["beta"], "beta");
  return rep;
}

}  // namespace diracstep::io
