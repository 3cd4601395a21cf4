#include "ptl/array_json.hpp"

#include <stdexcept>
#include <string>

namespace ptl {

Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = s.find('.');
  if (dot == std::string::npos && s.find_first_of("eE") == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return q;
  }
  // decimal literal: mantissa digits over a power of ten
  std::string mant;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  std::string body = s.substr(0, epos);
  if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
  dot = body.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(body.size() - dot - 1);
    body.erase(dot, 1);
  }
  mpz_class num;
  if (num.set_str(body, 10) != 0) throw std::invalid_argument("malformed decimal '" + text + "'");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
  q.canonicalize();
  return q;
}

namespace {

std::vector<int> shape_of(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    throw std::invalid_argument("array JSON must be an object with a \"rows\" array");
  }
  std::vector<int> len;
  for (const auto& row : j["rows"]) {
    if (!row.is_array()) throw std::invalid_argument("array JSON: each row must be an array");
    len.push_back(static_cast<int>(row.size()));
  }
  return len;
}

}  // namespace

nlohmann::json array_to_json(const PolygonalArray<double>& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 1; i <= w.shape().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 1; j <= w.shape().row_length(i); ++j) row.push_back(w(i, j));
    rows.push_back(row);
  }
  return {{"rows", rows}};
}

nlohmann::json array_to_json(const PolygonalArray<Rational>& w) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 1; i <= w.shape().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 1; j <= w.shape().row_length(i); ++j) row.push_back(w(i, j).get_str());
    rows.push_back(row);
  }
  return {{"rows", rows}};
}

PolygonalArray<double> array_from_json(const nlohmann::json& j) {
  IndexSet shape(shape_of(j));
  std::vector<double> entries;
  for (const auto& row : j["rows"]) {
    for (const auto& v : row) {
      if (v.is_number()) entries.push_back(v.get<double>());
      else if (v.is_string()) entries.push_back(to_double(parse_rational(v.get<std::string>())));
      else throw std::invalid_argument("array JSON: entries must be numbers");
    }
  }
  return PolygonalArray<double>(std::move(shape), std::move(entries));
}

PolygonalArray<Rational> rational_array_from_json(const nlohmann::json& j) {
  IndexSet shape(shape_of(j));
  std::vector<Rational> entries;
  for (const auto& row : j["rows"]) {
    for (const auto& v : row) {
      if (v.is_number_integer()) entries.emplace_back(v.dump());
      else if (v.is_number()) entries.push_back(parse_rational(v.dump()));
      else if (v.is_string()) entries.push_back(parse_rational(v.get<std::string>()));
      else throw std::invalid_argument("array JSON: entries must be numbers or rational strings");
    }
  }
  return PolygonalArray<Rational>(std::move(shape), std::move(entries));
}

}  // namespace ptl
