#include "addsum/serialize.hpp"

#include <sstream>

namespace addsum {

using nlohmann::json;

Route route_from_name(const std::string& name) {
  for (Route r : {Route::Oracle, Route::FastGcd, Route::FastLcm, Route::GenericMoebius})
    if (name == route_name(r)) return r;
  throw DomainError("unknown route '" + name + "'");
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::DirectPrimeSum, Method::PrimeZetaSeries,
                   Method::Quadrature, Method::Combination})
    if (name == method_name(m)) return m;
  throw DomainError("unknown method '" + name + "'");
}

json to_json(const ExactSum& s) {
  json j{{"function", s.function},
         {"k", s.k},
         {"x", s.x},
         {"route", route_name(s.route)},
         {"domain", s.domain == ValueDomain::Integer ? "int" : "real"}};
  if (s.domain == ValueDomain::Integer)
    j["value"] = s.ivalue.str();
  else
    j["value"] = s.rvalue;
  return j;
}

ExactSum exact_sum_from_json(const json& j) {
  ExactSum s;
  s.function = j.at("function").get<std::string>();
  s.k = j.at("k").get<unsigned>();
  s.x = j.at("x").get<uint64_t>();
  s.route = route_from_name(j.at("route").get<std::string>());
  s.domain = j.at("domain").get<std::string>() == "int" ? ValueDomain::Integer
                                                        : ValueDomain::Real;
  if (s.domain == ValueDomain::Integer) {
    s.ivalue = BigInt(j.at("value").get<std::string>());
    s.rvalue = static_cast<double>(s.ivalue);
  } else {
    s.rvalue = j.at("value").get<double>();
  }
  return s;
}

json to_json(const ConstantValue& c) {
  return json{{"name", c.name},
              {"value", c.value},
              {"tail_bound", c.tail_bound},
              {"prime_limit", c.prime_limit},
              {"method", method_name(c.method)}};
}

ConstantValue constant_from_json(const json& j) {
  ConstantValue c;
  c.name = j.at("name").get<std::string>();
  c.value = j.at("value").get<double>();
  c.tail_bound = j.at("tail_bound").get<double>();
  c.prime_limit = j.at("prime_limit").get<uint64_t>();
  c.method = method_from_name(j.at("method").get<std::string>());
  return c;
}

json to_json(const ResidualReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"x", row.x},
                        {"exact", to_json(row.exact)},
                        {"main_term", row.main},
                        {"residual", row.residual},
                        {"normalized_residual", row.normalized}});
  return json{{"family", family_name(r.family)},
              {"function", r.function},
              {"k", r.k},
              {"N", r.N},
              {"rows", rows}};
}

ResidualReport report_from_json(const json& j) {
  ResidualReport r;
  r.family = family_from_name(j.at("family").get<std::string>());
  r.function = j.at("function").get<std::string>();
  r.k = j.at("k").get<unsigned>();
  r.N = j.at("N").get<unsigned>();
  for (const auto& row_j : j.at("rows")) {
    ResidualRow row;
    row.x = row_j.at("x").get<uint64_t>();
    row.exact = exact_sum_from_json(row_j.at("exact"));
    row.main = row_j.at("main_term").get<double>();
    row.residual = row_j.at("residual").get<double>();
    row.normalized = row_j.at("normalized_residual").get<double>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

const char* kReportCsvHeader = "x,exact,main_term,residual,normalized_residual";

std::string to_csv(const ResidualReport& r) {
  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  out.precision(17);
  for (const auto& row : r.rows) {
    out << row.x << ',';
    if (row.exact.domain == ValueDomain::Integer)
      out << row.exact.ivalue.str();
    else
      out << row.exact.rvalue;
    out << ',' << row.main << ',' << row.residual << ',' << row.normalized << '\n';
  }
  return out.str();
}

}  // namespace addsum
