#pragma once

#include <string>

#include <json.hpp>

#include "addsum/asymptotics.hpp"
#include "addsum/constants.hpp"
#include "addsum/multisummers.hpp"

namespace addsum {

// JSON conventions: exact integers are decimal strings (arbitrary magnitude
// round-trips), reals are JSON numbers (nlohmann emits shortest round-trip
// form), enums are their name strings.

nlohmann::json to_json(const ExactSum& s);
ExactSum exact_sum_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConstantValue& c);
ConstantValue constant_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ResidualReport& r);
ResidualReport report_from_json(const nlohmann::json& j);

// Fixed-header CSV for grid reports.
extern const char* kReportCsvHeader;
std::string to_csv(const ResidualReport& r);

Route route_from_name(const std::string& name);
Method method_from_name(const std::string& name);

}  // namespace addsum
