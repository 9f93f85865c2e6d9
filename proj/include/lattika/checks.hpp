#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lattika/serialize.hpp"

namespace lattika {

enum class CheckStatus { pass, fail, unknown };
std::string to_string(CheckStatus s);

struct CheckReport {
    std::string id;
    CheckStatus status = CheckStatus::unknown;
    std::string detail;
    Json witnesses = Json::array();  // claims, see recheck_claim
    double millis = 0;
};

struct CheckInfo {
    std::string id;
    std::string title;
    int criterion;         // acceptance criterion number
    double limit_seconds;  // time budget; exceeding it fails the check
    std::function<CheckReport()> run;
};

// Fixed order; reports are always listed in this order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& id);

// Runs one check, records the time and converts exceptions into failures.
CheckReport run_check(const CheckInfo& info);
Json report_to_json(const CheckReport& r, bool with_timing);

// Claims are re-verified by matrix products and form evaluation only:
//   gram {gram, basis, expected}       basis * gram * basis^T == expected
//   preserves {gram, matrix}           matrix^T * gram * matrix == gram
//   sends {matrix, from, to}           matrix * from == to
//   product {left, right, expected}
//   determinant {matrix, value}
//   norm {gram, vector, value}
//   divisibility {gram, vector, value} gcd of the entries of gram * vector
//   form_values {gram, lifts, q}       q(i,i) = y_i^2 mod 2, q(i,j) = (y_i,y_j) mod 1
//   signature {gram, value}
//   even {gram}
bool recheck_claim(const Json& claim, std::string& why);

struct RecheckSummary {
    std::size_t claims = 0;
    std::size_t failed = 0;
    std::vector<std::string> failures;
};
RecheckSummary recheck_reports(const Json& reports);

}  // namespace lattika
