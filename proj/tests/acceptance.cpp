#include <cstdio>
#include <map>

#include "lattika/checks.hpp"

using namespace lattika;

// One line per acceptance criterion; a criterion passes when all of its checks pass
// and every witness they emit re-verifies.
int main() {
    std::map<int, std::vector<CheckReport>> by_criterion;
    for (const auto& c : check_registry()) by_criterion[c.criterion].push_back(run_check(c));

    int failures = 0;
    for (const auto& [n, reports] : by_criterion) {
        bool pass = true;
        double ms = 0;
        std::string ids, details;
        Json js = Json::array();
        for (const auto& r : reports) {
            pass &= r.status == CheckStatus::pass;
            ms += r.millis;
            ids += (ids.empty() ? "" : ",") + r.id;
            if (r.status != CheckStatus::pass) details += " [" + r.id + ": " + r.detail + "]";
            js.push_back(report_to_json(r, false));
        }
        const auto re = recheck_reports(js);
        if (re.failed > 0) {
            pass = false;
            details += " [" + std::to_string(re.failed) + " witnesses fail to re-verify]";
        }
        if (!pass) ++failures;
        std::printf("criterion %2d: %s %8.1f ms  %s (%zu witnesses)%s\n", n, pass ? "PASS" : "FAIL", ms, ids.c_str(),
                    re.claims, details.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failures, by_criterion.size());
    return failures == 0 ? 0 : 1;
}
