#pragma once

#include <string>
#include <vector>

#include "tatereg/scenario.hpp"

namespace tatereg {

// registered scenario kinds with one-line parameter documentation
std::vector<std::pair<std::string, std::string>> scenario_kinds();

Report run_scenario(const Scenario& s);
Report run_scenario_file(const std::string& path, long precision_override = 0,
                         long nu_override = 0);

struct SuiteResult {
    std::vector<Report> reports;
    long pass = 0, fail = 0, unsupported = 0;
    bool ok() const { return fail == 0 && unsupported == 0 && pass > 0; }
    std::string to_json(bool strip_timing = false) const;
};
SuiteResult run_suite(const std::string& directory, int jobs = 1,
                      long precision_override = 0, long nu_override = 0);

} // namespace tatereg
