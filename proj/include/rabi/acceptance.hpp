// acceptance.hpp: The acceptance criteria as executable checks.
//
// Each criterion runs at its base truncation and at twice that truncation,
// and passes only when every measured value is inside its tolerance at both.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rabi {

struct CriterionReport {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details;  // measured values, one per line
    std::string error;                 // set when the criterion threw
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::vector<int> criteria;  // empty selects all
    int dim = 0;                // overrides every base truncation when > 0
    bool convergence = true;    // also run at 2·dim
    int workers = 0;            // 0: one per hardware thread
};

inline constexpr int kCriterionCount = 8;

// Runs the selected criteria in order, printing one PASS/FAIL line per
// criterion (followed by indented measurements) to `log` as each finishes.
std::vector<CriterionReport> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

bool all_passed(const std::vector<CriterionReport>& reports);

}  // namespace rabi
