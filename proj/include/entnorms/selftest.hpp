#ifndef ENTNORMS_SELFTEST_HPP
#define ENTNORMS_SELFTEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace entnorms {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // headline measured quantities
    double seconds = 0.0;
};

struct SelftestOptions {
    uint64_t seed = 0;
    std::vector<int> only;  // empty = run all twelve criteria
};

// Runs the acceptance criteria with pinned tolerances. When `log` is given,
// one PASS/FAIL line per criterion is printed as results come in.
std::vector<CriterionResult> run_acceptance(const SelftestOptions& opts, std::ostream* log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace entnorms

#endif
