#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace landaulab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the full acceptance battery; one result per criterion.
std::vector<CriterionResult> run_acceptance_criteria();

// Prints one PASS/FAIL line per criterion; returns the number of failures.
int run_acceptance(std::ostream& out);

} // namespace landaulab
