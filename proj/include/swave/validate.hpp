#pragma once

#include <functional>
#include <string>
#include <vector>

// End-to-end acceptance checks: every published number and solver property
// this library claims to reproduce, each reported as an independent
// pass/fail with the measured values in the detail string.

namespace swave {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured values and tolerances
};

/// Runs the full acceptance suite in order (takes a few minutes; the solver
/// agreement and Wigner volume checks dominate).  cli_path locates the
/// command-line binary for the byte-determinism criterion; results stream
/// through on_result as they finish when a callback is given.
std::vector<CriterionResult> acceptance_suite(
    const std::string& cli_path,
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace swave
