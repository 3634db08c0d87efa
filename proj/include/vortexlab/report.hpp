#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vortexlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

struct AcceptanceSummary {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> results;
    bool all_pass = false;

    std::string to_json() const;
    std::string one_line(int id) const;
};

/// Runs the full acceptance battery (analytic oracles, inequality suites,
/// desk-scale minimization witnesses). Deterministic for a fixed seed.
AcceptanceSummary run_acceptance(std::uint64_t seed, int threads);

}  // namespace vortexlab
