#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsa {

enum class Suite { Quick, Full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    Suite suite = Suite::Quick;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool all_passed = false;
    std::string to_json() const;
};

/// Runs the full acceptance battery (13 criteria). Quick shrinks the Monte
/// Carlo path budgets; every threshold is expressed in standard errors or an
/// analytic tolerance, so the criteria are meaningful at either size.
AcceptanceReport run_acceptance(Suite suite, std::uint64_t seed);

} // namespace qsa
