#pragma once

// The acceptance suite: numbered criteria with measured values, shared by
// `hardylab verify --suite acceptance` and the acceptance test binary.

#include <string>
#include <vector>

namespace hardylab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured values of every sub-check
};

inline constexpr int kCriterionCount = 14;

/// Runs criterion `id` (1-based). `parallel` selects the OpenMP ladder and
/// grid kernels; results do not depend on it.
CriterionResult run_criterion(int id, bool parallel = true);

std::vector<CriterionResult> run_all(bool parallel = true);

/// "[PASS] 3 name: detail" style line.
std::string format_line(const CriterionResult& r);

}  // namespace hardylab::acceptance
