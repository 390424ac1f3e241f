#ifndef SAC_VALIDATE_HPP
#define SAC_VALIDATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sac/experiments.hpp"

namespace sac {

struct ValidateOptions {
    std::uint64_t seed = 1;
    /// Evaluate the drift on this many grid points instead of the dealiasing grid.
    std::optional<Index> drift_grid;
    /// Replace the Allen-Cahn coefficients used by the drift suites.
    std::optional<DriftCoefficients> drift;
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::string first_failure;
};

/// Parseval, increment coupling, drift oracle, one-sided Lipschitz, smoothing ratio and law sandwich.
std::vector<SuiteResult> run_validation(const ValidateOptions& options = {});

}  // namespace sac

#endif  // SAC_VALIDATE_HPP
