#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace multifrac {

struct CriterionResult
{
    std::string id;  // "coefficients", "1" ... "9"
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
};

struct AcceptanceOptions
{
    bool quick = false;
    /// Corrupt the coefficient table fed to the measure builder.
    bool inject_coefficient_fault = false;
    bool include_coefficients = true;
};

using CriterionSink = std::function<void(const CriterionResult &)>;

/// Runs the coefficient check (unless excluded) and criteria 1-9 in order, reporting
/// each result to `sink` as soon as it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options, const CriterionSink &sink = {});

} // namespace multifrac
