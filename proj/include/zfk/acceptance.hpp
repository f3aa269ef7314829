#pragma once

// The twelve end-to-end acceptance checks, shared by the `acceptance` test
// binary and `zfk verify`.

#include <functional>
#include <string>
#include <vector>

namespace zfk {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    /// Human-readable measured values and targets.
    std::string measured;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// Source of I = int_{-inf}^0 (1 - h^s). Every target derived from the
    /// 0.34405 slope is checked against this value, so a mutated provider
    /// (e.g. a sign flip) must turn exactly those criteria red.
    std::function<double()> tail_integral;
    /// Called after each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS  1  title: measured (1.23 s)".
std::string format_result(const CriterionResult& r);

} // namespace zfk
