#pragma once

#include <string>
#include <vector>

#include "pcontact/scenario.hpp"

namespace pcontact {

struct CheckResult {
    enum class Status { pass, fail, skipped };

    std::string name;
    Status status = Status::fail;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

std::string_view status_name(CheckResult::Status s) noexcept;

struct VerifyReport {
    std::string scenario;
    std::vector<CheckResult> checks;

    bool all_passed() const noexcept;
};

/// Runs the invariant battery on one scenario: model Hermiticity and
/// monotonicity, determinant realness, Jacobi consistency, analytic
/// derivatives vs Richardson differences, the block-determinant reduction,
/// phase invariance, the d = 1 reduction of the general coefficient, and
/// agreement with the continuation oracle (coefficients and remainder slopes).
///
/// Never throws on numerical trouble: a check that raises is reported as
/// failed with the error name in `detail`.
VerifyReport run_verification(const ScenarioConfig& cfg);

}  // namespace pcontact
