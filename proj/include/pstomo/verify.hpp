#pragma once

#include <string>
#include <vector>

namespace pstomo::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double millis = 0.0;
    std::string detail;
};

/// Self-verification: basis orthonormality, circuit/basis factorization,
/// increment-gate exactness, exact-mode reconstruction round trips and the
/// zero-collapse property, up to max_n data qubits (<= 6).
std::vector<CheckResult> run_checks(int max_n);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace pstomo::verify
