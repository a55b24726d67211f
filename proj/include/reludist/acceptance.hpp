#pragma once

#include "reludist/parallel.hpp"

#include <string>
#include <vector>

namespace reludist {

struct criterion_result {
    int id{};
    std::string name;
    bool passed{};
    std::string detail;
    double seconds{};
};

/// Runs every acceptance criterion at its fixed size and tolerance.
[[nodiscard]] std::vector<criterion_result> run_acceptance(execution exec = {});

/// "[PASS] 3 cross-term triple agreement (0.01 s): ..." per criterion.
[[nodiscard]] std::string format_result(const criterion_result &result);

}  // namespace reludist
