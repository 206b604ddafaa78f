#pragma once

#include <string>
#include <vector>

#include "supertau/diffpoly.hpp"

namespace supertau {

// One executable identity check. residue is the offending expression on failure.
struct CheckResult {
    std::string id;
    bool pass = false;
    DiffPoly residue;
    std::string note;
};

inline CheckResult check_zero(std::string id, const DiffPoly& residue) {
    return CheckResult{std::move(id), residue.is_zero(), residue, {}};
}

inline bool all_pass(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return true;
}

}  // namespace supertau
