#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace lnagell {

struct ConditionVerdict {
    std::string name;
    bool passed = false;
    /// False when a "for every prime factor" claim left a composite cofactor unchecked.
    bool fully_verified = true;
    std::string detail;
};

inline bool all_passed(const std::vector<ConditionVerdict>& v) {
    return std::all_of(v.begin(), v.end(), [](const ConditionVerdict& c) { return c.passed; });
}

inline const ConditionVerdict* find_verdict(const std::vector<ConditionVerdict>& v, const std::string& name) {
    for (const auto& c : v) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace lnagell
