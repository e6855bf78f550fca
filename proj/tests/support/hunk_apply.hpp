#pragma once

// Independent interpretation of hunk ranges, used to check the diff engine:
// replay the hunks against the before text and compare with the after text.
// Deliberately written against the documented range semantics, not against
// the diff implementation.

#include <string>
#include <vector>

#include "patchscout/diff.hpp"

namespace test_support {

inline std::vector<std::string> apply_hunks(const std::vector<std::string>& before,
                                            const std::vector<patchscout::Hunk>& hunks) {
    std::vector<std::string> out;
    int cursor = 1; // next unconsumed before line (1-based)
    for (const auto& h : hunks) {
        for (; cursor < h.before.start; ++cursor) {
            out.push_back(before.at(static_cast<size_t>(cursor - 1)));
        }
        cursor += h.before.length; // deleted lines are skipped
        for (const auto& l : h.added_lines) out.push_back(l);
    }
    for (; cursor <= static_cast<int>(before.size()); ++cursor) {
        out.push_back(before.at(static_cast<size_t>(cursor - 1)));
    }
    return out;
}

} // namespace test_support
