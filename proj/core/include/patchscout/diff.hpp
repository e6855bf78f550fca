#pragma once

#include <string>
#include <vector>

namespace patchscout {

// 1-based line range. An empty range (length == 0) positions an insertion:
// start is the line at which inserted content would begin, so the content
// sits after line start-1.
struct LineRange {
    int start = 1;
    int length = 0;
    int end() const { return start + length - 1; } // last covered line; start-1 when empty
};

// One contiguous run of changed lines. Context widths start at zero; the
// context-expansion pass fills them in before rendering.
struct Hunk {
    LineRange before;
    LineRange after;
    std::vector<std::string> deleted_lines;
    std::vector<std::string> added_lines;
    int context_before = 0;
    int context_after = 0;
};

// Line diff with shortest-edit-script semantics (Myers). Hunks come back
// sorted by position and non-overlapping. Inputs beyond the complexity cap
// (giant, completely rewritten files) degrade to a single replace-all hunk,
// which is still a valid, just not minimal, script.
std::vector<Hunk> diff_lines(const std::vector<std::string>& before,
                             const std::vector<std::string>& after);

// Changed line numbers per side: `deleted` indexes into the before text,
// `added` into the after text. Both sorted ascending.
struct ChangedLines {
    std::vector<int> deleted;
    std::vector<int> added;
};

ChangedLines changed_lines(const std::vector<Hunk>& hunks);

} // namespace patchscout
