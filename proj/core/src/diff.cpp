#include "patchscout/diff.hpp"

#include <algorithm>

namespace patchscout {

namespace {

// Beyond this many edit steps the O(ND) search is abandoned and the whole
// remaining region becomes one replace hunk. Keeps worst-case memory at a
// few MB for adversarial inputs; everyday diffs never get close.
constexpr int kMaxEditDistance = 2048;

enum class Op : unsigned char { Del, Ins };

// Myers greedy forward search. Returns the op sequence in path order
// (deletes carry before-side indexes, inserts after-side indexes; equal
// stretches are implied by the positions), or false if the distance cap
// was hit.
bool myers(const std::vector<std::string>& a, const std::vector<std::string>& b,
           std::vector<std::pair<Op, int>>& ops_out) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max_d = std::min(n + m, kMaxEditDistance);
    const int offset = max_d;

    std::vector<int> v(2 * max_d + 1, 0);
    std::vector<std::vector<int>> trace; // band [-d, d] per step
    int found_d = -1;

    for (int d = 0; d <= max_d && found_d < 0; ++d) {
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1])) {
                x = v[offset + k + 1];
            } else {
                x = v[offset + k - 1] + 1;
            }
            int y = x - k;
            while (x < n && y < m && a[x] == b[y]) {
                ++x;
                ++y;
            }
            v[offset + k] = x;
            if (x >= n && y >= m) {
                found_d = d;
                break;
            }
        }
        trace.emplace_back(v.begin() + (offset - d), v.begin() + (offset + d + 1));
    }
    if (found_d < 0) return false;

    // Walk the recorded frontiers backwards to recover the path.
    std::vector<std::pair<Op, int>> rev;
    int x = n, y = m;
    for (int d = found_d; d > 0; --d) {
        const std::vector<int>& pv = trace[d - 1];
        auto prev_x_at = [&](int k) { return pv[k + d - 1]; };
        int k = x - y;
        int prev_k;
        if (k == -d || (k != d && prev_x_at(k - 1) < prev_x_at(k + 1))) {
            prev_k = k + 1; // reached via an insert
        } else {
            prev_k = k - 1; // reached via a delete
        }
        int px = prev_x_at(prev_k);
        int py = px - prev_k;
        while (x > px && y > py) { // snake back over the equal run
            --x;
            --y;
        }
        if (prev_k == k + 1) {
            rev.emplace_back(Op::Ins, py);
            y = py;
        } else {
            rev.emplace_back(Op::Del, px);
            x = px;
        }
    }
    ops_out.assign(rev.rbegin(), rev.rend());
    return true;
}

} // namespace

std::vector<Hunk> diff_lines(const std::vector<std::string>& before,
                             const std::vector<std::string>& after) {
    const int n_total = static_cast<int>(before.size());
    const int m_total = static_cast<int>(after.size());

    // Trim the common prefix and suffix; the search runs on the core only.
    int prefix = 0;
    while (prefix < n_total && prefix < m_total && before[prefix] == after[prefix]) ++prefix;
    int suffix = 0;
    while (suffix < n_total - prefix && suffix < m_total - prefix &&
           before[n_total - 1 - suffix] == after[m_total - 1 - suffix]) {
        ++suffix;
    }

    std::vector<std::string> a(before.begin() + prefix, before.end() - suffix);
    std::vector<std::string> b(after.begin() + prefix, after.end() - suffix);

    std::vector<std::pair<Op, int>> ops;
    if (!myers(a, b, ops)) {
        ops.clear();
        for (int i = 0; i < static_cast<int>(a.size()); ++i) ops.emplace_back(Op::Del, i);
        for (int j = 0; j < static_cast<int>(b.size()); ++j) ops.emplace_back(Op::Ins, j);
    }

    // Group ops into hunks. The number of equal core lines consumed before
    // an op is its index minus the ops of its own kind already taken; ops
    // sharing that count are separated by no equal line and belong to the
    // same hunk, deletes listed before inserts.
    std::vector<Hunk> hunks;
    int taken_d = 0, taken_s = 0;
    size_t i = 0;
    while (i < ops.size()) {
        auto equal_count = [&](size_t idx) {
            return ops[idx].first == Op::Del ? ops[idx].second - taken_d
                                             : ops[idx].second - taken_s;
        };
        const int eq = equal_count(i);
        const int start_taken_d = taken_d;
        const int start_taken_s = taken_s;
        int first_del = -1, first_ins = -1;
        Hunk h;
        while (i < ops.size() && equal_count(i) == eq) {
            if (ops[i].first == Op::Del) {
                if (first_del < 0) first_del = ops[i].second;
                h.deleted_lines.push_back(a[ops[i].second]);
                ++taken_d;
            } else {
                if (first_ins < 0) first_ins = ops[i].second;
                h.added_lines.push_back(b[ops[i].second]);
                ++taken_s;
            }
            ++i;
        }
        // A core index is already a position on its own side; the side with
        // no ops gets the would-begin position from the lines consumed so
        // far on that side (equal lines plus its own prior edits).
        h.before.start = first_del >= 0 ? prefix + first_del + 1
                                        : prefix + eq + start_taken_d + 1;
        h.after.start = first_ins >= 0 ? prefix + first_ins + 1
                                       : prefix + eq + start_taken_s + 1;
        h.before.length = static_cast<int>(h.deleted_lines.size());
        h.after.length = static_cast<int>(h.added_lines.size());
        hunks.push_back(std::move(h));
    }
    return hunks;
}

ChangedLines changed_lines(const std::vector<Hunk>& hunks) {
    ChangedLines out;
    for (const Hunk& h : hunks) {
        for (int i = 0; i < h.before.length; ++i) out.deleted.push_back(h.before.start + i);
        for (int i = 0; i < h.after.length; ++i) out.added.push_back(h.after.start + i);
    }
    return out;
}

} // namespace patchscout
