#include "patchscout/context.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "patchscout/errors.hpp"
#include "patchscout/tokenizer.hpp"

namespace patchscout {

std::vector<int> width_order(int max_width) {
    std::vector<int> order;
    if (max_width < 0) return {0};
    order.reserve(static_cast<size_t>(max_width) + 1);
    int mid = max_width / 2;
    order.push_back(mid);
    for (int step = 1; step <= max_width; ++step) {
        int down = mid - step;
        int up = mid + step;
        if (down >= 0) order.push_back(down);
        if (up <= max_width) order.push_back(up);
    }
    return order;
}

int boundary_depth(const SyntaxTree& tree, int line) {
    return tree.min_depth_at(line);
}

int choose_width(const SyntaxTree& tree, int base, int direction,
                 const std::vector<int>& order, BoundaryPolicy policy) {
    if (policy == BoundaryPolicy::Argmax) {
        int best_width = order.front();
        int best_depth = -1;
        for (int w : order) {
            int depth = boundary_depth(tree, base + direction * w);
            if (depth == kInfiniteDepth) return w;
            if (depth > best_depth) {
                best_depth = depth;
                best_width = w;
            }
        }
        return best_width;
    }
    int best_width = order.front();
    int best_depth = kInfiniteDepth;
    for (int w : order) {
        int depth = boundary_depth(tree, base + direction * w);
        if (depth < best_depth) {
            best_depth = depth;
            best_width = w;
        }
    }
    return best_width;
}

Hunk expand(const Hunk& hunk, const SyntaxTree& before_tree,
            const SyntaxTree& after_tree, const std::vector<int>& order,
            BoundaryPolicy policy) {
    Hunk out = hunk;
    out.context_before =
        choose_width(before_tree, hunk.before.start, -1, order, policy);
    out.context_after =
        choose_width(after_tree, hunk.after.end(), +1, order, policy);
    return out;
}

void expand_hunks(std::vector<Hunk>& hunks, const SyntaxTree& before_tree,
                  const SyntaxTree& after_tree, int max_width,
                  BoundaryPolicy policy) {
    const std::vector<int> order = width_order(max_width);
    for (Hunk& h : hunks) {
        h = expand(h, before_tree, after_tree, order, policy);
    }
}

void set_constant_width(std::vector<Hunk>& hunks, int width) {
    for (Hunk& h : hunks) {
        h.context_before = width;
        h.context_after = width;
    }
}

namespace {

// A window is one rendered @@ section: context plus the changed runs it
// covers. Only the before-file extent is tracked; the after side of the
// header is fixed by the walk itself (context is shared, so after length =
// before length - deleted + added), which stays correct even when one
// run's context reaches across a later run.
struct Window {
    int before_start = 1;
    int before_end = 0; // inclusive; end < start means no before lines
    int after_start = 1;
    std::vector<const Hunk*> runs;
};

Window window_for(const Hunk& h, int before_count) {
    Window w;
    w.before_start = std::max(1, h.before.start - h.context_before);
    w.before_end = std::min(before_count, h.before.end() + h.context_after);
    w.after_start = std::max(1, h.after.start - h.context_before);
    w.runs.push_back(&h);
    return w;
}

// Context lines exist unchanged in both files, so the walk reads them from
// the before text only; the after side contributes just its header count.
void render_window(std::ostringstream& out, const Window& w,
                   const std::vector<std::string>& before_lines) {
    int before_len = std::max(0, w.before_end - w.before_start + 1);
    int after_len = before_len;
    for (const Hunk* run : w.runs) {
        after_len -= static_cast<int>(run->deleted_lines.size());
        after_len += static_cast<int>(run->added_lines.size());
    }
    int before_pos = before_len == 0 ? w.before_start - 1 : w.before_start;
    int after_pos = after_len == 0 ? w.after_start - 1 : w.after_start;
    out << "@@ -" << before_pos << ',' << before_len << " +" << after_pos
        << ',' << after_len << " @@\n";

    int b = w.before_start;
    for (const Hunk* run : w.runs) {
        for (; b < run->before.start; ++b) {
            out << ' ' << before_lines[static_cast<size_t>(b) - 1] << '\n';
        }
        for (const std::string& line : run->deleted_lines) {
            out << '-' << line << '\n';
        }
        for (const std::string& line : run->added_lines) {
            out << '+' << line << '\n';
        }
        b = run->before.end() + 1;
    }
    for (; b <= w.before_end; ++b) {
        out << ' ' << before_lines[static_cast<size_t>(b) - 1] << '\n';
    }
}

} // namespace

std::string render_file_diff(const std::string& path,
                             const std::vector<std::string>& before_lines,
                             const std::vector<Hunk>& hunks) {
    std::ostringstream out;
    out << "--- " << path << '\n';
    out << "+++ " << path << '\n';

    std::vector<Window> windows;
    for (const Hunk& h : hunks) {
        Window next = window_for(h, static_cast<int>(before_lines.size()));
        if (!windows.empty() &&
            windows.back().before_end + 1 >= next.before_start) {
            Window& cur = windows.back();
            cur.before_end = std::max(cur.before_end, next.before_end);
            cur.runs.push_back(&h);
        } else {
            windows.push_back(std::move(next));
        }
    }
    for (const Window& w : windows) {
        render_window(out, w, before_lines);
    }
    return out.str();
}

namespace {

std::string flatten_message(const std::string& message) {
    std::string flat;
    flat.reserve(message.size());
    for (char c : message) {
        if (c == '\r') continue;
        flat.push_back(c == '\n' ? ' ' : c);
    }
    return flat;
}

} // namespace

ContextDocument assemble(const std::string& message,
                         const std::vector<std::string>& rendered_files,
                         int max_message_size, int max_code_size) {
    std::string msg = truncate_tokens(flatten_message(message),
                                      static_cast<size_t>(std::max(0, max_message_size)));
    std::string body;
    for (const std::string& file : rendered_files) body += file;
    body = truncate_tokens(body, static_cast<size_t>(std::max(0, max_code_size)));

    ContextDocument doc;
    doc.text = "MSG:";
    if (!msg.empty()) {
        doc.text += ' ';
        doc.text += msg;
    }
    doc.text += "\n\n";
    doc.text += body;
    doc.token_count = count_tokens(msg) + count_tokens(body);
    return doc;
}

std::string to_jsonl(const ContextDocument& doc) {
    nlohmann::ordered_json j;
    j["repo"] = doc.repo;
    j["commit"] = doc.commit;
    j["label"] = doc.label;
    j["split"] = doc.split;
    j["text"] = doc.text;
    j["token_count"] = doc.token_count;
    return j.dump();
}

ContextDocument document_from_json(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad document line: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("bad document line: not an object");
    ContextDocument doc;
    try {
        doc.repo = j.at("repo").get<std::string>();
        doc.commit = j.at("commit").get<std::string>();
        doc.label = j.at("label").get<int>();
        doc.split = j.at("split").get<std::string>();
        doc.text = j.at("text").get<std::string>();
        doc.token_count = j.at("token_count").get<size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad document line: ") + e.what());
    }
    if (doc.label < -1 || doc.label > 1) {
        throw ValidationError("document label must be -1, 0 or 1");
    }
    return doc;
}

} // namespace patchscout
