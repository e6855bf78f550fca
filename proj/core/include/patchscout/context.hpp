#pragma once

#include <string>
#include <vector>

#include "patchscout/config.hpp"
#include "patchscout/diff.hpp"
#include "patchscout/syntax.hpp"

namespace patchscout {

// Turns raw hunks into rendered, budgeted classifier input. The stages are
// independent and pure: width selection per hunk boundary, window merging,
// unified-diff-style rendering, and message+code assembly under token
// budgets.

// Candidate context widths 0..max_width in probe order: start at
// floor(max_width/2) and alternate outward, narrower side first, so 0 and
// max_width come last among the survivors. Duplicates keep their first
// occurrence. Always non-empty (max_width 0 gives [0]).
std::vector<int> width_order(int max_width);

// Score of placing a context boundary on `line`: the depth of the
// shallowest syntax node starting there, or kInfiniteDepth when nothing
// starts there (blank lines, closing braces) or the line falls outside the
// file. A boundary scoring kInfiniteDepth cuts no block at all.
int boundary_depth(const SyntaxTree& tree, int line);

// Picks a width from `order` for the boundary scored at base + direction*w.
// Argmax treats kInfiniteDepth as the best possible score, then prefers
// deeper lines; Argmin wants the shallowest real line and treats
// kInfiniteDepth as worst (all-infinite falls back to the first candidate).
// Ties always resolve to the earliest candidate in `order`.
int choose_width(const SyntaxTree& tree, int base, int direction,
                 const std::vector<int>& order, BoundaryPolicy policy);

// Fills context_before (scored in the before tree at before.start - w) and
// context_after (scored in the after tree at after.end() + w) of one hunk.
Hunk expand(const Hunk& hunk, const SyntaxTree& before_tree,
            const SyntaxTree& after_tree, const std::vector<int>& order,
            BoundaryPolicy policy);

void expand_hunks(std::vector<Hunk>& hunks, const SyntaxTree& before_tree,
                  const SyntaxTree& after_tree, int max_width,
                  BoundaryPolicy policy);

// Ablation path: every boundary gets the same fixed width, no scoring.
void set_constant_width(std::vector<Hunk>& hunks, int width);

// Renders the hunks of one file as a unified-diff-like block:
//   --- <path>
//   +++ <path>
//   @@ -a,b +c,d @@
// with deleted lines prefixed '-', added '+', context ' '. Within a changed
// run all deletions print before all insertions. Hunks whose context
// windows overlap or touch are merged under a single @@ header. Line counts
// in headers always carry both numbers; a zero-length side prints the line
// before the position, matching the usual diff convention. Context text is
// read from the before file; added lines already live in the hunks, so the
// after file is not needed here.
std::string render_file_diff(const std::string& path,
                             const std::vector<std::string>& before_lines,
                             const std::vector<Hunk>& hunks);

// One classifier input. `text` is the serialized form: "MSG:" line, blank
// line, body. token_count counts message plus body tokens after truncation;
// the MSG sentinel and the separator are framing and stay outside the
// budget arithmetic, so token_count <= max_message_size + max_code_size
// holds by construction.
struct ContextDocument {
    std::string repo;
    std::string commit;
    int label = -1; // 1 vulnerability patch, 0 not, -1 unknown
    std::string split;
    std::string text;
    size_t token_count = 0;
};

// Flattens the message onto one line, truncates message and concatenated
// rendered files to their budgets, and serializes. `rendered_files` should
// each already end with a newline.
ContextDocument assemble(const std::string& message,
                         const std::vector<std::string>& rendered_files,
                         int max_message_size, int max_code_size);

std::string to_jsonl(const ContextDocument& doc);
ContextDocument document_from_json(const std::string& line);

} // namespace patchscout
