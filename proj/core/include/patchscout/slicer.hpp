#pragma once

#include <set>
#include <string>
#include <vector>

#include "patchscout/flow_graph.hpp"
#include "patchscout/syntax.hpp"

namespace patchscout {

// Reduction of one file version to the statements that plausibly interact
// with a change. Statement selection runs per method over the dependence
// graph; everything structural that frames a kept statement (signatures,
// type headers, braces) is retained so the output stays block-complete.

// Vertices reachable from `seeds` following edges forward, plus vertices
// from which a seed is reachable (a backward walk over the mirrored edges),
// plus the seeds themselves. Sorted.
std::vector<int> slice_from_seeds(const std::vector<std::vector<int>>& forward,
                                  const std::vector<std::vector<int>>& reverse,
                                  const std::vector<int>& seeds);

std::vector<int> bi_bfs_slice(const FlowGraph& graph, const std::vector<int>& seeds);

// The line window that decides whether a vertex counts as changed:
// constructs react to their header lines only, everything else to its whole
// span.
struct EffectiveSpan {
    int first = 0;
    int last = 0;
};
EffectiveSpan effective_span(const SyntaxNode& node);

// Vertices whose effective span intersects `changed_lines`.
std::vector<int> changed_vertices(const FlowGraph& graph,
                                  const std::set<int>& changed_lines);

struct ReductionRequest {
    const SyntaxTree* tree = nullptr;
    const FileStructure* structure = nullptr;
    std::set<int> changed_lines;               // 1-based, this version's numbering
    std::set<const MethodDecl*> stub_methods;  // relevant but unchanged
};

// Names whose retention is forced, used to keep both versions of a file
// symmetric: a field or import retained in one version must not disappear
// from the other, or the reduced diff would invent hunks.
struct RetentionHints {
    std::set<std::string> field_names;
    std::set<std::string> import_qualified;
};

struct ReducedFile {
    std::vector<std::string> lines;
    std::set<std::string> kept_field_names;
    std::set<std::string> kept_import_qualified;
};

ReducedFile reduce_file(const ReductionRequest& request, const RetentionHints& hints);

struct ReducedPair {
    std::vector<std::string> before;
    std::vector<std::string> after;
};

// Reduces both versions, then reduces again with the union of kept fields
// and imports so that unchanged declarations never differ between sides.
ReducedPair reduce_pair(const ReductionRequest& before, const ReductionRequest& after);

} // namespace patchscout
