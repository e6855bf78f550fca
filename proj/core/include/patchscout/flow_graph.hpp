#pragma once

#include <string>
#include <vector>

#include "patchscout/syntax.hpp"

namespace patchscout {

// Statement-level dependence graph for one method. Vertices are the
// statements of the method body (constructs like if/loop/try contribute one
// header vertex each; their sub-block statements are separate vertices) plus
// one vertex per field visible from the method, standing in for the field's
// initialization.
//
// Edges, all forward, mirrored verbatim into `reverse`:
//   control: construct header -> each statement directly inside one of its
//            sub-blocks (nested constructs contribute only their own header;
//            their interior hangs off that header, not the outer one)
//   data:    any vertex defining a name -> any other vertex using that name,
//            resolved by name within the method, flow-insensitively
//
// The approximation is deliberately one-sided: extra edges cost a few extra
// retained lines, missing edges lose real dependencies.

struct DefUse {
    std::vector<std::string> defs;
    std::vector<std::string> uses;
};

// Name definitions and uses in the token slice of `node`. Handles plain and
// compound assignment, increment/decrement, declarations with and without
// initializer, and enhanced-for bindings. Type names in declaration prefixes,
// member selections (after '.'), and call names (before '(') do not count
// as uses.
DefUse extract_def_use(const std::vector<Token>& tokens, const SyntaxNode& node);

struct FlowVertex {
    const SyntaxNode* node = nullptr;
    // Construct header vertex this statement sits directly under, or null
    // for statements at method-body level and for field vertices.
    int control_parent = -1;
    bool is_field = false;
    std::vector<std::string> defs;
    std::vector<std::string> uses;
};

struct FlowGraph {
    std::vector<FlowVertex> vertices; // method statements in source order, then fields
    std::vector<std::vector<int>> forward;
    std::vector<std::vector<int>> reverse;

    // Index of the vertex backed by `node`, -1 when absent.
    int index_of(const SyntaxNode* node) const;
};

FlowGraph build_flow_graph(const SyntaxTree& tree, const FileStructure& structure,
                           const MethodDecl& method);

} // namespace patchscout
