#pragma once

#include <string>
#include <vector>

#include "patchscout/syntax.hpp"

namespace patchscout {

// Name-based call resolution across the files of one commit version. Calls
// are matched by simple name, argument count, and whatever argument types
// can be determined without evaluation: literals, `new T(...)`, and variables
// declared with an explicit type in the calling method (parameters included).
// Anything else is an unknown that matches any declared type. The result
// over-approximates: an unresolvable receiver never suppresses an edge.

struct InvocationArg {
    std::string type;         // base type name, "" when undetermined
    bool int_literal = false; // integral literal: compatible with any numeric
    bool float_literal = false; // floating literal: float or double only
};

struct Invocation {
    std::string name;
    std::vector<InvocationArg> args;
    int line = 0;
};

// Calls found in the body of `method`, in source order. Includes qualified
// calls (receiver.name(...)) and constructor calls (new T(...) under name T).
std::vector<Invocation> extract_invocations(const SyntaxTree& tree,
                                            const MethodDecl& method);

// Whether the invocation could refer to `callee` under the matching rules.
// Boxed and primitive numeric/char/boolean types are interchangeable.
bool invocation_matches(const Invocation& inv, const MethodDecl& callee);

struct MethodRef {
    const SyntaxTree* tree = nullptr;
    const FileStructure* structure = nullptr;
    const MethodDecl* method = nullptr;
};

struct CallGraph {
    std::vector<MethodRef> methods;
    std::vector<std::vector<int>> calls;     // caller -> callees, sorted, deduped
    std::vector<std::vector<int>> called_by; // exact mirror

    int index_of(const MethodDecl* method) const;
};

CallGraph build_call_graph(const std::vector<MethodRef>& methods);

// Breadth-first closure from `seeds` walking call edges in both directions.
// Returns sorted method indices, seeds included.
std::vector<int> relevant_closure(const CallGraph& graph, const std::vector<int>& seeds);

} // namespace patchscout
