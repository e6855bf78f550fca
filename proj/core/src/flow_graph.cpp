#include "patchscout/flow_graph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace patchscout {

namespace {

using TK = Token::Kind;

bool text_is(const Token& t, const char* s) {
    return t.kind == TK::Punct && t.text == s;
}

bool is_compound_assign(const Token& t) {
    if (t.kind != TK::Punct) return false;
    const std::string& s = t.text;
    return s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" ||
           s == "&=" || s == "|=" || s == "^=";
}

bool is_incdec(const Token& t) {
    return t.kind == TK::Punct && (t.text == "++" || t.text == "--");
}

} // namespace

DefUse extract_def_use(const std::vector<Token>& tokens, const SyntaxNode& node) {
    DefUse out;
    size_t b = node.token_begin;
    size_t e = std::min(node.token_end, tokens.size());
    if (b >= e) return out;

    // label statements introduce no names
    if (e - b == 2 && tokens[b].kind == TK::Identifier && text_is(tokens[b + 1], ":")) {
        return out;
    }

    auto prev_tok = [&](size_t i) -> const Token* {
        return i > b ? &tokens[i - 1] : nullptr;
    };
    auto next_tok = [&](size_t i) -> const Token* {
        return i + 1 < e ? &tokens[i + 1] : nullptr;
    };

    std::unordered_set<size_t> plain_def_idx;   // excluded from uses
    std::unordered_set<size_t> reading_def_idx; // compound/incdec: also read
    size_t type_prefix_end = b; // identifiers before this index are type names

    bool has_assign = false;
    for (size_t i = b; i < e; ++i) {
        if (text_is(tokens[i], "=")) has_assign = true;
    }

    for (size_t i = b; i < e; ++i) {
        const Token& t = tokens[i];
        if (t.kind != TK::Identifier) continue;
        const Token* prev = prev_tok(i);
        const Token* next = next_tok(i);
        // this.x counts as x: same-object field access
        bool this_qualified = prev && text_is(*prev, ".") && i >= b + 2 &&
                              tokens[i - 2].kind == TK::Keyword &&
                              tokens[i - 2].text == "this";
        if (prev && (text_is(*prev, ".") || text_is(*prev, "::")) && !this_qualified) {
            continue;
        }

        if (next && text_is(*next, "=")) {
            out.defs.push_back(t.text);
            plain_def_idx.insert(i);
            // declaration form: a type token directly precedes the name
            if (prev && (prev->kind == TK::Identifier || text_is(*prev, ">") ||
                         text_is(*prev, "]"))) {
                type_prefix_end = std::max(type_prefix_end, i);
            }
            continue;
        }
        if (next && is_compound_assign(*next)) {
            out.defs.push_back(t.text);
            reading_def_idx.insert(i);
            continue;
        }
        if ((next && is_incdec(*next)) || (prev && is_incdec(*prev))) {
            out.defs.push_back(t.text);
            reading_def_idx.insert(i);
            continue;
        }
        // enhanced-for binding: for (Type x : collection)
        if (node.kind == NodeKind::Loop && next && text_is(*next, ":") && prev &&
            (prev->kind == TK::Identifier || text_is(*prev, ">") || text_is(*prev, "]"))) {
            out.defs.push_back(t.text);
            plain_def_idx.insert(i);
            type_prefix_end = std::max(type_prefix_end, i);
            continue;
        }
    }

    // declaration without initializer: ... Type name ;
    if (!has_assign && e - b >= 3 && text_is(tokens[e - 1], ";") &&
        tokens[e - 2].kind == TK::Identifier) {
        const Token& before = tokens[e - 3];
        if (before.kind == TK::Identifier || text_is(before, ">") || text_is(before, "]")) {
            out.defs.push_back(tokens[e - 2].text);
            plain_def_idx.insert(e - 2);
            type_prefix_end = std::max(type_prefix_end, e - 2);
        }
    }

    for (size_t i = b; i < e; ++i) {
        const Token& t = tokens[i];
        if (t.kind != TK::Identifier) continue;
        if (i < type_prefix_end) continue;
        if (plain_def_idx.count(i)) continue;
        const Token* prev = prev_tok(i);
        const Token* next = next_tok(i);
        bool this_qualified = prev && text_is(*prev, ".") && i >= b + 2 &&
                              tokens[i - 2].kind == TK::Keyword &&
                              tokens[i - 2].text == "this";
        if (prev && (text_is(*prev, ".") || text_is(*prev, "::")) && !this_qualified) {
            continue;
        }
        if (prev && prev->kind == TK::Keyword && prev->text == "new") continue;
        if (next && text_is(*next, "(")) continue; // call name
        out.uses.push_back(t.text);
    }

    // dedupe, keep first-occurrence order
    auto dedupe = [](std::vector<std::string>& v) {
        std::unordered_set<std::string> seen;
        std::vector<std::string> kept;
        for (auto& s : v) {
            if (seen.insert(s).second) kept.push_back(std::move(s));
        }
        v = std::move(kept);
    };
    dedupe(out.defs);
    dedupe(out.uses);
    return out;
}

int FlowGraph::index_of(const SyntaxNode* node) const {
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].node == node) return static_cast<int>(i);
    }
    return -1;
}

namespace {

bool is_construct(NodeKind k) {
    return k == NodeKind::If || k == NodeKind::Loop || k == NodeKind::Try;
}

bool is_statement_kind(NodeKind k) {
    return k == NodeKind::Statement || is_construct(k) || k == NodeKind::TypeDecl ||
           k == NodeKind::MethodDecl;
}

// Collects statement vertices in source order. `parent` is the vertex index
// of the construct whose sub-block we are in, -1 at method body level. Bare
// nested blocks and catch clauses are transparent; a braceless branch is a
// direct statement child of its construct.
void visit_child(const SyntaxNode& c, int parent, const std::vector<Token>& tokens,
                 std::vector<FlowVertex>& out);

void collect_statements(const SyntaxNode& container, int parent,
                        const std::vector<Token>& tokens,
                        std::vector<FlowVertex>& out) {
    for (const auto& c : container.children) {
        visit_child(*c, parent, tokens, out);
    }
}

void visit_child(const SyntaxNode& c, int parent, const std::vector<Token>& tokens,
                 std::vector<FlowVertex>& out) {
    if (c.kind == NodeKind::Comment || c.kind == NodeKind::Annotation) return;
    if (c.kind == NodeKind::Block || c.kind == NodeKind::Catch) {
        collect_statements(c, parent, tokens, out);
        return;
    }
    if (!is_statement_kind(c.kind)) return;

    FlowVertex v;
    v.node = &c;
    v.control_parent = parent;
    DefUse du = extract_def_use(tokens, c);
    v.defs = std::move(du.defs);
    v.uses = std::move(du.uses);
    int self = static_cast<int>(out.size());
    out.push_back(std::move(v));

    if (is_construct(c.kind)) {
        for (const auto& sub : c.children) {
            visit_child(*sub, self, tokens, out);
        }
    }
}

} // namespace

FlowGraph build_flow_graph(const SyntaxTree& tree, const FileStructure& structure,
                           const MethodDecl& method) {
    FlowGraph g;
    const std::vector<Token>& toks = tree.tokens();

    if (method.body) {
        collect_statements(*method.body, -1, toks, g.vertices);
    }
    for (const FieldDecl* f : visible_fields(structure, method)) {
        FlowVertex v;
        v.node = f->node;
        v.is_field = true;
        DefUse du = extract_def_use(toks, *f->node);
        v.defs = du.defs;
        for (const std::string& name : f->names) {
            if (std::find(v.defs.begin(), v.defs.end(), name) == v.defs.end()) {
                v.defs.push_back(name);
            }
        }
        v.uses = std::move(du.uses);
        g.vertices.push_back(std::move(v));
    }

    size_t n = g.vertices.size();
    g.forward.assign(n, {});
    g.reverse.assign(n, {});

    std::unordered_map<std::string, std::vector<int>> defs_of;
    for (size_t i = 0; i < n; ++i) {
        for (const std::string& d : g.vertices[i].defs) {
            defs_of[d].push_back(static_cast<int>(i));
        }
    }

    std::vector<std::unordered_set<int>> targets(n);
    for (size_t w = 0; w < n; ++w) {
        for (const std::string& name : g.vertices[w].uses) {
            auto it = defs_of.find(name);
            if (it == defs_of.end()) continue;
            for (int v : it->second) {
                if (v != static_cast<int>(w)) targets[v].insert(static_cast<int>(w));
            }
        }
        int p = g.vertices[w].control_parent;
        if (p >= 0) targets[p].insert(static_cast<int>(w));
    }
    for (size_t v = 0; v < n; ++v) {
        g.forward[v].assign(targets[v].begin(), targets[v].end());
        std::sort(g.forward[v].begin(), g.forward[v].end());
        for (int w : g.forward[v]) {
            g.reverse[w].push_back(static_cast<int>(v));
        }
    }
    for (auto& r : g.reverse) std::sort(r.begin(), r.end());
    return g;
}

} // namespace patchscout
