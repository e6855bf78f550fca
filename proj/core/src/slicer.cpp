#include "patchscout/slicer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace patchscout {

namespace {

std::vector<int> bfs(const std::vector<std::vector<int>>& adj,
                     const std::vector<int>& seeds, std::vector<char>& seen) {
    std::deque<int> frontier;
    std::vector<int> reached;
    for (int s : seeds) {
        if (s >= 0 && s < static_cast<int>(adj.size()) && !seen[s]) {
            seen[s] = 1;
            frontier.push_back(s);
            reached.push_back(s);
        }
    }
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                frontier.push_back(w);
                reached.push_back(w);
            }
        }
    }
    return reached;
}

} // namespace

std::vector<int> slice_from_seeds(const std::vector<std::vector<int>>& forward,
                                  const std::vector<std::vector<int>>& reverse,
                                  const std::vector<int>& seeds) {
    std::vector<char> fwd_seen(forward.size(), 0), rev_seen(reverse.size(), 0);
    bfs(forward, seeds, fwd_seen);
    bfs(reverse, seeds, rev_seen);
    std::vector<int> out;
    for (size_t i = 0; i < forward.size(); ++i) {
        if (fwd_seen[i] || rev_seen[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> bi_bfs_slice(const FlowGraph& graph, const std::vector<int>& seeds) {
    return slice_from_seeds(graph.forward, graph.reverse, seeds);
}

EffectiveSpan effective_span(const SyntaxNode& node) {
    EffectiveSpan s;
    s.first = node.start_line;
    bool construct = node.kind == NodeKind::If || node.kind == NodeKind::Loop ||
                     node.kind == NodeKind::Try;
    s.last = construct ? node.header_end_line : node.end_line;
    return s;
}

std::vector<int> changed_vertices(const FlowGraph& graph,
                                  const std::set<int>& changed_lines) {
    std::vector<int> out;
    for (size_t i = 0; i < graph.vertices.size(); ++i) {
        EffectiveSpan span = effective_span(*graph.vertices[i].node);
        auto it = changed_lines.lower_bound(span.first);
        if (it != changed_lines.end() && *it <= span.last) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

namespace {

class Reducer {
public:
    Reducer(const ReductionRequest& req, const RetentionHints& hints)
        : req_(req), hints_(hints), tree_(*req.tree), structure_(*req.structure) {}

    ReducedFile run() {
        mark_changed_line_context();
        process_methods();
        keep_changed_fields();
        keep_package();
        keep_imports(); // last: needs the kept-token universe
        return assemble();
    }

private:
    void keep_line(int line) {
        if (line >= 1 && line <= tree_.line_count()) kept_.insert(line);
    }

    void keep_range(int first, int last) {
        for (int l = first; l <= last; ++l) keep_line(l);
    }

    // Structural frame of a node: what must stay for the output to remain
    // block-complete once anything inside it is kept.
    void keep_frame(const SyntaxNode& n) {
        switch (n.kind) {
            case NodeKind::TypeDecl:
            case NodeKind::MethodDecl:
                keep_range(n.start_line, n.header_end_line);
                keep_line(n.end_line);
                break;
            case NodeKind::If:
            case NodeKind::Loop:
            case NodeKind::Try:
                keep_range(n.start_line, n.header_end_line);
                keep_line(n.end_line);
                for (const auto& c : n.children) {
                    if (c->kind == NodeKind::Block) {
                        keep_line(c->start_line);
                        keep_line(c->end_line);
                    } else if (c->kind == NodeKind::Catch) {
                        keep_range(c->start_line, c->header_end_line);
                        keep_line(c->end_line);
                        for (const auto& cc : c->children) {
                            if (cc->kind == NodeKind::Block) {
                                keep_line(cc->start_line);
                                keep_line(cc->end_line);
                            }
                        }
                    }
                }
                break;
            case NodeKind::Block:
                keep_line(n.start_line);
                keep_line(n.end_line);
                break;
            default:
                break;
        }
    }

    void keep_ancestors(const SyntaxNode& n) {
        for (const SyntaxNode* a = n.parent; a && a->parent; a = a->parent) {
            keep_frame(*a);
        }
    }

    void keep_vertex(const FlowVertex& v) {
        const SyntaxNode& n = *v.node;
        bool construct = n.kind == NodeKind::If || n.kind == NodeKind::Loop ||
                         n.kind == NodeKind::Try;
        if (construct) {
            keep_frame(n);
        } else {
            keep_range(n.start_line, n.end_line);
        }
        keep_ancestors(n);
        if (v.is_field) remember_field(n);
    }

    void remember_field(const SyntaxNode& node) {
        for (const auto& f : structure_.fields) {
            if (f.node == &node) {
                for (const auto& name : f.names) kept_field_names_.insert(name);
            }
        }
    }

    bool intersects(int first, int last) const {
        auto it = req_.changed_lines.lower_bound(first);
        return it != req_.changed_lines.end() && *it <= last;
    }

    void process_methods() {
        for (const MethodDecl& m : structure_.methods) {
            bool changed = intersects(m.decl->start_line, m.decl->end_line);
            bool stub = req_.stub_methods.count(&m) > 0;
            if (changed) {
                slice_method(m);
            } else if (stub) {
                stub_method(m);
            }
            // anything else vanishes
        }
    }

    void slice_method(const MethodDecl& m) {
        keep_frame(*m.decl);
        keep_ancestors(*m.decl);
        FlowGraph g = build_flow_graph(tree_, structure_, m);
        std::vector<int> seeds = changed_vertices(g, req_.changed_lines);
        for (int v : bi_bfs_slice(g, seeds)) {
            keep_vertex(g.vertices[v]);
        }
    }

    void stub_method(const MethodDecl& m) {
        keep_ancestors(*m.decl);
        std::string indent;
        if (m.decl->start_line >= 1 && m.decl->start_line <= tree_.line_count()) {
            const std::string& src = tree_.lines()[m.decl->start_line - 1];
            size_t i = 0;
            while (i < src.size() && (src[i] == ' ' || src[i] == '\t')) ++i;
            indent = src.substr(0, i);
        }
        stubs_[m.decl->start_line].push_back(indent + method_stub(m));
        stubbed_.push_back(&m);
    }

    void keep_changed_fields() {
        for (const FieldDecl& f : structure_.fields) {
            bool forced = false;
            for (const auto& name : f.names) {
                if (hints_.field_names.count(name)) forced = true;
            }
            if (forced || intersects(f.node->start_line, f.node->end_line)) {
                keep_range(f.node->start_line, f.node->end_line);
                keep_ancestors(*f.node);
                for (const auto& name : f.names) kept_field_names_.insert(name);
            }
        }
        // fields pulled in by a slice need their lines too (keep_vertex
        // already handled lines; names are in kept_field_names_)
    }

    // Force-kept changed lines, with enough structure around them to stay
    // block-complete. Lines inside methods only matter when the method is
    // changed, and then the slice pass covers them.
    void mark_changed_line_context() {
        for (int line : req_.changed_lines) {
            if (line < 1 || line > tree_.line_count()) continue;
            keep_line(line);
            const SyntaxNode* deepest = deepest_covering(tree_.root(), line);
            if (deepest) {
                keep_ancestors(*deepest);
                keep_frame(*deepest);
            }
        }
    }

    const SyntaxNode* deepest_covering(const SyntaxNode& n, int line) const {
        for (const auto& c : n.children) {
            if (c->start_line <= line && line <= c->end_line) {
                const SyntaxNode* deeper = deepest_covering(*c, line);
                return deeper ? deeper : c.get();
            }
        }
        return nullptr;
    }

    void keep_package() {
        for (const auto& c : tree_.root().children) {
            if (c->kind != NodeKind::Statement) continue;
            if (c->token_begin < tree_.tokens().size()) {
                const Token& t = tree_.tokens()[c->token_begin];
                if (t.kind == Token::Kind::Keyword && t.text == "package") {
                    keep_range(c->start_line, c->end_line);
                }
            }
        }
    }

    void keep_imports() {
        // the name universe: identifiers on kept lines plus identifiers in
        // the signatures of stubbed methods
        std::unordered_set<std::string> used;
        for (const Token& t : tree_.tokens()) {
            if (t.kind == Token::Kind::Identifier && kept_.count(t.line)) {
                used.insert(t.text);
            }
        }
        for (const MethodDecl* m : stubbed_) {
            size_t end = m->decl->token_end;
            if (m->body && m->body->token_begin > m->decl->token_begin) {
                end = m->body->token_begin;
            }
            for (size_t i = m->decl->token_begin; i < end && i < tree_.tokens().size();
                 ++i) {
                const Token& t = tree_.tokens()[i];
                if (t.kind == Token::Kind::Identifier) used.insert(t.text);
            }
        }
        for (const ImportDecl& imp : structure_.imports) {
            bool keep = imp.simple_name == "*" || used.count(imp.simple_name) > 0 ||
                        intersects(imp.node->start_line, imp.node->end_line) ||
                        hints_.import_qualified.count(imp.qualified) > 0;
            if (keep) {
                keep_range(imp.node->start_line, imp.node->end_line);
                kept_imports_.insert(imp.qualified);
            }
        }
    }

    ReducedFile assemble() {
        ReducedFile out;
        for (int line = 1; line <= tree_.line_count(); ++line) {
            auto stub_it = stubs_.find(line);
            if (stub_it != stubs_.end()) {
                for (const std::string& s : stub_it->second) out.lines.push_back(s);
            }
            if (kept_.count(line)) {
                out.lines.push_back(tree_.lines()[line - 1]);
            }
        }
        out.kept_field_names = std::move(kept_field_names_);
        out.kept_import_qualified = std::move(kept_imports_);
        return out;
    }

    const ReductionRequest& req_;
    const RetentionHints& hints_;
    const SyntaxTree& tree_;
    const FileStructure& structure_;
    std::set<int> kept_;
    std::map<int, std::vector<std::string>> stubs_;
    std::vector<const MethodDecl*> stubbed_;
    std::set<std::string> kept_field_names_;
    std::set<std::string> kept_imports_;
};

} // namespace

ReducedFile reduce_file(const ReductionRequest& request, const RetentionHints& hints) {
    Reducer r(request, hints);
    return r.run();
}

ReducedPair reduce_pair(const ReductionRequest& before, const ReductionRequest& after) {
    RetentionHints none;
    ReducedFile b = reduce_file(before, none);
    ReducedFile a = reduce_file(after, none);

    RetentionHints merged;
    merged.field_names.insert(b.kept_field_names.begin(), b.kept_field_names.end());
    merged.field_names.insert(a.kept_field_names.begin(), a.kept_field_names.end());
    merged.import_qualified.insert(b.kept_import_qualified.begin(),
                                   b.kept_import_qualified.end());
    merged.import_qualified.insert(a.kept_import_qualified.begin(),
                                   a.kept_import_qualified.end());

    ReducedPair out;
    out.before = reduce_file(before, merged).lines;
    out.after = reduce_file(after, merged).lines;
    return out;
}

} // namespace patchscout
