#include "patchscout/call_graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace patchscout {

namespace {

using TK = Token::Kind;

bool text_is(const Token& t, const char* s) {
    return t.kind == TK::Punct && t.text == s;
}

const std::string& canon(const std::string& type) {
    static const std::unordered_map<std::string, std::string> boxed = {
        {"Integer", "int"},   {"Long", "long"},       {"Short", "short"},
        {"Byte", "byte"},     {"Character", "char"},  {"Boolean", "boolean"},
        {"Float", "float"},   {"Double", "double"},
    };
    auto it = boxed.find(type);
    return it == boxed.end() ? type : it->second;
}

bool is_numeric(const std::string& canon_type) {
    return canon_type == "byte" || canon_type == "short" || canon_type == "int" ||
           canon_type == "long" || canon_type == "float" || canon_type == "double";
}

// Base type of a token run: last identifier outside generic arguments.
std::string base_type(const std::vector<Token>& toks, size_t b, size_t e) {
    std::string out;
    int angle = 0;
    for (size_t i = b; i < e; ++i) {
        const Token& t = toks[i];
        if (t.kind == TK::Punct) {
            if (t.text == "<") ++angle;
            else if (t.text == ">") angle = std::max(0, angle - 1);
            continue;
        }
        if (angle == 0 && t.kind == TK::Identifier) out = t.text;
    }
    return out;
}

InvocationArg classify_literal(const Token& t) {
    InvocationArg a;
    if (t.kind == TK::String) {
        a.type = "String";
        return a;
    }
    if (t.kind == TK::CharLiteral) {
        a.type = "char";
        return a;
    }
    if (t.kind == TK::Keyword && (t.text == "true" || t.text == "false")) {
        a.type = "boolean";
        return a;
    }
    if (t.kind == TK::Number) {
        const std::string& s = t.text;
        bool hex = s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
        bool floating = false;
        char suffix = s.empty() ? 0 : s.back();
        if (!hex) {
            if (s.find('.') != std::string::npos) floating = true;
            if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) {
                floating = true;
            }
            if (suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D') {
                floating = true;
            }
        }
        if (floating) {
            a.float_literal = true;
            a.type = (suffix == 'f' || suffix == 'F') ? "float" : "double";
        } else {
            a.int_literal = true;
            a.type = "int";
        }
        return a;
    }
    return a; // unknown
}

// Names declared with an explicit type in the method: parameters plus local
// declarations anywhere in the body (flow-insensitive, first declaration
// wins when a name reappears).
std::unordered_map<std::string, std::string> local_types(const SyntaxTree& tree,
                                                         const MethodDecl& method) {
    std::unordered_map<std::string, std::string> env;
    for (size_t i = 0; i < method.parameter_names.size() &&
                       i < method.parameter_types.size();
         ++i) {
        if (!method.parameter_types[i].empty()) {
            env.emplace(method.parameter_names[i], method.parameter_types[i]);
        }
    }
    if (!method.body) return env;
    const auto& toks = tree.tokens();
    size_t b = method.body->token_begin;
    size_t e = std::min(method.body->token_end, toks.size());
    size_t stmt_start = b;
    for (size_t i = b; i < e; ++i) {
        const Token& t = toks[i];
        if (t.kind == TK::Punct && (t.text == ";" || t.text == "{" || t.text == "}")) {
            stmt_start = i + 1;
            continue;
        }
        if (t.kind != TK::Identifier) continue;
        const Token* prev = i > b ? &toks[i - 1] : nullptr;
        const Token* next = i + 1 < e ? &toks[i + 1] : nullptr;
        if (!prev || !next) continue;
        bool decl_prev = prev->kind == TK::Identifier || text_is(*prev, ">") ||
                         text_is(*prev, "]");
        if (!decl_prev) continue;
        // Type name = ...   |   Type name ;   |   for (Type name : ...)
        if (text_is(*next, "=") || text_is(*next, ";") || text_is(*next, ":")) {
            std::string ty = base_type(toks, stmt_start, i);
            if (!ty.empty()) env.emplace(t.text, ty);
        }
    }
    return env;
}

} // namespace

std::vector<Invocation> extract_invocations(const SyntaxTree& tree,
                                            const MethodDecl& method) {
    std::vector<Invocation> out;
    if (!method.body) return out;
    const auto& toks = tree.tokens();
    size_t b = method.body->token_begin;
    size_t e = std::min(method.body->token_end, toks.size());
    auto env = local_types(tree, method);

    for (size_t i = b; i < e; ++i) {
        if (toks[i].kind != TK::Identifier) continue;
        if (i + 1 >= e || !text_is(toks[i + 1], "(")) continue;
        // `new T(...)` names the constructor T; `new T[...]` is not a call
        // and falls out naturally since '[' follows, not '('.
        Invocation inv;
        inv.name = toks[i].text;
        inv.line = toks[i].line;

        // argument ranges: split the balanced parens on top-level commas
        size_t open = i + 1;
        int depth = 0;
        size_t close = open;
        std::vector<std::pair<size_t, size_t>> ranges;
        size_t seg = open + 1;
        for (size_t p = open; p < e; ++p) {
            const Token& t = toks[p];
            if (text_is(t, "(") || text_is(t, "[") || text_is(t, "{")) {
                ++depth;
                continue;
            }
            if (text_is(t, ")") || text_is(t, "]") || text_is(t, "}")) {
                --depth;
                if (depth == 0 && text_is(t, ")")) {
                    close = p;
                    break;
                }
                continue;
            }
            if (depth == 1 && text_is(t, ",")) {
                ranges.emplace_back(seg, p);
                seg = p + 1;
            }
        }
        if (close > open + 1 || !ranges.empty()) ranges.emplace_back(seg, close);

        for (auto [rb, re] : ranges) {
            InvocationArg arg;
            if (re > rb) {
                size_t n = re - rb;
                const Token& first = toks[rb];
                if (n == 1) {
                    if (first.kind == TK::Identifier) {
                        auto it = env.find(first.text);
                        if (it != env.end()) arg.type = it->second;
                    } else {
                        arg = classify_literal(first);
                    }
                } else if (first.kind == TK::Keyword && first.text == "new" &&
                           rb + 1 < re) {
                    arg.type = base_type(toks, rb + 1, re);
                    // only a plain construction, not new T(...).something
                    int d = 0;
                    bool plain = true;
                    for (size_t p = rb + 1; p < re; ++p) {
                        if (text_is(toks[p], "(")) ++d;
                        else if (text_is(toks[p], ")")) {
                            --d;
                            if (d == 0 && p + 1 < re) plain = false;
                        } else if (d == 0 && text_is(toks[p], ".")) {
                            plain = false;
                        }
                    }
                    if (!plain) arg.type.clear();
                }
                // multi-token expressions stay unknown
            }
            inv.args.push_back(std::move(arg));
        }
        out.push_back(std::move(inv));
    }
    return out;
}

bool invocation_matches(const Invocation& inv, const MethodDecl& callee) {
    if (inv.name != callee.name) return false;
    if (static_cast<int>(inv.args.size()) != callee.parameter_count) return false;
    for (size_t i = 0; i < inv.args.size(); ++i) {
        const InvocationArg& a = inv.args[i];
        const std::string p = canon(callee.parameter_types[i]);
        if (p.empty()) continue;
        if (a.int_literal) {
            if (!is_numeric(p)) return false;
            continue;
        }
        if (a.float_literal) {
            if (p != "float" && p != "double") return false;
            continue;
        }
        if (a.type.empty()) continue;
        if (canon(a.type) != p) return false;
    }
    return true;
}

int CallGraph::index_of(const MethodDecl* method) const {
    for (size_t i = 0; i < methods.size(); ++i) {
        if (methods[i].method == method) return static_cast<int>(i);
    }
    return -1;
}

CallGraph build_call_graph(const std::vector<MethodRef>& methods) {
    CallGraph g;
    g.methods = methods;
    size_t n = methods.size();
    g.calls.assign(n, {});
    g.called_by.assign(n, {});

    // candidate callees grouped by name
    std::unordered_map<std::string, std::vector<int>> by_name;
    for (size_t i = 0; i < n; ++i) {
        by_name[methods[i].method->name].push_back(static_cast<int>(i));
    }

    for (size_t caller = 0; caller < n; ++caller) {
        const MethodRef& ref = methods[caller];
        std::unordered_set<int> targets;
        for (const Invocation& inv : extract_invocations(*ref.tree, *ref.method)) {
            auto it = by_name.find(inv.name);
            if (it == by_name.end()) continue;
            for (int callee : it->second) {
                if (invocation_matches(inv, *methods[callee].method)) {
                    targets.insert(callee);
                }
            }
        }
        g.calls[caller].assign(targets.begin(), targets.end());
        std::sort(g.calls[caller].begin(), g.calls[caller].end());
        for (int callee : g.calls[caller]) {
            g.called_by[callee].push_back(static_cast<int>(caller));
        }
    }
    for (auto& v : g.called_by) std::sort(v.begin(), v.end());
    return g;
}

std::vector<int> relevant_closure(const CallGraph& graph, const std::vector<int>& seeds) {
    std::vector<char> seen(graph.methods.size(), 0);
    std::deque<int> frontier;
    for (int s : seeds) {
        if (s >= 0 && s < static_cast<int>(seen.size()) && !seen[s]) {
            seen[s] = 1;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        for (const auto* adj : {&graph.calls[v], &graph.called_by[v]}) {
            for (int w : *adj) {
                if (!seen[w]) {
                    seen[w] = 1;
                    frontier.push_back(w);
                }
            }
        }
    }
    std::vector<int> out;
    for (size_t i = 0; i < seen.size(); ++i) {
        if (seen[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

} // namespace patchscout
