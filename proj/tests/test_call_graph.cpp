#include "patchscout/call_graph.hpp"

#include "doctest.h"

using namespace patchscout;

namespace {

struct Parsed {
    SyntaxTree tree;
    FileStructure structure;
};

Parsed parse(const std::string& src) {
    Parsed p;
    p.tree = parse_source(src);
    p.structure = collect_structure(p.tree);
    return p;
}

const MethodDecl* method_named(const FileStructure& s, const std::string& name) {
    for (const auto& m : s.methods) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

const Invocation* find_call(const std::vector<Invocation>& invs, const std::string& name) {
    for (const auto& i : invs) {
        if (i.name == name) return &i;
    }
    return nullptr;
}

} // namespace

TEST_CASE("invocations carry argument types where determinable") {
    Parsed p = parse(
        "class C {\n"
        "  void caller(Request request) {\n"
        "    plain();\n"
        "    helper.qualified(request);\n"
        "    literals(1, 2.5, \"s\", 'c', true);\n"
        "    ctor(new Registry());\n"
        "    String name = request.name();\n"
        "    local(name);\n"
        "    opaque(a + b, compute());\n"
        "  }\n"
        "}\n");
    const MethodDecl* caller = method_named(p.structure, "caller");
    REQUIRE(caller != nullptr);
    auto invs = extract_invocations(p.tree, *caller);

    const Invocation* plain = find_call(invs, "plain");
    REQUIRE(plain != nullptr);
    CHECK(plain->args.empty());

    const Invocation* qualified = find_call(invs, "qualified");
    REQUIRE(qualified != nullptr);
    REQUIRE(qualified->args.size() == 1);
    CHECK(qualified->args[0].type == "Request"); // parameter type is known

    const Invocation* literals = find_call(invs, "literals");
    REQUIRE(literals != nullptr);
    REQUIRE(literals->args.size() == 5);
    CHECK(literals->args[0].int_literal);
    CHECK(literals->args[0].type == "int");
    CHECK(literals->args[1].float_literal);
    CHECK(literals->args[1].type == "double");
    CHECK(literals->args[2].type == "String");
    CHECK(literals->args[3].type == "char");
    CHECK(literals->args[4].type == "boolean");

    const Invocation* ctor = find_call(invs, "ctor");
    REQUIRE(ctor != nullptr);
    REQUIRE(ctor->args.size() == 1);
    CHECK(ctor->args[0].type == "Registry");

    const Invocation* local = find_call(invs, "local");
    REQUIRE(local != nullptr);
    REQUIRE(local->args.size() == 1);
    CHECK(local->args[0].type == "String");

    const Invocation* opaque = find_call(invs, "opaque");
    REQUIRE(opaque != nullptr);
    REQUIRE(opaque->args.size() == 2);
    CHECK(opaque->args[0].type.empty());
    CHECK(opaque->args[1].type.empty());

    // constructor invocation of Registry is recorded under its class name
    CHECK(find_call(invs, "Registry") != nullptr);
}

TEST_CASE("matching respects name, arity and determinable types") {
    Parsed p = parse(
        "class T {\n"
        "  void sink(String s) {}\n"
        "  void sink(int n) {}\n"
        "  void sink(Integer n, long l) {}\n"
        "  void other(double d) {}\n"
        "  void generic(Object o) {}\n"
        "}\n");
    const MethodDecl* str = &p.structure.methods[0];
    const MethodDecl* prim = &p.structure.methods[1];
    const MethodDecl* boxed = &p.structure.methods[2];
    const MethodDecl* dbl = &p.structure.methods[3];
    const MethodDecl* obj = &p.structure.methods[4];

    Invocation call;
    call.name = "sink";
    call.args.push_back({"String", false, false});
    CHECK(invocation_matches(call, *str));
    CHECK_FALSE(invocation_matches(call, *prim));
    CHECK_FALSE(invocation_matches(call, *boxed)); // arity

    Invocation unknown;
    unknown.name = "sink";
    unknown.args.push_back({});
    CHECK(invocation_matches(unknown, *str));
    CHECK(invocation_matches(unknown, *prim));

    Invocation int_lit;
    int_lit.name = "sink";
    int_lit.args.push_back({"int", true, false});
    CHECK(invocation_matches(int_lit, *prim));
    CHECK_FALSE(invocation_matches(int_lit, *str));

    Invocation two;
    two.name = "sink";
    two.args.push_back({"int", false, false});  // int local vs Integer param: boxed
    two.args.push_back({"int", true, false});   // int literal vs long param: numeric
    CHECK(invocation_matches(two, *boxed));

    Invocation flt;
    flt.name = "other";
    flt.args.push_back({"double", false, true});
    CHECK(invocation_matches(flt, *dbl));
    flt.name = "sink";
    CHECK_FALSE(invocation_matches(flt, *prim)); // float literal is not an int

    Invocation wrong_name;
    wrong_name.name = "missing";
    CHECK_FALSE(invocation_matches(wrong_name, *str));

    Invocation typed_vs_object;
    typed_vs_object.name = "generic";
    typed_vs_object.args.push_back({"Request", false, false});
    // declared Object does not equal Request: by-name typing has no
    // subtype knowledge, so this stays a non-match
    CHECK_FALSE(invocation_matches(typed_vs_object, *obj));
}

TEST_CASE("call graph connects callers to matching callees across files") {
    Parsed view = parse(
        "class View {\n"
        "  void bind(Object model) {\n"
        "    addBindings(model);\n"
        "  }\n"
        "  void addBindings(Object model) {\n"
        "    addMapping();\n"
        "    addEmptyValueMapping();\n"
        "  }\n"
        "}\n");
    Parsed helper = parse(
        "class Helper {\n"
        "  void addMapping() {}\n"
        "  void addEmptyValueMapping() {}\n"
        "  void unrelated() {}\n"
        "}\n");

    std::vector<MethodRef> refs;
    for (const auto& m : view.structure.methods) {
        refs.push_back({&view.tree, &view.structure, &m});
    }
    for (const auto& m : helper.structure.methods) {
        refs.push_back({&helper.tree, &helper.structure, &m});
    }
    CallGraph g = build_call_graph(refs);

    int bind = g.index_of(method_named(view.structure, "bind"));
    int add = g.index_of(method_named(view.structure, "addBindings"));
    int mapping = g.index_of(method_named(helper.structure, "addMapping"));
    int empty = g.index_of(method_named(helper.structure, "addEmptyValueMapping"));
    int unrelated = g.index_of(method_named(helper.structure, "unrelated"));
    REQUIRE(bind >= 0);
    REQUIRE(add >= 0);

    CHECK(g.calls[bind] == std::vector<int>{add});
    CHECK(g.calls[add] == std::vector<int>{mapping, empty});
    CHECK(g.called_by[add] == std::vector<int>{bind});
    CHECK(g.calls[unrelated].empty());
    CHECK(g.called_by[unrelated].empty());

    SUBCASE("closure walks both directions from the changed set") {
        auto closure = relevant_closure(g, {add});
        CHECK(closure == std::vector<int>{bind, add, mapping, empty});
    }
    SUBCASE("closure from a leaf climbs to callers and back down") {
        auto closure = relevant_closure(g, {mapping});
        // mapping -> addBindings (caller) -> bind, addEmptyValueMapping
        CHECK(closure == std::vector<int>{bind, add, mapping, empty});
    }
    SUBCASE("isolated methods stay out") {
        auto closure = relevant_closure(g, {bind});
        CHECK(std::find(closure.begin(), closure.end(), unrelated) == closure.end());
    }
    SUBCASE("empty seed set yields empty closure") {
        CHECK(relevant_closure(g, {}).empty());
    }
}

TEST_CASE("overloads are disambiguated by literal argument types") {
    Parsed p = parse(
        "class C {\n"
        "  void go() {\n"
        "    format(\"x\");\n"
        "  }\n"
        "  void format(String s) {}\n"
        "  void format(int n) {}\n"
        "}\n");
    std::vector<MethodRef> refs;
    for (const auto& m : p.structure.methods) {
        refs.push_back({&p.tree, &p.structure, &m});
    }
    CallGraph g = build_call_graph(refs);
    int go = g.index_of(method_named(p.structure, "go"));
    REQUIRE(go >= 0);
    REQUIRE(g.calls[go].size() == 1);
    CHECK(p.structure.methods[g.calls[go][0]].parameter_types ==
          std::vector<std::string>{"String"});
}

TEST_CASE("recursion produces a self edge and a stable closure") {
    Parsed p = parse(
        "class C {\n"
        "  int fib(int n) {\n"
        "    if (n < 2) return n;\n"
        "    return fib(n - 1) + fib(n - 2);\n"
        "  }\n"
        "}\n");
    std::vector<MethodRef> refs{{&p.tree, &p.structure, &p.structure.methods[0]}};
    CallGraph g = build_call_graph(refs);
    CHECK(g.calls[0] == std::vector<int>{0});
    CHECK(relevant_closure(g, {0}) == std::vector<int>{0});
}
