#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace patchscout {

// Structural model of Java-like source. The parser recognizes the subset
// the pipeline needs (declarations, block structure, statement boundaries,
// line spans, nesting depth) and degrades anything else to opaque statement
// nodes. It never rejects input: arbitrary bytes produce a tree whose root
// spans the whole file.

enum class NodeKind {
    CompilationUnit,
    Import,
    TypeDecl,
    FieldDecl,
    MethodDecl,
    Block,
    If,
    Loop,
    Try,
    Catch,
    Statement,
    Comment,
    Annotation,
};

std::string_view to_string(NodeKind kind);

struct Token {
    enum class Kind : unsigned char {
        Identifier,
        Keyword,
        Number,
        String,
        CharLiteral,
        Punct,
        LineComment,
        BlockComment,
        DocComment,
    };
    Kind kind;
    std::string text;
    int line = 1;     // 1-based line of the first character
    int end_line = 1; // last line (multi-line block comments)
};

struct SyntaxNode {
    NodeKind kind = NodeKind::Statement;
    int start_line = 1;
    int end_line = 1;
    // For if/loop/try: last line of the header part (condition/keyword),
    // i.e. the line on which the first sub-block or branch begins. Equal to
    // start_line for everything else.
    int header_end_line = 1;
    int depth = 0; // root is 0
    const SyntaxNode* parent = nullptr;
    std::vector<std::unique_ptr<SyntaxNode>> children;
    // Half-open token slice backing this node, for def/use analysis.
    size_t token_begin = 0;
    size_t token_end = 0;
};

// Sentinel depth for lines where no node starts (blank lines, closing
// braces, the interior of block comments) and for out-of-range lines.
constexpr int kInfiniteDepth = std::numeric_limits<int>::max();

class SyntaxTree {
public:
    SyntaxTree() = default;
    SyntaxTree(SyntaxTree&&) = default;
    SyntaxTree& operator=(SyntaxTree&&) = default;

    const SyntaxNode& root() const { return *root_; }
    const std::vector<Token>& tokens() const { return tokens_; }
    const std::vector<std::string>& lines() const { return lines_; }
    int line_count() const { return static_cast<int>(lines_.size()); }

    // Minimum depth over the nodes whose span starts at `line`; the
    // file-spanning root does not participate. kInfiniteDepth when nothing
    // starts there or the line is outside the file.
    int min_depth_at(int line) const;

private:
    friend SyntaxTree parse_source(std::string_view source);
    std::unique_ptr<SyntaxNode> root_;
    std::vector<Token> tokens_;
    std::vector<std::string> lines_;
    std::vector<int> line_min_depth_; // index 0 => line 1
};

// Parses `source`. Total: any byte sequence yields a tree.
SyntaxTree parse_source(std::string_view source);

// --- declarations collected from a tree ------------------------------------

struct ImportDecl {
    std::string text;        // the raw import line content
    std::string qualified;   // dotted path as written, without 'import'/';'
    std::string simple_name; // last path segment; "*" for wildcard imports
    const SyntaxNode* node = nullptr;
};

struct FieldDecl {
    std::vector<std::string> names; // one declaration can introduce several
    const SyntaxNode* node = nullptr;
    const SyntaxNode* owner = nullptr; // enclosing type_decl
};

struct MethodDecl {
    std::string name;
    int parameter_count = 0;
    // Declared parameter base types ("" where undetermined). Generic
    // arguments and array brackets are stripped: Set<String> -> Set.
    std::vector<std::string> parameter_types;
    std::vector<std::string> parameter_names;
    std::string signature_text;  // one line: modifiers..return type..params..throws
    std::string annotation_text; // leading doc comment content, "" if none
    const SyntaxNode* decl = nullptr;
    const SyntaxNode* body = nullptr;  // block node; empty block for body-less methods
    const SyntaxNode* owner = nullptr; // enclosing type_decl (null for orphans)
};

struct FileStructure {
    std::vector<ImportDecl> imports;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
};

FileStructure collect_structure(const SyntaxTree& tree);

// Fields visible from a method body: those of the enclosing type chain.
std::vector<const FieldDecl*> visible_fields(const FileStructure& structure,
                                             const MethodDecl& method);

// Body-less rendering of a relevant-but-unchanged method: the first line of
// its doc comment (when present) plus the one-line signature and "{}".
std::string method_stub(const MethodDecl& method);

// First content line of a doc comment, stripped of comment markers.
std::string doc_first_line(const std::string& doc_text);

// File filter: only .java files outside test trees go through the pipeline.
// Out of scope: other extensions, any path segment equal to "test"/"tests",
// file names Test*.*, *Test.*, *Tests.*.
bool in_scope_file(const std::string& path);

enum class FileScope { InScope, OutOfScope };
FileScope classify_file(const std::string& path, std::string_view source);

} // namespace patchscout
