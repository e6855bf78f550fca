#include "patchscout/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <functional>
#include <unordered_set>

#include "patchscout/tokenizer.hpp"

namespace patchscout {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::CompilationUnit: return "compilation_unit";
        case NodeKind::Import: return "import";
        case NodeKind::TypeDecl: return "type_decl";
        case NodeKind::FieldDecl: return "field_decl";
        case NodeKind::MethodDecl: return "method_decl";
        case NodeKind::Block: return "block";
        case NodeKind::If: return "if";
        case NodeKind::Loop: return "loop";
        case NodeKind::Try: return "try";
        case NodeKind::Catch: return "catch";
        case NodeKind::Statement: return "statement";
        case NodeKind::Comment: return "comment";
        case NodeKind::Annotation: return "annotation";
    }
    return "statement";
}

namespace {

using TK = Token::Kind;

const std::unordered_set<std::string>& keywords() {
    static const std::unordered_set<std::string> kw = {
        "package", "import", "class", "interface", "enum",
        "if", "else", "for", "while", "do", "try", "catch", "finally",
        "switch", "case", "default", "return", "throw", "throws", "break",
        "continue", "new", "static", "final", "public", "private",
        "protected", "abstract", "synchronized", "volatile", "transient",
        "native", "strictfp", "assert", "instanceof", "this", "super",
        "extends", "implements", "null", "true", "false", "yield",
    };
    return kw;
}

bool is_modifier(const Token& t) {
    static const std::unordered_set<std::string> mods = {
        "public", "private", "protected", "static", "final", "abstract",
        "synchronized", "volatile", "transient", "native", "strictfp",
        "default",
    };
    return t.kind == TK::Keyword && mods.count(t.text) > 0;
}

bool is_type_keyword(const Token& t) {
    return t.kind == TK::Keyword &&
           (t.text == "class" || t.text == "interface" || t.text == "enum");
}

bool is_comment(const Token& t) {
    return t.kind == TK::LineComment || t.kind == TK::BlockComment ||
           t.kind == TK::DocComment;
}

bool is_punct(const Token& t, const char* s) {
    return t.kind == TK::Punct && t.text == s;
}

// ---------------------------------------------------------------------------
// Lexer

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            if (c == '/' && pos_ + 1 < src_.size()) {
                if (src_[pos_ + 1] == '/') {
                    out.push_back(line_comment());
                    continue;
                }
                if (src_[pos_ + 1] == '*') {
                    out.push_back(block_comment());
                    continue;
                }
            }
            if (c == '"') {
                out.push_back(string_literal());
                continue;
            }
            if (c == '\'') {
                out.push_back(char_literal());
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(number());
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
                out.push_back(word());
                continue;
            }
            out.push_back(punct());
        }
        return out;
    }

private:
    Token make(TK kind, size_t begin, int start_line) {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(begin, pos_ - begin));
        t.line = start_line;
        t.end_line = line_;
        return t;
    }

    Token line_comment() {
        size_t begin = pos_;
        int start = line_;
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        return make(TK::LineComment, begin, start);
    }

    Token block_comment() {
        size_t begin = pos_;
        int start = line_;
        bool doc = pos_ + 2 < src_.size() && src_[pos_ + 2] == '*' &&
                   !(pos_ + 3 < src_.size() && src_[pos_ + 3] == '/');
        pos_ += 2;
        while (pos_ < src_.size()) {
            if (src_[pos_] == '\n') ++line_;
            if (src_[pos_] == '*' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                pos_ += 2;
                break;
            }
            ++pos_;
        }
        return make(doc ? TK::DocComment : TK::BlockComment, begin, start);
    }

    Token string_literal() {
        size_t begin = pos_;
        int start = line_;
        ++pos_; // opening quote
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
            ++pos_;
        }
        if (pos_ < src_.size() && src_[pos_] == '"') ++pos_; // unterminated: stop at EOL
        return make(TK::String, begin, start);
    }

    Token char_literal() {
        size_t begin = pos_;
        int start = line_;
        ++pos_;
        while (pos_ < src_.size() && src_[pos_] != '\'' && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
            ++pos_;
        }
        if (pos_ < src_.size() && src_[pos_] == '\'') ++pos_;
        return make(TK::CharLiteral, begin, start);
    }

    Token number() {
        size_t begin = pos_;
        int start = line_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        // fractional part / exponent
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            ++pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
        }
        return make(TK::Number, begin, start);
    }

    Token word() {
        size_t begin = pos_;
        int start = line_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '$')) {
            ++pos_;
        }
        std::string text(src_.substr(begin, pos_ - begin));
        // Primitive type names stay identifiers so type positions parse
        // uniformly; structural keywords get their own kind.
        TK kind = keywords().count(text) ? TK::Keyword : TK::Identifier;
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = start;
        t.end_line = line_;
        return t;
    }

    Token punct() {
        static const std::array<const char*, 19> ops = {
            "...", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
            "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "->", "::",
        };
        size_t begin = pos_;
        int start = line_;
        for (const char* op : ops) {
            size_t len = std::char_traits<char>::length(op);
            if (src_.compare(pos_, len, op) == 0) {
                pos_ += len;
                return make(TK::Punct, begin, start);
            }
        }
        ++pos_;
        return make(TK::Punct, begin, start);
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(const std::vector<Token>& toks, int line_count)
        : toks_(toks), line_count_(line_count) {}

    std::unique_ptr<SyntaxNode> run() {
        auto root = node(NodeKind::CompilationUnit, 0);
        root->start_line = 1;
        while (!eof()) {
            size_t before = pos_;
            parse_top_level(root.get());
            if (pos_ == before) ++pos_; // safety: always make progress
        }
        root->token_end = toks_.size();
        root->end_line = std::max(1, line_count_);
        return root;
    }

private:
    bool eof() const { return pos_ >= toks_.size(); }
    const Token& cur() const { return toks_[pos_]; }
    const Token* peek(size_t ahead = 1) const {
        return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
    }

    std::unique_ptr<SyntaxNode> node(NodeKind kind, size_t token_begin) {
        auto n = std::make_unique<SyntaxNode>();
        n->kind = kind;
        n->token_begin = token_begin;
        if (token_begin < toks_.size()) {
            n->start_line = toks_[token_begin].line;
            n->end_line = toks_[token_begin].end_line;
        }
        n->header_end_line = n->start_line;
        return n;
    }

    void close(SyntaxNode* n) {
        n->token_end = pos_;
        if (pos_ > n->token_begin && n->token_begin < toks_.size()) {
            n->end_line = std::max(n->end_line, toks_[pos_ - 1].end_line);
        }
        if (n->header_end_line < n->start_line) n->header_end_line = n->start_line;
    }

    // Consumes tokens until one of `stops` at bracket depth zero; the
    // stopping token is consumed when `consume_stop`. Brackets of all three
    // kinds nest; a '}' that would close an enclosing scope ends the scan.
    void skip_until(const char* stops, bool consume_stop) {
        int depth = 0;
        while (!eof()) {
            const Token& t = cur();
            if (t.kind == TK::Punct) {
                const std::string& s = t.text;
                if (s == "(" || s == "[" || s == "{") ++depth;
                if (s == ")" || s == "]") depth = std::max(0, depth - 1);
                if (s == "}") {
                    if (depth == 0) return; // enclosing scope boundary
                    --depth;
                }
                if (depth <= 0 && s.size() == 1 && std::strchr(stops, s[0])) {
                    if (consume_stop) ++pos_;
                    return;
                }
            }
            ++pos_;
        }
    }

    // Consumes a balanced parenthesis group; pos_ must be at '('.
    void skip_parens() {
        int depth = 0;
        while (!eof()) {
            const Token& t = cur();
            if (is_punct(t, "(")) ++depth;
            else if (is_punct(t, ")")) {
                --depth;
                ++pos_;
                if (depth <= 0) return;
                continue;
            }
            ++pos_;
        }
    }

    std::unique_ptr<SyntaxNode> comment_node() {
        auto n = node(NodeKind::Comment, pos_);
        n->end_line = cur().end_line;
        ++pos_;
        close(n.get());
        return n;
    }

    std::unique_ptr<SyntaxNode> annotation_node() {
        auto n = node(NodeKind::Annotation, pos_);
        ++pos_; // '@'
        if (!eof() && cur().kind == TK::Identifier) {
            ++pos_;
            while (!eof() && is_punct(cur(), ".") && peek() &&
                   peek()->kind == TK::Identifier) {
                pos_ += 2;
            }
        }
        if (!eof() && is_punct(cur(), "(")) skip_parens();
        close(n.get());
        return n;
    }

    void parse_top_level(SyntaxNode* parent) {
        const Token& t = cur();
        if (is_comment(t)) {
            parent->children.push_back(comment_node());
            return;
        }
        if (is_punct(t, "@")) {
            parent->children.push_back(annotation_node());
            return;
        }
        if (t.kind == TK::Keyword && t.text == "package") {
            auto n = node(NodeKind::Statement, pos_);
            skip_until(";", true);
            close(n.get());
            parent->children.push_back(std::move(n));
            return;
        }
        if (t.kind == TK::Keyword && t.text == "import") {
            auto n = node(NodeKind::Import, pos_);
            skip_until(";", true);
            close(n.get());
            parent->children.push_back(std::move(n));
            return;
        }
        if (starts_type_decl()) {
            parent->children.push_back(parse_type_decl());
            return;
        }
        // Unrecognized top-level run: absorb until the next recognizable
        // construct so complete garbage stays one opaque node.
        auto n = node(NodeKind::Statement, pos_);
        int depth = 0;
        while (!eof()) {
            const Token& u = cur();
            if (depth == 0 && (is_comment(u) || is_punct(u, "@") || starts_type_decl() ||
                               (u.kind == TK::Keyword &&
                                (u.text == "package" || u.text == "import")))) {
                break;
            }
            if (u.kind == TK::Punct) {
                if (u.text == "(" || u.text == "[" || u.text == "{") ++depth;
                if (u.text == ")" || u.text == "]" || u.text == "}") --depth;
                if (depth < 0) depth = 0;
            }
            ++pos_;
        }
        if (pos_ == n->token_begin) ++pos_;
        close(n.get());
        parent->children.push_back(std::move(n));
    }

    // True when the cursor sits at [modifiers|annotations]* class/interface/enum.
    bool starts_type_decl() const {
        size_t p = pos_;
        while (p < toks_.size()) {
            const Token& t = toks_[p];
            if (is_type_keyword(t)) return true;
            if (is_modifier(t)) {
                ++p;
                continue;
            }
            if (is_punct(t, "@")) { // annotation glued to the declaration
                ++p;
                if (p < toks_.size() && toks_[p].kind == TK::Identifier) ++p;
                if (p < toks_.size() && is_punct(toks_[p], "(")) {
                    int d = 0;
                    while (p < toks_.size()) {
                        if (is_punct(toks_[p], "(")) ++d;
                        if (is_punct(toks_[p], ")")) {
                            --d;
                            ++p;
                            if (d <= 0) break;
                            continue;
                        }
                        ++p;
                    }
                }
                continue;
            }
            return false;
        }
        return false;
    }

    std::unique_ptr<SyntaxNode> parse_type_decl() {
        auto n = node(NodeKind::TypeDecl, pos_);
        // header: modifiers, kind keyword, name, extends/implements
        while (!eof() && !is_punct(cur(), "{") && !is_punct(cur(), ";")) {
            if (is_punct(cur(), "}")) break; // malformed header
            ++pos_;
        }
        if (!eof() && is_punct(cur(), ";")) {
            ++pos_;
            close(n.get());
            return n;
        }
        if (eof() || !is_punct(cur(), "{")) {
            close(n.get());
            return n;
        }
        n->header_end_line = cur().line;
        ++pos_; // '{'
        while (!eof() && !is_punct(cur(), "}")) {
            size_t before = pos_;
            parse_member(n.get());
            if (pos_ == before) ++pos_;
        }
        if (!eof()) ++pos_; // '}'
        close(n.get());
        return n;
    }

    void parse_member(SyntaxNode* type) {
        const Token& t = cur();
        if (is_comment(t)) {
            type->children.push_back(comment_node());
            return;
        }
        if (is_punct(t, "@")) {
            type->children.push_back(annotation_node());
            return;
        }
        if (is_punct(t, ";")) {
            auto n = node(NodeKind::Statement, pos_);
            ++pos_;
            close(n.get());
            type->children.push_back(std::move(n));
            return;
        }
        if (starts_type_decl()) {
            type->children.push_back(parse_type_decl());
            return;
        }
        // static/instance initializer block
        if (is_punct(t, "{") ||
            (t.kind == TK::Keyword && t.text == "static" && peek() && is_punct(*peek(), "{"))) {
            size_t begin = pos_;
            if (!is_punct(cur(), "{")) ++pos_;
            auto b = parse_block();
            b->token_begin = begin;
            b->start_line = toks_[begin].line;
            type->children.push_back(std::move(b));
            return;
        }

        // Decide field vs method: first structural token at bracket depth 0.
        int depth = 0, angle = 0;
        char what = 0;
        for (size_t p = pos_; p < toks_.size(); ++p) {
            const Token& u = toks_[p];
            if (u.kind != TK::Punct) continue;
            const std::string& s = u.text;
            if (depth == 0 && angle == 0 &&
                (s == "(" || s == "=" || s == ";" || s == "{")) {
                what = s[0];
                break;
            }
            if (s == "<") ++angle;
            else if (s == ">") angle = std::max(0, angle - 1);
            else if (s == "(" || s == "[" || s == "{") ++depth;
            else if (s == ")" || s == "]") --depth;
            else if (s == "}") {
                if (depth == 0) break;
                --depth;
            }
            if (depth < 0) break;
        }
        if (what == '(') {
            parse_method(type);
        } else if (what == '=' || what == ';') {
            auto n = node(NodeKind::FieldDecl, pos_);
            skip_until(";", true);
            close(n.get());
            type->children.push_back(std::move(n));
        } else {
            // '{' without '(' or nothing structural: opaque member
            auto n = node(NodeKind::Statement, pos_);
            skip_until(";", true);
            close(n.get());
            type->children.push_back(std::move(n));
        }
    }

    void parse_method(SyntaxNode* type) {
        auto n = node(NodeKind::MethodDecl, pos_);
        // header up to the parameter list
        while (!eof() && !is_punct(cur(), "(")) {
            if (is_punct(cur(), "{") || is_punct(cur(), "}") || is_punct(cur(), ";")) break;
            ++pos_;
        }
        if (!eof() && is_punct(cur(), "(")) skip_parens();
        // throws clause / default value, up to the body or ';'
        while (!eof() && !is_punct(cur(), "{") && !is_punct(cur(), ";")) {
            if (is_punct(cur(), "}")) break;
            ++pos_;
        }
        if (!eof() && is_punct(cur(), "{")) {
            n->header_end_line = cur().line;
            auto body = parse_block();
            n->children.push_back(std::move(body));
        } else if (!eof() && is_punct(cur(), ";")) {
            // body-less method: synthesize an empty body on the ';' line
            auto body = node(NodeKind::Block, pos_);
            ++pos_;
            close(body.get());
            n->header_end_line = body->start_line;
            n->children.push_back(std::move(body));
        }
        close(n.get());
        type->children.push_back(std::move(n));
    }

    std::unique_ptr<SyntaxNode> parse_block() {
        auto b = node(NodeKind::Block, pos_);
        ++pos_; // '{'
        while (!eof() && !is_punct(cur(), "}")) {
            size_t before = pos_;
            auto s = parse_statement();
            if (s) b->children.push_back(std::move(s));
            if (pos_ == before) ++pos_;
        }
        if (!eof()) ++pos_; // '}'
        close(b.get());
        return b;
    }

    std::unique_ptr<SyntaxNode> parse_statement() {
        const Token& t = cur();
        if (is_comment(t)) return comment_node();
        if (is_punct(t, "@")) return annotation_node();
        if (is_punct(t, "{")) return parse_block();
        if (is_punct(t, ";")) {
            auto n = node(NodeKind::Statement, pos_);
            ++pos_;
            close(n.get());
            return n;
        }
        if (t.kind == TK::Keyword) {
            const std::string& kw = t.text;
            if (kw == "if") return parse_if();
            if (kw == "for" || kw == "while") return parse_loop();
            if (kw == "do") return parse_do();
            if (kw == "try") return parse_try();
            if (kw == "switch" || kw == "synchronized") return parse_brace_construct();
            if (kw == "class" || kw == "interface" || kw == "enum") return parse_type_decl();
            if (kw == "return" || kw == "throw" || kw == "break" || kw == "continue" ||
                kw == "assert" || kw == "yield") {
                auto n = node(NodeKind::Statement, pos_);
                skip_until(";", true);
                close(n.get());
                return n;
            }
            if (kw == "else") { // orphaned else: absorb as opaque
                auto n = node(NodeKind::Statement, pos_);
                ++pos_;
                close(n.get());
                return n;
            }
        }
        if (starts_type_decl()) return parse_type_decl();
        // label?
        if (t.kind == TK::Identifier && peek() && is_punct(*peek(), ":")) {
            auto n = node(NodeKind::Statement, pos_);
            pos_ += 2;
            close(n.get());
            return n;
        }
        return parse_opaque_statement();
    }

    std::unique_ptr<SyntaxNode> parse_opaque_statement() {
        auto n = node(NodeKind::Statement, pos_);
        int depth = 0;
        bool closed_group = false;
        while (!eof()) {
            const Token& u = cur();
            if (u.kind == TK::Punct) {
                const std::string& s = u.text;
                if (s == "}" && depth == 0) break; // enclosing block ends
                if (s == "(" || s == "[" || s == "{") ++depth;
                if (s == ")" || s == "]") depth = std::max(0, depth - 1);
                if (s == "}") {
                    --depth;
                    if (depth == 0) closed_group = true;
                    ++pos_;
                    // A statement that just closed a brace group and
                    // continues on a new line has most likely ended
                    // (anonymous class bodies keep a trailing ';' or '.').
                    if (!eof() && closed_group && cur().line > u.end_line &&
                        !is_punct(cur(), ";") && !is_punct(cur(), ".") &&
                        !is_punct(cur(), ")")) {
                        break;
                    }
                    continue;
                }
                if (s == ";" && depth == 0) {
                    ++pos_;
                    break;
                }
            }
            ++pos_;
        }
        close(n.get());
        return n;
    }

    std::unique_ptr<SyntaxNode> parse_if() {
        auto n = node(NodeKind::If, pos_);
        ++pos_; // 'if'
        if (!eof() && is_punct(cur(), "(")) skip_parens();
        n->token_end = pos_; // header tokens only
        if (!eof()) {
            n->header_end_line = cur().line;
            auto branch = parse_statement();
            if (branch) n->children.push_back(std::move(branch));
        }
        if (!eof() && cur().kind == TK::Keyword && cur().text == "else") {
            ++pos_;
            if (!eof()) {
                auto branch = parse_statement();
                if (branch) n->children.push_back(std::move(branch));
            }
        }
        finish_construct(n.get());
        return n;
    }

    std::unique_ptr<SyntaxNode> parse_loop() {
        auto n = node(NodeKind::Loop, pos_);
        ++pos_; // 'for' / 'while'
        if (!eof() && is_punct(cur(), "(")) skip_parens();
        n->token_end = pos_;
        if (!eof() && is_punct(cur(), ";")) { // while(...); empty body
            ++pos_;
            finish_construct(n.get());
            return n;
        }
        if (!eof()) {
            n->header_end_line = cur().line;
            auto body = parse_statement();
            if (body) n->children.push_back(std::move(body));
        }
        finish_construct(n.get());
        return n;
    }

    std::unique_ptr<SyntaxNode> parse_do() {
        auto n = node(NodeKind::Loop, pos_);
        ++pos_; // 'do'
        n->token_end = pos_;
        if (!eof()) {
            n->header_end_line = cur().line;
            auto body = parse_statement();
            if (body) n->children.push_back(std::move(body));
        }
        if (!eof() && cur().kind == TK::Keyword && cur().text == "while") {
            size_t tail_begin = pos_;
            ++pos_;
            if (!eof() && is_punct(cur(), "(")) skip_parens();
            if (!eof() && is_punct(cur(), ";")) ++pos_;
            // fold the while(...) tail into the header token slice for
            // def/use purposes
            n->token_end = pos_;
            n->token_begin = std::min(n->token_begin, tail_begin);
        }
        finish_construct(n.get());
        return n;
    }

    std::unique_ptr<SyntaxNode> parse_try() {
        auto n = node(NodeKind::Try, pos_);
        ++pos_; // 'try'
        if (!eof() && is_punct(cur(), "(")) skip_parens(); // resources
        n->token_end = pos_;
        if (!eof() && is_punct(cur(), "{")) {
            n->header_end_line = cur().line;
            n->children.push_back(parse_block());
        }
        while (!eof() && cur().kind == TK::Keyword && cur().text == "catch") {
            auto c = node(NodeKind::Catch, pos_);
            ++pos_;
            if (!eof() && is_punct(cur(), "(")) skip_parens();
            c->token_end = pos_;
            if (!eof() && is_punct(cur(), "{")) {
                c->header_end_line = cur().line;
                c->children.push_back(parse_block());
            }
            finish_construct(c.get());
            n->children.push_back(std::move(c));
        }
        if (!eof() && cur().kind == TK::Keyword && cur().text == "finally") {
            ++pos_;
            if (!eof() && is_punct(cur(), "{")) n->children.push_back(parse_block());
        }
        finish_construct(n.get());
        return n;
    }

    // switch/synchronized keep statement granularity out of scope: consume
    // the construct as one opaque statement spanning its braces.
    std::unique_ptr<SyntaxNode> parse_brace_construct() {
        auto n = node(NodeKind::Statement, pos_);
        ++pos_;
        if (!eof() && is_punct(cur(), "(")) skip_parens();
        if (!eof() && is_punct(cur(), "{")) {
            int depth = 0;
            while (!eof()) {
                if (is_punct(cur(), "{")) ++depth;
                if (is_punct(cur(), "}")) {
                    --depth;
                    ++pos_;
                    if (depth <= 0) break;
                    continue;
                }
                ++pos_;
            }
        }
        close(n.get());
        return n;
    }

    // Construct nodes own header tokens only; spans extend over children.
    void finish_construct(SyntaxNode* n) {
        if (n->token_end <= n->token_begin) n->token_end = std::min(pos_, toks_.size());
        for (const auto& c : n->children) {
            n->end_line = std::max(n->end_line, c->end_line);
        }
        if (pos_ > 0 && pos_ <= toks_.size() && pos_ - 1 >= n->token_begin) {
            n->end_line = std::max(n->end_line, toks_[pos_ - 1].end_line);
        }
        if (!n->children.empty()) {
            n->header_end_line =
                std::clamp(n->children.front()->start_line, n->start_line, n->end_line);
        } else {
            n->header_end_line = n->start_line;
        }
    }

    const std::vector<Token>& toks_;
    int line_count_;
    size_t pos_ = 0;
};

void assign_depths(SyntaxNode* n, const SyntaxNode* parent, int depth) {
    n->parent = parent;
    n->depth = depth;
    for (auto& c : n->children) {
        // normalize span nesting defensively
        c->start_line = std::clamp(c->start_line, n->start_line, n->end_line);
        c->end_line = std::clamp(c->end_line, c->start_line, n->end_line);
        assign_depths(c.get(), n, depth + 1);
    }
}

void collect_min_depths(const SyntaxNode& n, std::vector<int>& line_min) {
    for (const auto& c : n.children) {
        int idx = c->start_line - 1;
        if (idx >= 0 && idx < static_cast<int>(line_min.size())) {
            line_min[idx] = std::min(line_min[idx], c->depth);
        }
        collect_min_depths(*c, line_min);
    }
}

} // namespace

int SyntaxTree::min_depth_at(int line) const {
    if (line < 1 || line > static_cast<int>(line_min_depth_.size())) return kInfiniteDepth;
    return line_min_depth_[line - 1];
}

SyntaxTree parse_source(std::string_view source) {
    SyntaxTree tree;
    tree.lines_ = split_lines(source);
    tree.tokens_ = Lexer(source).run();
    Parser parser(tree.tokens_, tree.line_count());
    tree.root_ = parser.run();
    assign_depths(tree.root_.get(), nullptr, 0);
    tree.root_->end_line = std::max(1, tree.line_count());
    tree.root_->start_line = 1;
    tree.line_min_depth_.assign(static_cast<size_t>(std::max(0, tree.line_count())),
                                kInfiniteDepth);
    collect_min_depths(*tree.root_, tree.line_min_depth_);
    return tree;
}

// ---------------------------------------------------------------------------
// Structure collection

namespace {

std::string join_tokens(const std::vector<Token>& toks, size_t begin, size_t end) {
    std::string out;
    auto no_space_before = [](const Token& t) {
        if (t.kind != TK::Punct) return false;
        const std::string& s = t.text;
        return s == "," || s == ";" || s == ")" || s == "]" || s == "." || s == "(" ||
               s == "<" || s == ">" || s == "..." || s == "[";
    };
    auto no_space_after = [](const Token& t) {
        if (t.kind != TK::Punct) return false;
        const std::string& s = t.text;
        return s == "(" || s == "[" || s == "<" || s == ".";
    };
    bool suppress = true; // no leading space
    for (size_t i = begin; i < end && i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.kind == TK::LineComment || t.kind == TK::BlockComment ||
            t.kind == TK::DocComment) {
            continue;
        }
        if (!out.empty() && !suppress && !no_space_before(t)) out += ' ';
        out += t.text;
        suppress = no_space_after(t);
    }
    return out;
}

// Base type name from a parameter's type tokens: the last identifier outside
// generic arguments (Set<String> -> Set, Map.Entry<K,V> -> Entry, int[] -> int).
std::string base_type_name(const std::vector<Token>& toks, size_t begin, size_t end) {
    std::string base;
    int angle = 0;
    for (size_t i = begin; i < end; ++i) {
        const Token& t = toks[i];
        if (t.kind == TK::Punct) {
            if (t.text == "<") ++angle;
            else if (t.text == ">") angle = std::max(0, angle - 1);
            continue;
        }
        if (angle == 0 && t.kind == TK::Identifier) base = t.text;
    }
    return base;
}

void walk(const SyntaxNode& n, const std::function<void(const SyntaxNode&)>& fn) {
    fn(n);
    for (const auto& c : n.children) walk(*c, fn);
}

} // namespace

FileStructure collect_structure(const SyntaxTree& tree) {
    FileStructure out;
    const std::vector<Token>& toks = tree.tokens();

    walk(tree.root(), [&](const SyntaxNode& n) {
        if (n.kind == NodeKind::Import) {
            ImportDecl imp;
            imp.node = &n;
            // tokens: 'import' [static] a '.' b '.' c ';'
            std::vector<std::string> parts;
            for (size_t i = n.token_begin; i < n.token_end; ++i) {
                const Token& t = toks[i];
                if (t.kind == TK::Identifier) parts.push_back(t.text);
                if (is_punct(t, "*")) parts.push_back("*");
            }
            if (!parts.empty() && parts.front() == "static") parts.erase(parts.begin());
            std::string q;
            for (size_t i = 0; i < parts.size(); ++i) {
                if (i) q += '.';
                q += parts[i];
            }
            imp.qualified = q;
            imp.simple_name = parts.empty() ? "" : parts.back();
            imp.text = join_tokens(toks, n.token_begin, n.token_end);
            out.imports.push_back(std::move(imp));
            return;
        }
        if (n.kind == NodeKind::FieldDecl) {
            FieldDecl f;
            f.node = &n;
            const SyntaxNode* p = n.parent;
            while (p && p->kind != NodeKind::TypeDecl) p = p->parent;
            f.owner = p;
            // names: per top-level comma segment, the identifier before '='
            // or the last identifier of the segment
            int depth = 0, angle = 0;
            std::string candidate, confirmed;
            bool past_eq = false;
            auto flush = [&]() {
                if (!confirmed.empty()) f.names.push_back(confirmed);
                else if (!candidate.empty()) f.names.push_back(candidate);
                candidate.clear();
                confirmed.clear();
                past_eq = false;
            };
            for (size_t i = n.token_begin; i < n.token_end; ++i) {
                const Token& t = toks[i];
                if (t.kind == TK::Punct) {
                    const std::string& s = t.text;
                    if (s == "<") ++angle;
                    else if (s == ">") angle = std::max(0, angle - 1);
                    else if (s == "(" || s == "[" || s == "{") ++depth;
                    else if (s == ")" || s == "]" || s == "}") --depth;
                    else if (s == "=" && depth == 0 && angle == 0 && !past_eq) {
                        confirmed = candidate;
                        past_eq = true;
                    } else if ((s == "," && depth == 0 && angle == 0) || s == ";") {
                        flush();
                    }
                    continue;
                }
                if (t.kind == TK::Identifier && depth == 0 && angle == 0 && !past_eq) {
                    candidate = t.text;
                }
            }
            if (!candidate.empty() || !confirmed.empty()) flush();
            out.fields.push_back(std::move(f));
            return;
        }
        if (n.kind == NodeKind::MethodDecl) {
            MethodDecl m;
            m.decl = &n;
            m.body = n.children.empty() ? nullptr : n.children.back().get();
            for (const auto& c : n.children) {
                if (c->kind == NodeKind::Block) m.body = c.get();
            }
            const SyntaxNode* p = n.parent;
            while (p && p->kind != NodeKind::TypeDecl) p = p->parent;
            m.owner = p;

            // find the parameter list: first '(' at the top of the slice
            size_t open = n.token_end;
            for (size_t i = n.token_begin; i < n.token_end; ++i) {
                if (is_punct(toks[i], "(")) {
                    open = i;
                    break;
                }
            }
            // name: last identifier before '('
            for (size_t i = n.token_begin; i < open; ++i) {
                if (toks[i].kind == TK::Identifier) m.name = toks[i].text;
            }
            // parameters
            size_t close_paren = open;
            if (open < n.token_end) {
                int d = 0;
                for (size_t i = open; i < n.token_end; ++i) {
                    if (is_punct(toks[i], "(")) ++d;
                    if (is_punct(toks[i], ")")) {
                        --d;
                        if (d == 0) {
                            close_paren = i;
                            break;
                        }
                    }
                }
                size_t seg_begin = open + 1;
                int depth = 0, angle = 0;
                auto handle_segment = [&](size_t b, size_t e) {
                    while (b < e && (is_punct(toks[b], "@") ||
                                     (toks[b].kind == TK::Keyword && toks[b].text == "final"))) {
                        ++b; // drop annotations/final; annotation args are rare in params
                    }
                    if (b >= e) return;
                    // last identifier is the name; the rest is the type
                    size_t name_idx = e;
                    for (size_t i = b; i < e; ++i) {
                        if (toks[i].kind == TK::Identifier) name_idx = i;
                    }
                    if (name_idx == e) return;
                    ++m.parameter_count;
                    m.parameter_types.push_back(base_type_name(toks, b, name_idx));
                    m.parameter_names.push_back(toks[name_idx].text);
                };
                for (size_t i = open + 1; i <= close_paren && i < n.token_end; ++i) {
                    const Token& t = toks[i];
                    if (t.kind == TK::Punct) {
                        const std::string& s = t.text;
                        if (s == "<") ++angle;
                        else if (s == ">") angle = std::max(0, angle - 1);
                        else if (s == "(" || s == "[") ++depth;
                        else if (s == "]") --depth;
                        else if (s == ")" && i != close_paren) --depth;
                        if ((s == "," && depth == 0 && angle == 0) || i == close_paren) {
                            handle_segment(seg_begin, i);
                            seg_begin = i + 1;
                        }
                    }
                }
            }
            // signature: header tokens up to (excluding) the body block
            size_t sig_end = n.token_end;
            if (m.body && m.body->token_begin > n.token_begin) sig_end = m.body->token_begin;
            m.signature_text = join_tokens(toks, n.token_begin, sig_end);
            out.methods.push_back(std::move(m));
            return;
        }
    });

    // Doc comments: a comment node directly before a method/field node at
    // the same level, allowing annotation nodes in between.
    walk(tree.root(), [&](const SyntaxNode& n) {
        const SyntaxNode* last_doc = nullptr;
        for (const auto& c : n.children) {
            if (c->kind == NodeKind::Comment) {
                // doc comment? check the backing token
                if (c->token_begin < toks.size() &&
                    toks[c->token_begin].kind == TK::DocComment) {
                    last_doc = c.get();
                } else {
                    last_doc = nullptr;
                }
                continue;
            }
            if (c->kind == NodeKind::Annotation) continue;
            if (last_doc && c->kind == NodeKind::MethodDecl) {
                for (auto& m : out.methods) {
                    if (m.decl == c.get()) {
                        m.annotation_text = toks[last_doc->token_begin].text;
                        break;
                    }
                }
            }
            last_doc = nullptr;
        }
    });

    return out;
}

std::vector<const FieldDecl*> visible_fields(const FileStructure& structure,
                                             const MethodDecl& method) {
    std::vector<const FieldDecl*> out;
    for (const auto& f : structure.fields) {
        if (!f.owner || !method.owner) continue;
        // visible when the field's type encloses (or is) the method's type
        for (const SyntaxNode* t = method.owner; t; t = t->parent) {
            if (t == f.owner) {
                out.push_back(&f);
                break;
            }
        }
    }
    return out;
}

std::string doc_first_line(const std::string& doc_text) {
    std::vector<std::string> lines = split_lines(doc_text);
    for (std::string line : lines) {
        // strip comment framing: /** ... */ and leading *
        size_t b = 0, e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (b < e && (line[b] == '/' || line[b] == '*')) ++b;
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        if (e >= 2 && line.compare(e - 2, 2, "*/") == 0) {
            e -= 2;
            while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        }
        if (e > b) return line.substr(b, e - b);
    }
    return "";
}

std::string method_stub(const MethodDecl& method) {
    std::string out;
    std::string doc = doc_first_line(method.annotation_text);
    if (!doc.empty()) {
        out += "/* " + doc + " */ ";
    }
    out += method.signature_text;
    out += " {}";
    return out;
}

bool in_scope_file(const std::string& path) {
    // extension
    size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || path.substr(dot) != ".java") return false;
    // test directories
    size_t begin = 0;
    while (begin <= path.size()) {
        size_t slash = path.find('/', begin);
        std::string seg = path.substr(begin, slash == std::string::npos ? std::string::npos
                                                                        : slash - begin);
        bool last = slash == std::string::npos;
        if (!last && (seg == "test" || seg == "tests")) return false;
        if (last) {
            // file name patterns
            size_t stem_end = seg.find('.');
            std::string stem = stem_end == std::string::npos ? seg : seg.substr(0, stem_end);
            auto ends_with = [&](const std::string& suf) {
                return stem.size() >= suf.size() &&
                       stem.compare(stem.size() - suf.size(), suf.size(), suf) == 0;
            };
            if (ends_with("Test") || ends_with("Tests") || stem.rfind("Test", 0) == 0) {
                return false;
            }
            break;
        }
        begin = slash + 1;
    }
    return true;
}

FileScope classify_file(const std::string& path, std::string_view source) {
    (void)source; // the filter is purely path-based
    return in_scope_file(path) ? FileScope::InScope : FileScope::OutOfScope;
}

} // namespace patchscout
