#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vdmuml/model.hpp"
#include "vdmuml/result.hpp"

namespace vdmuml {

namespace lex {

enum class TokenKind { Ident, Number, String, Char, Symbol, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t begin = 0;  // byte offsets into the source
    std::size_t end = 0;
    std::uint32_t line = 1;
    std::uint32_t column = 1;

    bool is(std::string_view s) const {
        return (kind == TokenKind::Ident || kind == TokenKind::Symbol) && text == s;
    }
};

/// Tokenizer for VDM++ source. Comments (`--` to end of line and `/* */`)
/// are skipped; everything else, including characters the parser does not
/// understand, becomes a token so raw bodies can be captured by offset.
class Lexer {
public:
    Lexer(std::string_view src, std::string origin) : src_(src), origin_(std::move(origin)) {}

    Result<std::vector<Token>, ParseError> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (error_) return *error_;
            Token t;
            t.begin = pos_;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                t.kind = TokenKind::End;
                t.end = pos_;
                out.push_back(std::move(t));
                return out;
            }
            const char c = src_[pos_];
            if (ident_head(c)) {
                while (pos_ < src_.size() && ident_tail(src_[pos_])) advance();
                t.kind = TokenKind::Ident;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number();
                t.kind = TokenKind::Number;
            } else if (c == '"') {
                if (!lex_quoted('"')) return fail(t, "unterminated string literal");
                t.kind = TokenKind::String;
            } else if (c == '\'') {
                if (!lex_quoted('\'')) return fail(t, "unterminated character literal");
                t.kind = TokenKind::Char;
            } else {
                lex_symbol();
                t.kind = TokenKind::Symbol;
            }
            t.end = pos_;
            t.text = std::string(src_.substr(t.begin, t.end - t.begin));
            out.push_back(std::move(t));
        }
    }

private:
    static bool ident_head(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_tail(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (starts_with("--")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (starts_with("/*")) {
                const auto line = line_, col = col_;
                advance();
                advance();
                while (pos_ < src_.size() && !starts_with("*/")) advance();
                if (pos_ >= src_.size()) {
                    error_ = ParseError{{origin_, line, col}, "unterminated comment", std::nullopt};
                    return;
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    void lex_number() {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                while (pos_ < look) advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    advance();
                }
            }
        }
    }

    bool lex_quoted(char quote) {
        advance();
        while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != quote) return false;
        advance();
        return true;
    }

    void lex_symbol() {
        static constexpr std::string_view kMulti[] = {
            "<-:", ":->", "<=>", "==>", "|->", "...", "==", "->", "+>", ":=", ":-", "::", "<=",
            ">=",  "<>",  "=>",  "**",  "++", "..", "&&", "||", "<:", ":>"};
        for (auto m : kMulti) {
            if (starts_with(m)) {
                for (std::size_t i = 0; i < m.size(); ++i) advance();
                return;
            }
        }
        advance();
    }

    ParseError fail(const Token& at, std::string msg) const {
        return ParseError{{origin_, at.line, at.column}, std::move(msg), std::nullopt};
    }

    std::string_view src_;
    std::string origin_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
    std::optional<ParseError> error_;
};

} // namespace lex

namespace detail {

inline bool is_block_keyword(const lex::Token& t) {
    return t.kind == lex::TokenKind::Ident &&
           (t.text == "instance" || t.text == "values" || t.text == "types" ||
            t.text == "operations" || t.text == "functions" || t.text == "thread" ||
            t.text == "sync" || t.text == "traces");
}

inline bool is_access_keyword(const lex::Token& t) {
    return t.kind == lex::TokenKind::Ident &&
           (t.text == "public" || t.text == "private" || t.text == "protected" ||
            t.text == "static");
}

inline bool is_reserved(std::string_view s) {
    static const std::set<std::string_view> kReserved = {
        "class",  "end",     "is",        "subclass",  "of",       "instance", "variables",
        "values", "types",   "operations", "functions", "thread",  "sync",     "traces",
        "set",    "set1",    "seq",       "seq1",      "map",      "inmap",    "to",
        "public", "private", "protected", "static",    "inv",      "pre",      "post",
        "return", "let",     "in",        "if",        "then",     "else",     "cases",
        "others", "forall",  "exists",    "undefined", "not",      "and",      "or",
        "true",   "false",   "nil",       "self",      "new",      "skip",     "yet",
        "specified", "responsibility", "compose", "eq", "ord"};
    return kReserved.count(s) > 0;
}

inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
        } else {
            if (pending) out += ' ';
            pending = false;
            out += c;
        }
    }
    return out;
}

/// Recursive-descent parser over the token stream. Types are parsed
/// structurally; expressions and statements are captured as raw text by
/// bracket-balanced scanning.
class VdmParser {
public:
    VdmParser(std::string_view src, std::vector<lex::Token> tokens, std::string origin)
        : src_(src), toks_(std::move(tokens)), origin_(std::move(origin)) {}

    struct Failure {};

    const lex::Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at_end() const { return peek().kind == lex::TokenKind::End; }
    const lex::Token& next() {
        const auto& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(std::string_view s) {
        if (peek().is(s)) {
            next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const lex::Token& at, std::string msg,
                           std::optional<std::string> expected = std::nullopt) {
        errors_.push_back({{origin_, at.line, at.column}, std::move(msg), std::move(expected)});
        throw Failure{};
    }

    void expect(std::string_view s) {
        if (!accept(s)) fail(peek(), "unexpected " + describe(peek()), "'" + std::string(s) + "'");
    }

    std::string expect_ident(std::string_view what) {
        const auto& t = peek();
        if (t.kind != lex::TokenKind::Ident || is_reserved(t.text)) {
            fail(t, "unexpected " + describe(t), std::string(what));
        }
        return next().text;
    }

    static std::string describe(const lex::Token& t) {
        if (t.kind == lex::TokenKind::End) return "end of input";
        return "'" + t.text + "'";
    }

    // ---- types ------------------------------------------------------------

    VdmType parse_type() {
        auto first = parse_product();
        if (!peek().is("|")) return first;
        std::vector<VdmType> members{std::move(first)};
        while (accept("|")) members.push_back(parse_product());
        return VdmType::union_of(std::move(members));
    }

    VdmType parse_product() {
        auto first = parse_operand();
        if (!peek().is("*")) return first;
        std::vector<VdmType> members{std::move(first)};
        while (accept("*")) members.push_back(parse_operand());
        return VdmType::product(std::move(members));
    }

    VdmType parse_operand() {
        const auto& t = peek();
        if (t.is("set") || t.is("set1") || t.is("seq") || t.is("seq1")) {
            const std::string kw = next().text;
            expect("of");
            auto inner = parse_operand();
            if (kw == "set") return VdmType::set(std::move(inner));
            if (kw == "set1") return VdmType::set1(std::move(inner));
            if (kw == "seq") return VdmType::seq(std::move(inner));
            return VdmType::seq1(std::move(inner));
        }
        if (t.is("map") || t.is("inmap")) {
            const bool inj = next().text == "inmap";
            auto dom = parse_type();
            expect("to");
            auto rng = parse_type();
            return VdmType::map(std::move(dom), std::move(rng), inj);
        }
        if (t.is("[")) {
            next();
            auto inner = parse_type();
            expect("]");
            return VdmType::optional(std::move(inner));
        }
        if (t.is("(")) {
            next();
            if (accept(")")) return VdmType::unit();
            auto inner = parse_type();
            expect(")");
            return inner;
        }
        if (t.kind == lex::TokenKind::Ident && !is_reserved(t.text)) {
            auto name = next().text;
            if (is_basic_type_name(name)) return VdmType::basic(std::move(name));
            if (peek().is("`")) fail(peek(), "qualified type names are not supported");
            return VdmType::named(std::move(name));
        }
        if (t.is("<")) fail(t, "quote types are not supported");
        fail(t, "unexpected " + describe(t), "a type");
    }

    /// Signature domain: top-level `*` separates parameters, `()` is none.
    std::vector<VdmType> parse_signature_domain() {
        if (peek().is("(") && peek(1).is(")")) {
            next();
            next();
            return {};
        }
        std::vector<VdmType> params{parse_operand()};
        while (accept("*")) params.push_back(parse_operand());
        if (!peek().is("|")) return params;
        std::vector<VdmType> members;
        members.push_back(params.size() == 1 ? std::move(params.front())
                                             : VdmType::product(std::move(params)));
        while (accept("|")) members.push_back(parse_product());
        return {VdmType::union_of(std::move(members))};
    }

    // ---- raw text -----------------------------------------------------------

    /// Captures raw source text starting at the current token, stopping at a
    /// depth-0 `;`, block keyword, access keyword or `end`.
    std::optional<std::string> capture_raw() {
        int depth = 0;
        const std::size_t start = pos_;
        std::size_t last = pos_;
        bool any = false;
        while (!at_end()) {
            const auto& t = peek();
            if (depth == 0 && (t.is(";") || is_block_keyword(t) || is_access_keyword(t) ||
                               t.is("end") || t.is("class"))) {
                break;
            }
            if (t.is("(") || t.is("[") || t.is("{") || t.is("cases")) {
                ++depth;
            } else if (t.is(")") || t.is("]") || t.is("}") || t.is("end")) {
                if (depth == 0) fail(t, "unbalanced " + describe(t));
                --depth;
            }
            last = pos_;
            any = true;
            next();
        }
        if (depth != 0) fail(toks_[start], "unbalanced brackets in definition body");
        if (!any) return std::nullopt;
        const auto b = toks_[start].begin;
        const auto e = toks_[last].end;
        return std::string(src_.substr(b, e - b));
    }

    // ---- definitions --------------------------------------------------------

    struct Modifiers {
        Access access = Access::Private;
        bool is_static = false;
    };

    Modifiers parse_modifiers() {
        Modifiers m;
        bool seen_access = false, seen_static = false;
        for (;;) {
            const auto& t = peek();
            if (!seen_access && (t.is("public") || t.is("private") || t.is("protected"))) {
                m.access = t.text == "public"      ? Access::Public
                           : t.text == "protected" ? Access::Protected
                                                   : Access::Private;
                seen_access = true;
                next();
            } else if (!seen_static && t.is("static")) {
                m.is_static = true;
                seen_static = true;
                next();
            } else {
                return m;
            }
        }
    }

    void end_definition() {
        if (!accept(";")) {
            const auto& t = peek();
            if (!(is_block_keyword(t) || t.is("end") || is_access_keyword(t) ||
                  t.kind == lex::TokenKind::Ident)) {
                fail(t, "unexpected " + describe(t), "';'");
            }
        }
    }

    InstanceVariable parse_instance_variable() {
        if (peek().is("inv")) fail(peek(), "instance variable invariants ('inv') are not supported");
        auto mods = parse_modifiers();
        InstanceVariable iv;
        iv.access = mods.access;
        iv.is_static = mods.is_static;
        iv.name = expect_ident("an instance variable name");
        expect(":");
        iv.var_type = parse_type();
        if (accept(":=")) {
            iv.init_text = capture_raw();
            if (!iv.init_text) fail(peek(), "missing initializer after ':='", "an expression");
        }
        end_definition();
        return iv;
    }

    ValueDef parse_value() {
        const auto& start = peek();
        auto mods = parse_modifiers();
        if (mods.is_static) fail(start, "values cannot be declared static");
        ValueDef v;
        v.access = mods.access;
        v.name = expect_ident("a value name");
        if (!peek().is(":")) {
            fail(peek(), "value '" + v.name + "' needs an explicit type", "':'");
        }
        next();
        v.val_type = parse_type();
        expect("=");
        auto expr = capture_raw();
        if (!expr) fail(peek(), "missing expression for value '" + v.name + "'", "an expression");
        v.expr_text = std::move(*expr);
        end_definition();
        return v;
    }

    TypeDef parse_typedef() {
        auto mods = parse_modifiers();
        if (mods.is_static) fail(peek(), "type definitions cannot be static");
        TypeDef td;
        td.access = mods.access;
        td.name = expect_ident("a type name");
        if (peek().is("::")) fail(peek(), "record type definitions ('::') are not supported");
        expect("=");
        td.definition = parse_type();
        for (auto kw : {"inv", "eq", "ord"}) {
            if (peek().is(kw)) {
                fail(peek(), "type '" + std::string(kw) + "' clauses are not supported");
            }
        }
        end_definition();
        return td;
    }

    Callable parse_callable(std::string_view arrow, std::string_view kind) {
        auto mods = parse_modifiers();
        Callable f;
        f.access = mods.access;
        f.is_static = mods.is_static;
        f.name = expect_ident(std::string("a ") + std::string(kind) + " name");
        if (peek().is("[")) fail(peek(), "polymorphic functions are not supported");
        if (peek().is("(")) fail(peek(), "implicit definitions are not supported");
        expect(":");
        f.param_types = parse_signature_domain();
        if (arrow == "->") {
            if (!accept("->") && !accept("+>")) fail(peek(), "unexpected " + describe(peek()), "'->'");
        } else {
            expect(arrow);
        }
        f.return_type = parse_type();
        if (peek().is("->") || peek().is("+>")) fail(peek(), "curried functions are not supported");

        accept(";");
        if (peek().kind == lex::TokenKind::Ident && peek().text == f.name && peek(1).is("(")) {
            const auto def_tok = peek();
            next();
            next();
            f.param_patterns = parse_patterns();
            expect("==");
            auto body = capture_raw();
            if (!body) fail(peek(), "missing body for '" + f.name + "'", "a body");
            if (f.param_patterns.size() != f.param_types.size()) {
                fail(def_tok, "'" + f.name + "' declares " + std::to_string(f.param_types.size()) +
                                   " parameter type(s) but binds " +
                                   std::to_string(f.param_patterns.size()) + " parameter(s)");
            }
            if (collapse_whitespace(*body) == "is not yet specified") {
                f.param_patterns.clear();
            } else {
                f.body_text = std::move(body);
            }
            end_definition();
        } else if (peek().kind == lex::TokenKind::Ident && !is_block_keyword(peek()) &&
                   !is_access_keyword(peek()) && !peek().is("end") && peek(1).is("(")) {
            fail(peek(), "definition of '" + peek().text + "' does not match signature of '" +
                             f.name + "'");
        }
        return f;
    }

    std::vector<std::string> parse_patterns() {
        std::vector<std::string> out;
        if (accept(")")) return out;
        int depth = 0;
        std::size_t start = pos_;
        auto flush = [&](std::size_t stop) {
            if (stop == start) fail(peek(), "empty parameter pattern", "a pattern");
            const auto b = toks_[start].begin;
            const auto e = toks_[stop - 1].end;
            out.push_back(collapse_whitespace(src_.substr(b, e - b)));
        };
        for (;;) {
            const auto& t = peek();
            if (at_end()) fail(t, "unterminated parameter list", "')'");
            if (depth == 0 && (t.is(",") || t.is(")"))) {
                flush(pos_);
                const bool done = t.is(")");
                next();
                if (done) return out;
                start = pos_;
                continue;
            }
            if (t.is("(") || t.is("[") || t.is("{")) ++depth;
            if (t.is(")") || t.is("]") || t.is("}")) --depth;
            next();
        }
    }

    // ---- classes --------------------------------------------------------------

    bool at_class_end(const std::string& cls) const {
        return peek().is("end") && peek(1).kind == lex::TokenKind::Ident && peek(1).text == cls;
    }

    void recover(const std::string& cls) {
        while (!at_end() && !is_block_keyword(peek()) && !at_class_end(cls) && !peek().is("class")) {
            next();
        }
    }

    template <typename Fn>
    void parse_block(const std::string& cls, Fn&& one) {
        while (!at_end() && !is_block_keyword(peek()) && !at_class_end(cls) &&
               !peek().is("class")) {
            if (accept(";")) continue;
            try {
                one();
            } catch (const Failure&) {
                recover(cls);
                return;
            }
        }
    }

    VdmClass parse_class() {
        expect("class");
        VdmClass c;
        c.name = expect_ident("a class name");
        if (accept("is")) {
            expect("subclass");
            expect("of");
            c.superclasses.push_back(expect_ident("a superclass name"));
            while (accept(",")) c.superclasses.push_back(expect_ident("a superclass name"));
        }
        for (;;) {
            const auto& t = peek();
            if (at_class_end(c.name)) {
                next();
                next();
                return c;
            }
            if (at_end() || t.is("class")) fail(t, "missing 'end " + c.name + "'");
            if (t.is("end")) {
                fail(peek(1), "class '" + c.name + "' closed with " + describe(peek(1)),
                     "'" + c.name + "'");
            }
            if (t.is("thread") || t.is("sync") || t.is("traces")) {
                report(t, "'" + t.text + "' sections are not supported");
                next();
                recover(c.name);
                continue;
            }
            if (t.is("instance")) {
                next();
                if (!accept("variables")) {
                    report(peek(), "unexpected " + describe(peek()), "'variables'");
                    recover(c.name);
                    continue;
                }
                parse_block(c.name, [&] { c.instance_variables.push_back(parse_instance_variable()); });
            } else if (accept("values")) {
                parse_block(c.name, [&] { c.values.push_back(parse_value()); });
            } else if (accept("types")) {
                parse_block(c.name, [&] { c.type_defs.push_back(parse_typedef()); });
            } else if (accept("operations")) {
                parse_block(c.name, [&] {
                    OperationDef op;
                    static_cast<Callable&>(op) = parse_callable("==>", "operation");
                    c.operations.push_back(std::move(op));
                });
            } else if (accept("functions")) {
                parse_block(c.name, [&] {
                    FunctionDef fn;
                    static_cast<Callable&>(fn) = parse_callable("->", "function");
                    c.functions.push_back(std::move(fn));
                });
            } else {
                report(t, "unexpected " + describe(t), "a definition block");
                next();
                recover(c.name);
            }
        }
    }

    VdmModel parse_model() {
        VdmModel m;
        while (!at_end()) {
            if (!peek().is("class")) {
                report(peek(), "unexpected " + describe(peek()), "'class'");
                while (!at_end() && !peek().is("class")) next();
                continue;
            }
            try {
                m.classes.push_back(parse_class());
            } catch (const Failure&) {
                next();
                while (!at_end() && !peek().is("class")) next();
            }
        }
        return m;
    }

    void report(const lex::Token& at, std::string msg,
                std::optional<std::string> expected = std::nullopt) {
        errors_.push_back({{origin_, at.line, at.column}, std::move(msg), std::move(expected)});
    }

    std::vector<ParseError>& errors() { return errors_; }

private:
    std::string_view src_;
    std::vector<lex::Token> toks_;
    std::string origin_;
    std::size_t pos_ = 0;
    std::vector<ParseError> errors_;
};

} // namespace detail

/// Parses VDM++ source into a model. All malformed definitions are reported;
/// parsing resumes at the next definition-block keyword after an error.
inline Result<VdmModel, ParseError> parse_vdm(std::string_view source,
                                             const std::string& origin = "<input>") {
    auto toks = lex::Lexer(source, origin).run();
    if (!toks) return toks.errors();
    detail::VdmParser p(source, std::move(toks).value(), origin);
    auto model = p.parse_model();
    if (!p.errors().empty()) return std::move(p.errors());
    return model;
}

/// Parses a single VDM type expression.
inline Result<VdmType, ParseError> parse_vdm_type(std::string_view text,
                                                 const std::string& origin = "<type>") {
    auto toks = lex::Lexer(text, origin).run();
    if (!toks) return toks.errors();
    detail::VdmParser p(text, std::move(toks).value(), origin);
    try {
        auto t = p.parse_type();
        if (!p.at_end()) p.fail(p.peek(), "unexpected " + p.describe(p.peek()), "end of type");
        return t;
    } catch (const detail::VdmParser::Failure&) {
        return std::move(p.errors());
    }
}

} // namespace vdmuml
