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

enum class PumlLineKind { ClassHeader, ClassEnd, Member, Association, Generalization, Directive, Blank };

/// Parses an association-end multiplicity label (the text between the
/// quotes, or nullopt when the label is absent).
inline Result<Multiplicity, ParseError> parse_multiplicity(std::optional<std::string_view> label,
                                                          SourceSpan at = {"<label>", 1, 1}) {
    if (!label) return Multiplicity::One;
    std::string s;
    for (char c : *label) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s == "*" || s == "0..*") return Multiplicity::Set0;
    if (s == "1..*") return Multiplicity::Set1;
    if (s == "(*)" || s == "(0..*)") return Multiplicity::Seq0;
    if (s == "(1..*)") return Multiplicity::Seq1;
    if (s == "0..1" || s == "(0..1)") return Multiplicity::Opt;
    return ParseError{std::move(at), "unsupported multiplicity \"" + std::string(*label) + "\"",
                      "one of \"0..*\", \"*\", \"1..*\", \"(0..*)\", \"(*)\", \"(1..*)\", "
                      "\"0..1\", \"(0..1)\""};
}

namespace detail {

/// Character cursor over a single line; columns are 1-based.
class LineCursor {
public:
    explicit LineCursor(std::string_view s) : s_(s) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool done() {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
    std::string_view rest() const { return s_.substr(std::min(i_, s_.size())); }
    std::uint32_t column() const { return static_cast<std::uint32_t>(i_ + 1); }
    std::size_t pos() const { return i_; }
    void seek(std::size_t p) { i_ = p; }

    bool lit(std::string_view t) {
        skip_ws();
        if (rest().starts_with(t)) {
            i_ += t.size();
            return true;
        }
        return false;
    }

    /// Matches a keyword followed by a non-identifier character.
    bool word(std::string_view w) {
        skip_ws();
        if (!rest().starts_with(w)) return false;
        const std::size_t after = i_ + w.size();
        if (after < s_.size() && ident_char(s_[after])) return false;
        i_ = after;
        return true;
    }

    std::optional<std::string> ident() {
        skip_ws();
        if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
            return std::nullopt;
        }
        const std::size_t b = i_;
        while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
        return std::string(s_.substr(b, i_ - b));
    }

    /// Text up to the bracket matching the one at the cursor; cursor moves past it.
    std::optional<std::string_view> balanced(char open, char close) {
        skip_ws();
        if (peek() != open) return std::nullopt;
        int depth = 0;
        const std::size_t b = i_;
        for (; i_ < s_.size(); ++i_) {
            if (s_[i_] == open) ++depth;
            if (s_[i_] == close && --depth == 0) {
                ++i_;
                return s_.substr(b + 1, i_ - b - 2);
            }
        }
        i_ = b;
        return std::nullopt;
    }

    std::optional<std::string_view> quoted() {
        skip_ws();
        if (peek() != '"') return std::nullopt;
        const auto close = s_.find('"', i_ + 1);
        if (close == std::string_view::npos) return std::nullopt;
        auto inner = s_.substr(i_ + 1, close - i_ - 1);
        i_ = close + 1;
        return inner;
    }

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string normalize_type_text(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = true;
        } else {
            if (pending) out += ' ';
            pending = false;
            out += c;
        }
    }
    return out;
}

inline bool is_directive(std::string_view line) {
    static constexpr std::string_view kPrefixes[] = {
        "@startuml", "@enduml", "'", "hide ", "show ", "skinparam", "title ", "!",
        "left to right direction", "top to bottom direction"};
    for (auto p : kPrefixes) {
        if (line.starts_with(p)) return true;
    }
    return line == "hide" || line == "show" || line == "title";
}

class PumlParser {
public:
    explicit PumlParser(std::string origin) : origin_(std::move(origin)) {}

    UmlModel run(std::string_view text) {
        std::uint32_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            auto line = text.substr(start, nl - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            ++line_no;
            handle_line(line, line_no);
            if (nl == text.size()) break;
            start = nl + 1;
        }
        if (open_class_) {
            error(open_class_line_, 1, "class '" + model_.classes[*open_class_].name +
                                           "' is missing its closing '}'");
        }
        for (const auto& name : referenced_) {
            if (!declared_.count(name)) {
                model_.classes.push_back(UmlClass{name, {}, {}});
                declared_.insert(name);
            }
        }
        return std::move(model_);
    }

    std::vector<ParseError>& errors() { return errors_; }

    PumlLineKind classify(std::string_view raw) const {
        auto line = trim(raw);
        if (line.empty()) return PumlLineKind::Blank;
        if (is_directive(line)) return PumlLineKind::Directive;
        if (open_class_) return line.starts_with("}") ? PumlLineKind::ClassEnd : PumlLineKind::Member;
        if (line.starts_with("class ") || line.starts_with("class\t")) return PumlLineKind::ClassHeader;
        if (line.find("<|") != std::string_view::npos || line.find("|>") != std::string_view::npos) {
            return PumlLineKind::Generalization;
        }
        return PumlLineKind::Association;
    }

private:
    void error(std::uint32_t line, std::uint32_t col, std::string msg,
               std::optional<std::string> expected = std::nullopt) {
        errors_.push_back({{origin_, line, col}, std::move(msg), std::move(expected)});
    }

    void reference(const std::string& name) {
        if (std::find(referenced_.begin(), referenced_.end(), name) == referenced_.end()) {
            referenced_.push_back(name);
        }
    }

    void handle_line(std::string_view raw, std::uint32_t line_no) {
        const auto first = raw.find_first_not_of(" \t");
        const std::size_t indent = first == std::string_view::npos ? 0 : first;
        auto col_of = [&](const LineCursor& c) {
            return static_cast<std::uint32_t>(indent + c.column());
        };
        auto line = trim(raw);
        switch (classify(raw)) {
            case PumlLineKind::Blank:
            case PumlLineKind::Directive:
                return;
            case PumlLineKind::ClassHeader:
                return class_header(line, line_no, col_of);
            case PumlLineKind::ClassEnd: {
                LineCursor c(line);
                c.lit("}");
                close_class(c, line_no, col_of);
                return;
            }
            case PumlLineKind::Member: {
                LineCursor c(line);
                member(c, model_.classes[*open_class_], line_no, col_of);
                return;
            }
            case PumlLineKind::Generalization:
                return generalization(line, line_no, col_of);
            case PumlLineKind::Association:
                return association(line, line_no, col_of);
        }
    }

    template <typename ColOf>
    bool inheritance_clause(LineCursor& c, const std::string& child, std::uint32_t line_no,
                            ColOf&& col_of) {
        const auto save = c.pos();
        if (!c.word("is")) return true;
        if (!c.word("subclass") || !c.word("of")) {
            c.seek(save);
            return true;
        }
        auto parent = c.ident();
        if (!parent) {
            error(line_no, col_of(c), "inheritance clause needs a superclass name", "an identifier");
            return false;
        }
        add_generalization(child, *parent, line_no, 1);
        return true;
    }

    template <typename ColOf>
    void class_header(std::string_view line, std::uint32_t line_no, ColOf&& col_of) {
        LineCursor c(line);
        c.word("class");
        auto name = c.ident();
        if (!name) {
            error(line_no, col_of(c), "class declaration needs a name", "an identifier");
            return;
        }
        if (declared_.count(*name)) {
            error(line_no, 1, "class '" + *name + "' is declared more than once");
            return;
        }
        if (!inheritance_clause(c, *name, line_no, col_of)) return;
        declared_.insert(*name);
        reference(*name);
        model_.classes.push_back(UmlClass{*name, {}, {}});
        const std::size_t index = model_.classes.size() - 1;
        if (c.done()) return;
        if (!c.lit("{")) {
            error(line_no, col_of(c), "unexpected text after class name", "'{'");
            return;
        }
        c.skip_ws();
        auto body = c.rest();
        const auto close = body.rfind('}');
        if (close == std::string_view::npos) {
            if (!trim(body).empty()) error(line_no, col_of(c), "members must start on their own line");
            open_class_ = index;
            open_class_line_ = line_no;
            return;
        }
        // Single-line form: `class A { member }`.
        auto inner = trim(body.substr(0, close));
        if (!inner.empty() && inner != "...") {
            LineCursor m(inner);
            member(m, model_.classes[index], line_no, col_of);
        }
        LineCursor tail(body.substr(close + 1));
        if (!inheritance_clause(tail, *name, line_no, col_of)) return;
        if (!tail.done()) error(line_no, 1, "unexpected text after class body");
    }

    template <typename ColOf>
    void close_class(LineCursor& c, std::uint32_t line_no, ColOf&& col_of) {
        const auto name = model_.classes[*open_class_].name;
        open_class_.reset();
        if (!inheritance_clause(c, name, line_no, col_of)) return;
        if (!c.done()) error(line_no, col_of(c), "unexpected text after '}'");
    }

    template <typename ColOf>
    void member(LineCursor& c, UmlClass& cls, std::uint32_t line_no, ColOf&& col_of) {
        Access vis = Access::Private;
        bool is_static = false, seen_vis = false, seen_static = false;
        for (;;) {
            c.skip_ws();
            const char ch = c.peek();
            if (!seen_vis && (ch == '+' || ch == '-' || ch == '#' || ch == '~')) {
                vis = ch == '+' ? Access::Public : ch == '#' ? Access::Protected : Access::Private;
                seen_vis = true;
                c.seek(c.pos() + 1);
            } else if (!seen_static && (c.lit("{static}") || c.lit("{classifier}"))) {
                is_static = true;
                seen_static = true;
            } else {
                break;
            }
        }
        const auto name_col = col_of(c);
        auto name = c.ident();
        if (!name) {
            error(line_no, name_col, "expected a member declaration", "an identifier");
            return;
        }
        c.skip_ws();
        if (c.peek() == '(') {
            auto params = c.balanced('(', ')');
            if (!params) {
                error(line_no, col_of(c), "unbalanced parentheses in parameter list", "')'");
                return;
            }
            UmlOperation op;
            op.visibility = vis;
            op.is_static = is_static;
            op.name = *name;
            if (!split_params(*params, op.param_type_texts)) {
                error(line_no, name_col, "empty parameter type in '" + *name + "'");
                return;
            }
            std::string stereo;
            std::uint32_t stereo_col = 0;
            if (c.lit(":")) {
                auto ret = type_and_stereotype(c, stereo, stereo_col, col_of);
                if (!ret) return bad_stereotype(line_no, stereo_col);
                op.return_type_text = *ret;
                if (op.return_type_text.empty()) {
                    error(line_no, col_of(c), "missing return type after ':'", "a type");
                    return;
                }
            } else {
                auto ret = type_and_stereotype(c, stereo, stereo_col, col_of);
                if (!ret) return bad_stereotype(line_no, stereo_col);
                if (!ret->empty()) {
                    error(line_no, col_of(c), "unexpected text after parameter list", "':'");
                    return;
                }
            }
            if (stereo == "function") {
                op.stereotype = OperationStereotype::Function;
            } else if (!stereo.empty()) {
                error(line_no, stereo_col,
                      "stereotype <<" + stereo + ">> does not apply to operations",
                      "<<function>> or no stereotype");
                return;
            }
            cls.operations.push_back(std::move(op));
            return;
        }
        if (c.done()) {
            // Bare member name: well-formed syntax, rejected later by validate_uml.
            cls.attributes.push_back({vis, is_static, *name, {}, AttributeStereotype::InstanceVariable});
            return;
        }
        if (!c.lit(":")) {
            error(line_no, col_of(c), "attribute '" + *name + "' requires a type", "':'");
            return;
        }
        std::string stereo;
        std::uint32_t stereo_col = 0;
        auto type = type_and_stereotype(c, stereo, stereo_col, col_of);
        if (!type) return bad_stereotype(line_no, stereo_col);
        if (type->empty()) {
            error(line_no, col_of(c), "attribute '" + *name + "' requires a type", "a type");
            return;
        }
        UmlAttribute a;
        a.visibility = vis;
        a.is_static = is_static;
        a.name = *name;
        a.type_text = *type;
        if (stereo == "value") {
            if (is_static) {
                error(line_no, stereo_col, "values cannot be static");
                return;
            }
            a.stereotype = AttributeStereotype::Value;
        } else if (stereo == "type") {
            if (is_static) {
                error(line_no, stereo_col, "types cannot be static");
                return;
            }
            a.stereotype = AttributeStereotype::Type;
        } else if (!stereo.empty()) {
            error(line_no, stereo_col, "stereotype <<" + stereo + ">> does not apply to attributes",
                  "<<value>>, <<type>> or no stereotype");
            return;
        }
        cls.attributes.push_back(std::move(a));
    }

    void bad_stereotype(std::uint32_t line_no, std::uint32_t col) {
        error(line_no, col, "unknown or malformed stereotype " + last_stereotype_,
              "<<value>>, <<type>> or <<function>>");
    }

    /// Reads type text up to an optional trailing stereotype. Returns nullopt
    /// (and records the offending marker) when the stereotype is unknown.
    template <typename ColOf>
    std::optional<std::string> type_and_stereotype(LineCursor& c, std::string& stereo,
                                                   std::uint32_t& stereo_col, ColOf&& col_of) {
        c.skip_ws();
        const auto rest = c.rest();
        std::size_t open = rest.find("<<");
        std::size_t open_len = 2;
        std::string_view close_tok = ">>";
        if (const auto g = rest.find("\xC2\xAB"); g != std::string_view::npos && g < open) {
            open = g;
            close_tok = "\xC2\xBB";
        }
        if (open == std::string_view::npos) {
            c.seek(c.pos() + rest.size());
            return normalize_type_text(rest);
        }
        const auto base = c.pos();
        stereo_col = col_of(c) + static_cast<std::uint32_t>(open);
        const auto close = rest.find(close_tok, open + open_len);
        last_stereotype_ = std::string(trim(rest.substr(open)));
        if (close == std::string_view::npos || !trim(rest.substr(close + close_tok.size())).empty()) {
            return std::nullopt;
        }
        stereo = std::string(trim(rest.substr(open + open_len, close - open - open_len)));
        if (stereo != "value" && stereo != "type" && stereo != "function") return std::nullopt;
        c.seek(base + rest.size());
        return normalize_type_text(rest.substr(0, open));
    }

    static bool split_params(std::string_view params, std::vector<std::string>& out) {
        if (trim(params).empty()) return true;
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= params.size(); ++i) {
            const char ch = i < params.size() ? params[i] : ',';
            if (ch == '(' || ch == '[') ++depth;
            if (ch == ')' || ch == ']') --depth;
            if (ch == ',' && depth == 0) {
                auto piece = normalize_type_text(params.substr(start, i - start));
                if (piece.empty()) return false;
                out.push_back(std::move(piece));
                start = i + 1;
            }
        }
        return true;
    }

    void add_generalization(const std::string& child, const std::string& parent,
                            std::uint32_t, std::uint32_t) {
        reference(parent);
        reference(child);
        model_.generalizations.push_back({child, parent});
    }

    template <typename ColOf>
    void generalization(std::string_view line, std::uint32_t line_no, ColOf&& col_of) {
        LineCursor c(line);
        auto left = c.ident();
        if (!left) {
            error(line_no, col_of(c), "expected a class name", "an identifier");
            return;
        }
        c.skip_ws();
        std::optional<std::string> child, parent;
        if (c.lit("<|")) {
            if (!dashes(c)) {
                error(line_no, col_of(c), "malformed inheritance arrow", "'<|--'");
                return;
            }
            parent = left;
            child = c.ident();
        } else if (dashes(c) && c.lit("|>")) {
            child = left;
            parent = c.ident();
        } else {
            error(line_no, col_of(c), "malformed inheritance arrow", "'<|--' or '--|>'");
            return;
        }
        if (!child || !parent) {
            error(line_no, col_of(c), "inheritance arrow needs a class on both ends", "an identifier");
            return;
        }
        if (!c.done()) {
            error(line_no, col_of(c), "unexpected text after inheritance arrow");
            return;
        }
        add_generalization(*child, *parent, line_no, 1);
    }

    static bool dashes(LineCursor& c) {
        c.skip_ws();
        std::size_t n = 0;
        while (c.peek() == '-') {
            c.seek(c.pos() + 1);
            ++n;
        }
        return n > 0;
    }

    template <typename ColOf>
    void association(std::string_view line, std::uint32_t line_no, ColOf&& col_of) {
        LineCursor c(line);
        auto source = c.ident();
        if (!source) {
            error(line_no, col_of(c), "expected a class declaration or relation", "an identifier");
            return;
        }
        UmlAssociation a;
        a.source = *source;

        c.skip_ws();
        std::optional<std::string_view> qual;
        if (c.peek() == '[') {
            qual = c.balanced('[', ']');
            if (!qual) {
                error(line_no, col_of(c), "unbalanced qualifier brackets", "']'");
                return;
            }
        } else if (c.rest().starts_with("\"[")) {
            auto q = c.quoted();
            if (!q || q->size() < 2 || q->back() != ']') {
                error(line_no, col_of(c), "malformed quoted qualifier", "\"[Type]\"");
                return;
            }
            qual = q->substr(1, q->size() - 2);
        }
        if (qual) {
            auto inner = trim(*qual);
            Qualifier q;
            if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')' &&
                LineCursor(inner).balanced('(', ')').value_or("").size() + 2 == inner.size() &&
                !trim(inner.substr(1, inner.size() - 2)).empty()) {
                q.unique = true;
                inner = inner.substr(1, inner.size() - 2);
            }
            q.type_text = normalize_type_text(inner);
            if (q.type_text.empty()) {
                error(line_no, col_of(c), "qualifier has no type", "a type");
                return;
            }
            a.qualifier = std::move(q);
        }

        c.skip_ws();
        if (c.peek() == '"') {
            error(line_no, col_of(c), "source-end multiplicities are not supported");
            return;
        }
        const auto arrow_col = col_of(c);
        if (!dashes(c) || !c.lit(">")) {
            error(line_no, arrow_col, "expected a class declaration or relation", "'-->'");
            return;
        }
        c.skip_ws();
        std::optional<std::string_view> label;
        const auto label_col = col_of(c);
        if (c.peek() == '"') {
            label = c.quoted();
            if (!label) {
                error(line_no, label_col, "unterminated multiplicity label", "'\"'");
                return;
            }
        }
        auto mult = parse_multiplicity(label, {origin_, line_no, label_col});
        if (!mult) {
            errors_.push_back(mult.errors().front());
            return;
        }
        a.multiplicity = *mult;
        auto target = c.ident();
        if (!target) {
            error(line_no, col_of(c), "association needs a target class", "an identifier");
            return;
        }
        a.target = *target;
        if (!c.lit(":")) {
            error(line_no, col_of(c), "association requires a role name", "': role'");
            return;
        }
        c.skip_ws();
        const char ch = c.peek();
        if (ch == '+' || ch == '-' || ch == '#' || ch == '~') {
            a.role_visibility = ch == '+'   ? Access::Public
                                : ch == '#' ? Access::Protected
                                            : Access::Private;
            c.seek(c.pos() + 1);
        }
        auto role = c.ident();
        if (!role) {
            error(line_no, col_of(c), "association requires a role name", "an identifier");
            return;
        }
        a.role_name = *role;
        if (!c.done()) {
            error(line_no, col_of(c), "unexpected text after role name");
            return;
        }
        reference(a.source);
        reference(a.target);
        model_.associations.push_back(std::move(a));
    }

    std::string origin_;
    UmlModel model_;
    std::vector<ParseError> errors_;
    std::set<std::string> declared_;
    std::vector<std::string> referenced_;
    std::optional<std::size_t> open_class_;
    std::uint32_t open_class_line_ = 0;
    std::string last_stereotype_;
};

} // namespace detail

/// Parses PlantUML-for-VDM text. Classes that only appear in relations are
/// declared implicitly, in order of first appearance.
inline Result<UmlModel, ParseError> parse_puml(std::string_view text,
                                              const std::string& origin = "<input>") {
    detail::PumlParser p(origin);
    auto model = p.run(text);
    if (!p.errors().empty()) return std::move(p.errors());
    return model;
}

} // namespace vdmuml
