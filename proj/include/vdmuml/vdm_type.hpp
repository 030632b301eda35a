#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vdmuml {

/// Recursive type tree of the supported VDM++ type language.
///
/// `Named` is a leaf that refers either to a class or to a user-defined type;
/// which of the two it is depends on the surrounding model and is decided by
/// the translation passes. `Unit` is the empty type `()` used as the
/// parameter/result of operations that take or return nothing.
struct VdmType {
    enum class Kind {
        Basic,
        Named,
        Unit,
        Set,
        Set1,
        Seq,
        Seq1,
        Optional,
        Map,
        Product,
        Union,
    };

    Kind kind = Kind::Unit;
    std::string name;            // Basic and Named only
    std::vector<VdmType> args;   // children; Map is {domain, range}
    bool injective = false;      // Map only

    bool operator==(const VdmType&) const = default;

    static VdmType basic(std::string n) { return {Kind::Basic, std::move(n), {}, false}; }
    static VdmType named(std::string n) { return {Kind::Named, std::move(n), {}, false}; }
    static VdmType unit() { return {Kind::Unit, {}, {}, false}; }
    static VdmType set(VdmType t) { return wrap(Kind::Set, std::move(t)); }
    static VdmType set1(VdmType t) { return wrap(Kind::Set1, std::move(t)); }
    static VdmType seq(VdmType t) { return wrap(Kind::Seq, std::move(t)); }
    static VdmType seq1(VdmType t) { return wrap(Kind::Seq1, std::move(t)); }
    static VdmType optional(VdmType t) { return wrap(Kind::Optional, std::move(t)); }
    static VdmType map(VdmType dom, VdmType rng, bool inj = false) {
        VdmType t{Kind::Map, {}, {}, inj};
        t.args.push_back(std::move(dom));
        t.args.push_back(std::move(rng));
        return t;
    }
    static VdmType product(std::vector<VdmType> members) {
        return {Kind::Product, {}, std::move(members), false};
    }
    static VdmType union_of(std::vector<VdmType> members) {
        return {Kind::Union, {}, std::move(members), false};
    }

    const VdmType& inner() const { return args.front(); }
    const VdmType& domain() const { return args.at(0); }
    const VdmType& range() const { return args.at(1); }

private:
    static VdmType wrap(Kind k, VdmType t) {
        VdmType w{k, {}, {}, false};
        w.args.push_back(std::move(t));
        return w;
    }
};

inline constexpr std::array<std::string_view, 8> kBasicTypeNames = {
    "bool", "nat", "nat1", "int", "rat", "real", "char", "token"};

inline bool is_basic_type_name(std::string_view s) {
    return std::find(kBasicTypeNames.begin(), kBasicTypeNames.end(), s) != kBasicTypeNames.end();
}

/// Leaves that never count towards abstraction capacity.
inline bool is_basic(const VdmType& t) {
    return t.kind == VdmType::Kind::Basic || t.kind == VdmType::Kind::Unit;
}

inline bool is_collection(VdmType::Kind k) {
    using K = VdmType::Kind;
    return k == K::Set || k == K::Set1 || k == K::Seq || k == K::Seq1 || k == K::Optional;
}

inline bool is_compound(const VdmType& t) {
    using K = VdmType::Kind;
    return is_collection(t.kind) || t.kind == K::Map || t.kind == K::Product || t.kind == K::Union;
}

namespace detail {

enum class TypeContext { Top, UnionMember, Operand };

inline bool needs_parens(const VdmType& t, TypeContext ctx) {
    using K = VdmType::Kind;
    switch (ctx) {
        case TypeContext::Top:
            return false;
        case TypeContext::UnionMember:
            return t.kind == K::Union || t.kind == K::Map;
        case TypeContext::Operand:
            return t.kind == K::Union || t.kind == K::Product || t.kind == K::Map;
    }
    return false;
}

inline void render_into(std::string& out, const VdmType& t, TypeContext ctx);

inline void render_joined(std::string& out, const VdmType& t, std::string_view sep,
                          TypeContext member_ctx) {
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += sep;
        render_into(out, t.args[i], member_ctx);
    }
}

inline void render_into(std::string& out, const VdmType& t, TypeContext ctx) {
    using K = VdmType::Kind;
    const bool parens = needs_parens(t, ctx);
    if (parens) out += '(';
    switch (t.kind) {
        case K::Basic:
        case K::Named:
            out += t.name;
            break;
        case K::Unit:
            out += "()";
            break;
        case K::Set:
            out += "set of ";
            render_into(out, t.inner(), TypeContext::Operand);
            break;
        case K::Set1:
            out += "set1 of ";
            render_into(out, t.inner(), TypeContext::Operand);
            break;
        case K::Seq:
            out += "seq of ";
            render_into(out, t.inner(), TypeContext::Operand);
            break;
        case K::Seq1:
            out += "seq1 of ";
            render_into(out, t.inner(), TypeContext::Operand);
            break;
        case K::Optional:
            out += '[';
            render_into(out, t.inner(), TypeContext::Top);
            out += ']';
            break;
        case K::Map:
            out += t.injective ? "inmap " : "map ";
            render_into(out, t.domain(), t.domain().kind == K::Map ? TypeContext::Operand
                                                                   : TypeContext::Top);
            out += " to ";
            render_into(out, t.range(), TypeContext::Top);
            break;
        case K::Product:
            render_joined(out, t, " * ", TypeContext::Operand);
            break;
        case K::Union:
            render_joined(out, t, " | ", TypeContext::UnionMember);
            break;
    }
    if (parens) out += ')';
}

} // namespace detail

/// Renders a type in VDM++ concrete syntax, inserting only the parentheses
/// needed to preserve the tree's structure when parsed back.
inline std::string render(const VdmType& t) {
    std::string out;
    detail::render_into(out, t, detail::TypeContext::Top);
    return out;
}

/// Renders `t` as one operand of a `*`-separated list (signature domains).
inline std::string render_operand(const VdmType& t) {
    std::string out;
    detail::render_into(out, t, detail::TypeContext::Operand);
    return out;
}

} // namespace vdmuml
