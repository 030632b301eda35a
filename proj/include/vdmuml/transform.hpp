#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vdmuml/model.hpp"
#include "vdmuml/result.hpp"
#include "vdmuml/vdm_parser.hpp"
#include "vdmuml/vdm_printer.hpp"

namespace vdmuml {

// ---------------------------------------------------------------------------
// Instance-variable classification

struct AssociationPlan {
    std::string target;
    Multiplicity multiplicity = Multiplicity::One;
    std::optional<Qualifier> qualifier;

    bool operator==(const AssociationPlan&) const = default;
};

struct AttributePlan {
    std::string type_text;

    bool operator==(const AttributePlan&) const = default;
};

using MemberPlan = std::variant<AssociationPlan, AttributePlan>;

namespace detail {

/// Multiplicity of an un-qualified association shape, if `t` is one.
inline std::optional<std::pair<std::string, Multiplicity>> association_shape(
    const VdmType& t, const std::set<std::string>& class_names) {
    using K = VdmType::Kind;
    auto class_ref = [&](const VdmType& x) {
        return x.kind == K::Named && class_names.count(x.name) > 0;
    };
    if (class_ref(t)) return std::pair{t.name, Multiplicity::One};
    if (!is_collection(t.kind) || !class_ref(t.inner())) return std::nullopt;
    const auto& target = t.inner().name;
    switch (t.kind) {
        case K::Optional: return std::pair{target, Multiplicity::Opt};
        case K::Set: return std::pair{target, Multiplicity::Set0};
        case K::Set1: return std::pair{target, Multiplicity::Set1};
        case K::Seq: return std::pair{target, Multiplicity::Seq0};
        case K::Seq1: return std::pair{target, Multiplicity::Seq1};
        default: return std::nullopt;
    }
}

} // namespace detail

/// Decides whether an instance variable of type `var_type` is drawn as an
/// association or kept as an attribute. Depends only on the type tree and
/// the set of class names.
inline MemberPlan classify_instance_variable(const VdmType& var_type,
                                             const std::set<std::string>& class_names) {
    if (auto shape = detail::association_shape(var_type, class_names)) {
        return AssociationPlan{shape->first, shape->second, std::nullopt};
    }
    if (var_type.kind == VdmType::Kind::Map) {
        if (auto shape = detail::association_shape(var_type.range(), class_names)) {
            return AssociationPlan{shape->first, shape->second,
                                   Qualifier{render(var_type.domain()), var_type.injective}};
        }
    }
    return AttributePlan{render(var_type)};
}

/// Inverse of the association shapes: the reference type for a target end.
inline VdmType multiplicity_to_type(Multiplicity m, const std::string& target) {
    auto ref = VdmType::named(target);
    switch (m) {
        case Multiplicity::One: return ref;
        case Multiplicity::Opt: return VdmType::optional(std::move(ref));
        case Multiplicity::Set0: return VdmType::set(std::move(ref));
        case Multiplicity::Set1: return VdmType::set1(std::move(ref));
        case Multiplicity::Seq0: return VdmType::seq(std::move(ref));
        case Multiplicity::Seq1: return VdmType::seq1(std::move(ref));
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Type abstraction

enum class AbstractionGroup { C0, C1, NotCompound };

inline AbstractionGroup abstraction_group(const VdmType& t) {
    if (is_collection(t.kind) || t.kind == VdmType::Kind::Map) return AbstractionGroup::C0;
    if (t.kind == VdmType::Kind::Product || t.kind == VdmType::Kind::Union) {
        return AbstractionGroup::C1;
    }
    return AbstractionGroup::NotCompound;
}

namespace detail {

inline std::size_t count_non_basic(const VdmType& t) {
    std::size_t n = is_basic(t) ? 0 : 1;
    for (const auto& a : t.args) n += count_non_basic(a);
    return n;
}

} // namespace detail

/// Number of non-basic nodes strictly below a compound root.
inline std::size_t complexity(const VdmType& t) {
    if (abstraction_group(t) == AbstractionGroup::NotCompound) {
        throw std::invalid_argument("complexity() requires a compound type, got '" + render(t) + "'");
    }
    std::size_t n = 0;
    for (const auto& a : t.args) n += detail::count_non_basic(a);
    return n;
}

/// How many non-basic inner nodes a compound root may hold before abstraction.
inline std::size_t capacity(const VdmType& t, const Config& config) {
    switch (abstraction_group(t)) {
        case AbstractionGroup::C0:
            return t.kind == VdmType::Kind::Map ? 2 * std::size_t{config.gamma0} : config.gamma0;
        case AbstractionGroup::C1:
            return config.gamma1;
        case AbstractionGroup::NotCompound:
            break;
    }
    throw std::invalid_argument("capacity() requires a compound type, got '" + render(t) + "'");
}

inline bool exceeds_capacity(const VdmType& t, const Config& config) {
    return abstraction_group(t) != AbstractionGroup::NotCompound &&
           complexity(t) > capacity(t, config);
}

namespace detail {

inline std::string symbol_run(const VdmType& t) {
    const char sym = t.kind == VdmType::Kind::Product ? '*' : '|';
    return std::string(t.args.size() - 1, sym);
}

/// Placeholder for an immediate sub-type of an abstracted C0 root.
inline std::string marker(const VdmType& t) {
    using K = VdmType::Kind;
    switch (t.kind) {
        case K::Set:
        case K::Set1: return "set...";
        case K::Seq:
        case K::Seq1: return "seq...";
        case K::Optional: return "[...]";
        case K::Map: return "map...";
        case K::Product:
        case K::Union: return symbol_run(t);
        default: return render(t);
    }
}

} // namespace detail

/// Renders `t` for a UML attribute, eliding inner structure once the root's
/// capacity is exceeded.
inline std::string abstract_type(const VdmType& t, const Config& config) {
    using K = VdmType::Kind;
    if (!exceeds_capacity(t, config)) return render(t);
    switch (t.kind) {
        case K::Product:
        case K::Union: return detail::symbol_run(t);
        case K::Set: return "set of " + detail::marker(t.inner());
        case K::Set1: return "set1 of " + detail::marker(t.inner());
        case K::Seq: return "seq of " + detail::marker(t.inner());
        case K::Seq1: return "seq1 of " + detail::marker(t.inner());
        case K::Optional: return "[" + detail::marker(t.inner()) + "]";
        case K::Map:
            return std::string(t.injective ? "inmap " : "map ") + detail::marker(t.domain()) +
                   " to " + detail::marker(t.range());
        default: return render(t);
    }
}

// ---------------------------------------------------------------------------
// VDM -> UML

/// Forward translation. Static instance variables stay attributes because an
/// association end cannot carry the static flag.
inline UmlModel vdm_to_uml(const VdmModel& model, const Config& config = {}) {
    const auto class_names = model.class_names();
    UmlModel out;
    for (const auto& c : model.classes) {
        UmlClass uc;
        uc.name = c.name;
        for (const auto& v : c.values) {
            uc.attributes.push_back({v.access, false, v.name, abstract_type(v.val_type, config),
                                     AttributeStereotype::Value});
        }
        for (const auto& t : c.type_defs) {
            uc.attributes.push_back({t.access, false, t.name, abstract_type(t.definition, config),
                                     AttributeStereotype::Type});
        }
        for (const auto& iv : c.instance_variables) {
            auto plan = classify_instance_variable(iv.var_type, class_names);
            if (auto* assoc = std::get_if<AssociationPlan>(&plan); assoc && !iv.is_static) {
                out.associations.push_back({c.name, assoc->target, iv.name, iv.access,
                                            assoc->multiplicity, assoc->qualifier});
                continue;
            }
            uc.attributes.push_back({iv.access, iv.is_static, iv.name,
                                     abstract_type(iv.var_type, config),
                                     AttributeStereotype::InstanceVariable});
        }
        auto callable = [&](const Callable& f, OperationStereotype s) {
            UmlOperation op;
            op.visibility = f.access;
            op.is_static = f.is_static;
            op.name = f.name;
            for (const auto& p : f.param_types) op.param_type_texts.push_back(abstract_type(p, config));
            op.return_type_text = abstract_type(f.return_type, config);
            op.stereotype = s;
            uc.operations.push_back(std::move(op));
        };
        for (const auto& op : c.operations) callable(op, OperationStereotype::Operation);
        for (const auto& fn : c.functions) callable(fn, OperationStereotype::Function);
        for (const auto& s : c.superclasses) out.generalizations.push_back({c.name, s});
        out.classes.push_back(std::move(uc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// UML -> VDM

/// True when `text` carries abstraction markers (`...`, or `*`/`|` symbols
/// that are not between two type operands).
inline bool is_abstracted_text(std::string_view text) {
    if (text.find("...") != std::string_view::npos) return true;
    auto toks = lex::Lexer(text, "<type>").run();
    if (!toks) return false;
    const auto& ts = toks.value();
    auto keyword = [](const lex::Token& t) {
        return t.is("of") || t.is("to") || t.is("map") || t.is("inmap") || t.is("set") ||
               t.is("set1") || t.is("seq") || t.is("seq1");
    };
    auto operand_end = [&](const lex::Token& t) {
        return (t.kind == lex::TokenKind::Ident && !keyword(t)) || t.is(")") || t.is("]");
    };
    auto operand_start = [&](const lex::Token& t) {
        return (t.kind == lex::TokenKind::Ident && !t.is("of") && !t.is("to")) || t.is("(") ||
               t.is("[");
    };
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        if (t.is("**") || t.is("||")) return true;
        if (!t.is("*") && !t.is("|")) continue;
        if (i == 0 || !operand_end(ts[i - 1])) return true;
        if (i + 1 >= ts.size() || !operand_start(ts[i + 1])) return true;
    }
    return false;
}

namespace detail {

inline std::optional<VdmType> back_translate_type(const std::string& text, const std::string& subject,
                                                  std::vector<Diagnostic>& errors) {
    if (is_abstracted_text(text)) {
        errors.push_back(error("abstracted-type",
                               "type \"" + text + "\" of " + subject +
                                   " is abstracted and is not back-translatable",
                               subject));
        return std::nullopt;
    }
    auto t = parse_vdm_type(text);
    if (!t) {
        errors.push_back(error("bad-type",
                               "type \"" + text + "\" of " + subject + " is not a VDM++ type: " +
                                   t.errors().front().message,
                               subject));
        return std::nullopt;
    }
    return std::move(t).value();
}

} // namespace detail

/// Reverse translation that skips untranslatable members, recording one
/// diagnostic for each in `errors`.
inline VdmModel uml_to_vdm_partial(const UmlModel& model, std::vector<Diagnostic>& errors) {
    VdmModel out;
    std::map<std::string, std::size_t> index;
    for (const auto& uc : model.classes) {
        VdmClass c;
        c.name = uc.name;
        for (const auto& a : uc.attributes) {
            auto t = detail::back_translate_type(a.type_text, uc.name + "." + a.name, errors);
            if (!t) continue;
            switch (a.stereotype) {
                case AttributeStereotype::Value:
                    c.values.push_back({a.visibility, a.name, std::move(*t),
                                        std::string(kUndefinedValue)});
                    break;
                case AttributeStereotype::Type:
                    c.type_defs.push_back({a.visibility, a.name, std::move(*t)});
                    break;
                case AttributeStereotype::InstanceVariable:
                    c.instance_variables.push_back(
                        {a.visibility, a.is_static, a.name, std::move(*t), std::nullopt});
                    break;
            }
        }
        for (const auto& op : uc.operations) {
            const std::string subject = uc.name + "." + op.name;
            Callable f;
            f.access = op.visibility;
            f.is_static = op.is_static;
            f.name = op.name;
            bool ok = true;
            for (const auto& p : op.param_type_texts) {
                auto t = detail::back_translate_type(p, subject, errors);
                if (t) {
                    f.param_types.push_back(std::move(*t));
                } else {
                    ok = false;
                }
            }
            auto ret = detail::back_translate_type(op.return_type_text, subject, errors);
            if (!ret || !ok) continue;
            f.return_type = std::move(*ret);
            if (op.stereotype == OperationStereotype::Function) {
                FunctionDef fn;
                static_cast<Callable&>(fn) = std::move(f);
                c.functions.push_back(std::move(fn));
            } else {
                OperationDef o;
                static_cast<Callable&>(o) = std::move(f);
                c.operations.push_back(std::move(o));
            }
        }
        index[c.name] = out.classes.size();
        out.classes.push_back(std::move(c));
    }
    for (const auto& g : model.generalizations) {
        if (auto it = index.find(g.child); it != index.end()) {
            out.classes[it->second].superclasses.push_back(g.parent);
        }
    }
    for (const auto& a : model.associations) {
        const std::string subject = a.source + "." + a.role_name;
        auto it = index.find(a.source);
        if (it == index.end()) {
            errors.push_back(detail::error("unresolved-class",
                                           "association source '" + a.source + "' is not a class",
                                           subject));
            continue;
        }
        auto type = multiplicity_to_type(a.multiplicity, a.target);
        if (a.qualifier) {
            auto dom = detail::back_translate_type(a.qualifier->type_text, subject, errors);
            if (!dom) continue;
            type = VdmType::map(std::move(*dom), std::move(type), a.qualifier->unique);
        }
        out.classes[it->second].instance_variables.push_back(
            {a.role_visibility, false, a.role_name, std::move(type), std::nullopt});
    }
    return out;
}

/// Reverse translation producing skeleton classes. Fails with one diagnostic
/// per member whose type text cannot be turned back into a VDM type.
inline Result<VdmModel, Diagnostic> uml_to_vdm(const UmlModel& model) {
    std::vector<Diagnostic> errors;
    auto out = uml_to_vdm_partial(model, errors);
    if (!errors.empty()) return errors;
    return out;
}

// ---------------------------------------------------------------------------
// Comparison helpers

/// Normal form used to compare models across a round trip: bodies and
/// initializers become skeletons and every member list is sorted by name.
inline VdmModel canonicalize(VdmModel m) {
    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    for (auto& c : m.classes) {
        for (auto& iv : c.instance_variables) iv.init_text.reset();
        for (auto& v : c.values) v.expr_text = std::string(kUndefinedValue);
        auto strip = [](Callable& f) {
            f.body_text.reset();
            f.param_patterns.clear();
        };
        for (auto& op : c.operations) strip(op);
        for (auto& fn : c.functions) strip(fn);
        std::stable_sort(c.instance_variables.begin(), c.instance_variables.end(), by_name);
        std::stable_sort(c.values.begin(), c.values.end(), by_name);
        std::stable_sort(c.type_defs.begin(), c.type_defs.end(), by_name);
        std::stable_sort(c.operations.begin(), c.operations.end(), by_name);
        std::stable_sort(c.functions.begin(), c.functions.end(), by_name);
    }
    return m;
}

/// Names of members that differ between two versions of a class; members
/// missing on one side are reported too. Class-level differences are
/// reported as "<superclasses>".
inline std::vector<std::string> diff_members(const VdmClass& a, const VdmClass& b) {
    std::vector<std::string> out;
    if (a.superclasses != b.superclasses) out.push_back("<superclasses>");
    auto compare = [&](const auto& xs, const auto& ys) {
        std::set<std::string> names;
        for (const auto& x : xs) names.insert(x.name);
        for (const auto& y : ys) names.insert(y.name);
        for (const auto& n : names) {
            auto fx = std::find_if(xs.begin(), xs.end(), [&](const auto& x) { return x.name == n; });
            auto fy = std::find_if(ys.begin(), ys.end(), [&](const auto& y) { return y.name == n; });
            if (fx == xs.end() || fy == ys.end() || !(*fx == *fy)) out.push_back(n);
        }
    };
    compare(a.values, b.values);
    compare(a.type_defs, b.type_defs);
    compare(a.instance_variables, b.instance_variables);
    compare(a.operations, b.operations);
    compare(a.functions, b.functions);
    return out;
}

} // namespace vdmuml
