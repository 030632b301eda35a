#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vdmuml/vdm_type.hpp"

namespace vdmuml {

enum class Access { Private, Protected, Public };

inline std::string_view to_keyword(Access a) {
    switch (a) {
        case Access::Public: return "public";
        case Access::Protected: return "protected";
        case Access::Private: return "private";
    }
    return "private";
}

inline char to_sigil(Access a) {
    switch (a) {
        case Access::Public: return '+';
        case Access::Protected: return '#';
        case Access::Private: return '-';
    }
    return '-';
}

// ---------------------------------------------------------------------------
// VDM++ abstract syntax

struct InstanceVariable {
    Access access = Access::Private;
    bool is_static = false;
    std::string name;
    VdmType var_type;
    std::optional<std::string> init_text;

    bool operator==(const InstanceVariable&) const = default;
};

struct ValueDef {
    Access access = Access::Private;
    std::string name;
    VdmType val_type;
    std::string expr_text;

    bool operator==(const ValueDef&) const = default;
};

struct TypeDef {
    Access access = Access::Private;
    std::string name;
    VdmType definition;

    bool operator==(const TypeDef&) const = default;
};

/// Explicit operation or function definition. The body is kept as raw text;
/// an absent body stands for the `is not yet specified` skeleton, in which
/// case `param_patterns` is empty and placeholders are printed instead.
struct Callable {
    Access access = Access::Private;
    bool is_static = false;
    std::string name;
    std::vector<VdmType> param_types;
    VdmType return_type = VdmType::unit();
    std::vector<std::string> param_patterns;
    std::optional<std::string> body_text;

    bool operator==(const Callable&) const = default;
};

struct OperationDef : Callable {
    bool operator==(const OperationDef&) const = default;
};

struct FunctionDef : Callable {
    bool operator==(const FunctionDef&) const = default;
};

struct VdmClass {
    std::string name;
    std::vector<std::string> superclasses;
    std::vector<InstanceVariable> instance_variables;
    std::vector<ValueDef> values;
    std::vector<TypeDef> type_defs;
    std::vector<OperationDef> operations;
    std::vector<FunctionDef> functions;

    bool operator==(const VdmClass&) const = default;

    bool empty() const {
        return instance_variables.empty() && values.empty() && type_defs.empty() &&
               operations.empty() && functions.empty();
    }
};

struct VdmModel {
    std::vector<VdmClass> classes;

    bool operator==(const VdmModel&) const = default;

    const VdmClass* find(std::string_view name) const {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const VdmClass& c) { return c.name == name; });
        return it == classes.end() ? nullptr : &*it;
    }

    std::set<std::string> class_names() const {
        std::set<std::string> out;
        for (const auto& c : classes) out.insert(c.name);
        return out;
    }
};

// ---------------------------------------------------------------------------
// UML class-diagram model

enum class AttributeStereotype { InstanceVariable, Value, Type };
enum class OperationStereotype { Operation, Function };

struct UmlAttribute {
    Access visibility = Access::Private;
    bool is_static = false;
    std::string name;
    std::string type_text;
    AttributeStereotype stereotype = AttributeStereotype::InstanceVariable;

    bool operator==(const UmlAttribute&) const = default;
};

struct UmlOperation {
    Access visibility = Access::Private;
    bool is_static = false;
    std::string name;
    std::vector<std::string> param_type_texts;
    std::string return_type_text = "()";
    OperationStereotype stereotype = OperationStereotype::Operation;

    bool operator==(const UmlOperation&) const = default;
};

struct UmlClass {
    std::string name;
    std::vector<UmlAttribute> attributes;
    std::vector<UmlOperation> operations;

    bool operator==(const UmlClass&) const = default;
};

struct UmlGeneralization {
    std::string child;
    std::string parent;

    bool operator==(const UmlGeneralization&) const = default;
};

/// Multiplicity of the target end of an association.
enum class Multiplicity { One, Opt, Set0, Set1, Seq0, Seq1 };

struct Qualifier {
    std::string type_text;
    bool unique = false;

    bool operator==(const Qualifier&) const = default;
};

struct UmlAssociation {
    std::string source;
    std::string target;
    std::string role_name;
    Access role_visibility = Access::Private;
    Multiplicity multiplicity = Multiplicity::One;
    std::optional<Qualifier> qualifier;

    bool operator==(const UmlAssociation&) const = default;
};

struct UmlModel {
    std::vector<UmlClass> classes;
    std::vector<UmlGeneralization> generalizations;
    std::vector<UmlAssociation> associations;

    bool operator==(const UmlModel&) const = default;

    const UmlClass* find(std::string_view name) const {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const UmlClass& c) { return c.name == name; });
        return it == classes.end() ? nullptr : &*it;
    }
};

// ---------------------------------------------------------------------------
// Translation parameters

enum class Ordering { InputOrder, Alphabetical };

struct Config {
    /// Capacity of set/seq/optional roots; map roots get twice this.
    std::uint32_t gamma0 = 2;
    /// Capacity of product/union roots.
    std::uint32_t gamma1 = 1;
    Ordering ordering = Ordering::InputOrder;

    bool operator==(const Config&) const = default;
};

// ---------------------------------------------------------------------------
// Diagnostics

struct SourceSpan {
    std::string file;
    std::uint32_t line = 1;
    std::uint32_t column = 1;

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string message;
    std::optional<std::string> expected;

    bool operator==(const ParseError&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;     // short machine-readable tag, e.g. "duplicate-class"
    std::string message;
    std::string subject;  // offending class or "Class.member"
    std::optional<SourceSpan> span;

    bool operator==(const Diagnostic&) const = default;
};

inline Diagnostic to_diagnostic(const ParseError& e) {
    std::string msg = e.message;
    if (e.expected) msg += " (expected " + *e.expected + ")";
    return {Severity::Error, "parse-error", std::move(msg), {}, e.span};
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

/// `path:line:col: severity: message`, or `path: severity: message` when the
/// diagnostic carries no position.
inline std::string format_diagnostic(const Diagnostic& d, std::string_view fallback_path = {}) {
    std::string out;
    if (d.span) {
        out += d.span->file;
        out += ':' + std::to_string(d.span->line) + ':' + std::to_string(d.span->column);
    } else {
        out += fallback_path.empty() ? std::string_view("<model>") : fallback_path;
    }
    out += d.severity == Severity::Error ? ": error: " : ": warning: ";
    out += d.message;
    return out;
}

// ---------------------------------------------------------------------------
// Validation

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9') || c == '\''; };
    if (!head(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), tail);
}

namespace detail {

inline Diagnostic error(std::string code, std::string message, std::string subject) {
    return {Severity::Error, std::move(code), std::move(message), std::move(subject), std::nullopt};
}

inline void check_type_shape(const VdmType& t, const std::string& subject,
                             std::vector<Diagnostic>& out) {
    using K = VdmType::Kind;
    if ((t.kind == K::Product || t.kind == K::Union) && t.args.size() < 2) {
        out.push_back(error("degenerate-type", "product and union types need at least two members",
                            subject));
    }
    if ((t.kind == K::Basic && !is_basic_type_name(t.name)) ||
        (t.kind == K::Named && !is_identifier(t.name))) {
        out.push_back(error("bad-type-name", "invalid type name '" + t.name + "'", subject));
    }
    for (const auto& a : t.args) check_type_shape(a, subject, out);
}

/// Reports inheritance cycles reachable through `parents_of`, once per cycle
/// entry point, in the order classes are listed.
inline void check_cycles(const std::vector<std::string>& order,
                         const std::map<std::string, std::vector<std::string>>& parents_of,
                         std::vector<Diagnostic>& out) {
    std::set<std::string> reported;
    for (const auto& start : order) {
        // Depth-first walk over ancestors looking for `start`.
        std::vector<std::string> stack{start};
        std::set<std::string> seen;
        bool cyclic = false;
        while (!stack.empty() && !cyclic) {
            auto cur = stack.back();
            stack.pop_back();
            auto it = parents_of.find(cur);
            if (it == parents_of.end()) continue;
            for (const auto& p : it->second) {
                if (p == start) {
                    cyclic = true;
                    break;
                }
                if (seen.insert(p).second) stack.push_back(p);
            }
        }
        if (cyclic && reported.insert(start).second) {
            out.push_back(error("inheritance-cycle", "class '" + start + "' inherits from itself",
                                start));
        }
    }
}

} // namespace detail

/// Checks the structural invariants of a VDM model. Pure; diagnostics are
/// reported in class order, then member order.
inline std::vector<Diagnostic> validate_model(const VdmModel& model) {
    using detail::error;
    std::vector<Diagnostic> out;
    std::set<std::string> names;
    for (const auto& c : model.classes) {
        if (!is_identifier(c.name)) {
            out.push_back(error("bad-identifier", "invalid class name '" + c.name + "'", c.name));
        }
        if (!names.insert(c.name).second) {
            out.push_back(error("duplicate-class", "duplicate class '" + c.name + "'", c.name));
        }
    }
    std::map<std::string, std::vector<std::string>> parents_of;
    for (const auto& c : model.classes) {
        std::set<std::string> supers;
        for (const auto& s : c.superclasses) {
            if (!supers.insert(s).second) {
                out.push_back(error("duplicate-superclass",
                                    "class '" + c.name + "' lists superclass '" + s + "' twice",
                                    c.name));
            }
            if (s == c.name) {
                out.push_back(error("self-inheritance",
                                    "class '" + c.name + "' cannot be its own superclass", c.name));
            } else if (!names.count(s)) {
                out.push_back(error("unresolved-superclass",
                                    "superclass '" + s + "' of class '" + c.name +
                                        "' is not defined",
                                    c.name));
            }
        }
        auto& ps = parents_of[c.name];
        for (const auto& s : supers) {
            if (s != c.name) ps.push_back(s);
        }

        std::set<std::string> members;
        auto member = [&](const std::string& n) {
            const std::string subject = c.name + "." + n;
            if (!is_identifier(n)) {
                out.push_back(error("bad-identifier", "invalid member name '" + n + "'", subject));
            }
            if (!members.insert(n).second) {
                out.push_back(error("duplicate-member",
                                    "member '" + n + "' is defined more than once in class '" +
                                        c.name + "'",
                                    subject));
            }
            return subject;
        };
        for (const auto& v : c.values) detail::check_type_shape(v.val_type, member(v.name), out);
        for (const auto& t : c.type_defs) detail::check_type_shape(t.definition, member(t.name), out);
        for (const auto& iv : c.instance_variables) {
            detail::check_type_shape(iv.var_type, member(iv.name), out);
        }
        auto callable = [&](const Callable& f) {
            auto subject = member(f.name);
            for (const auto& p : f.param_types) detail::check_type_shape(p, subject, out);
            detail::check_type_shape(f.return_type, subject, out);
        };
        for (const auto& o : c.operations) callable(o);
        for (const auto& f : c.functions) callable(f);
    }
    std::vector<std::string> order;
    for (const auto& c : model.classes) order.push_back(c.name);
    detail::check_cycles(order, parents_of, out);
    return out;
}

/// Checks the structural invariants of a UML model, including Rule-7 role
/// names and endpoint resolution.
inline std::vector<Diagnostic> validate_uml(const UmlModel& model) {
    using detail::error;
    std::vector<Diagnostic> out;
    std::set<std::string> names;
    for (const auto& c : model.classes) {
        if (!is_identifier(c.name)) {
            out.push_back(error("bad-identifier", "invalid class name '" + c.name + "'", c.name));
        }
        if (!names.insert(c.name).second) {
            out.push_back(error("duplicate-class", "duplicate class '" + c.name + "'", c.name));
        }
    }

    std::map<std::string, std::set<std::string>> members_of;
    for (const auto& c : model.classes) {
        auto& members = members_of[c.name];
        auto member = [&](const std::string& n) {
            const std::string subject = c.name + "." + n;
            if (!is_identifier(n)) {
                out.push_back(error("bad-identifier", "invalid member name '" + n + "'", subject));
            }
            if (!members.insert(n).second) {
                out.push_back(error("duplicate-member",
                                    "member '" + n + "' is defined more than once in class '" +
                                        c.name + "'",
                                    subject));
            }
            return subject;
        };
        for (const auto& a : c.attributes) {
            auto subject = member(a.name);
            if (a.stereotype == AttributeStereotype::Value && a.is_static) {
                out.push_back(error("static-value", "values cannot be static", subject));
            }
            if (a.stereotype == AttributeStereotype::Type && a.is_static) {
                out.push_back(error("static-type", "types cannot be static", subject));
            }
            if (a.type_text.empty()) {
                out.push_back(error("missing-type", "attribute '" + a.name + "' has no type",
                                    subject));
            }
        }
        for (const auto& o : c.operations) member(o.name);
    }

    std::map<std::string, std::vector<std::string>> parents_of;
    for (const auto& g : model.generalizations) {
        const std::string subject = g.child + " <|-- " + g.parent;
        if (g.child == g.parent) {
            out.push_back(error("self-inheritance",
                                "class '" + g.child + "' cannot inherit from itself", g.child));
            continue;
        }
        for (const auto* end : {&g.child, &g.parent}) {
            if (!names.count(*end)) {
                out.push_back(error("unresolved-class",
                                    "generalization names unknown class '" + *end + "'", subject));
            }
        }
        auto& ps = parents_of[g.child];
        if (std::find(ps.begin(), ps.end(), g.parent) != ps.end()) {
            out.push_back(error("duplicate-generalization",
                                "duplicate generalization " + g.parent + " <|-- " + g.child,
                                g.child));
        } else {
            ps.push_back(g.parent);
        }
    }
    std::vector<std::string> order;
    for (const auto& c : model.classes) order.push_back(c.name);
    detail::check_cycles(order, parents_of, out);

    for (const auto& a : model.associations) {
        const std::string subject = a.source + "." + a.role_name;
        if (a.role_name.empty()) {
            out.push_back(error("missing-role",
                                "association " + a.source + " --> " + a.target +
                                    " requires a role name",
                                a.source));
        } else if (!is_identifier(a.role_name)) {
            out.push_back(error("bad-identifier", "invalid role name '" + a.role_name + "'",
                                subject));
        }
        for (const auto* end : {&a.source, &a.target}) {
            if (!names.count(*end)) {
                out.push_back(error("unresolved-class",
                                    "association names unknown class '" + *end + "'", subject));
            }
        }
        if (!a.role_name.empty() && names.count(a.source) &&
            !members_of[a.source].insert(a.role_name).second) {
            out.push_back(error("duplicate-member",
                                "role '" + a.role_name + "' clashes with another member of class '" +
                                    a.source + "'",
                                subject));
        }
        if (a.qualifier && a.qualifier->type_text.empty()) {
            out.push_back(error("empty-qualifier", "qualifier has no type", subject));
        }
    }
    return out;
}

} // namespace vdmuml
