#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "vdmuml/model.hpp"

namespace vdmuml {

/// Canonical label for a target-end multiplicity; empty for One.
inline std::string_view multiplicity_label(Multiplicity m) {
    switch (m) {
        case Multiplicity::One: return "";
        case Multiplicity::Opt: return "0..1";
        case Multiplicity::Set0: return "0..*";
        case Multiplicity::Set1: return "1..*";
        case Multiplicity::Seq0: return "(0..*)";
        case Multiplicity::Seq1: return "(1..*)";
    }
    return "";
}

namespace detail {

inline std::string member_prefix(Access vis, bool is_static) {
    std::string out(1, to_sigil(vis));
    out += ' ';
    if (is_static) out += "{static} ";
    return out;
}

inline std::string print_attribute(const UmlAttribute& a) {
    std::string out = member_prefix(a.visibility, a.is_static) + a.name + " : " + a.type_text;
    if (a.stereotype == AttributeStereotype::Value) out += " <<value>>";
    if (a.stereotype == AttributeStereotype::Type) out += " <<type>>";
    return out;
}

inline std::string print_operation(const UmlOperation& op) {
    std::string out = member_prefix(op.visibility, op.is_static) + op.name + '(';
    for (std::size_t i = 0; i < op.param_type_texts.size(); ++i) {
        if (i) out += ", ";
        out += op.param_type_texts[i];
    }
    out += ')';
    if (op.return_type_text != "()") out += " : " + op.return_type_text;
    if (op.stereotype == OperationStereotype::Function) out += " <<function>>";
    return out;
}

inline std::string print_association(const UmlAssociation& a) {
    std::string out = a.source;
    if (a.qualifier) {
        out += a.qualifier->unique ? " [(" + a.qualifier->type_text + ")]"
                                   : " [" + a.qualifier->type_text + "]";
    }
    out += " -->";
    if (auto label = multiplicity_label(a.multiplicity); !label.empty()) {
        out += " \"" + std::string(label) + "\"";
    }
    out += ' ' + a.target + " : ";
    if (a.role_visibility != Access::Private) {
        out += to_sigil(a.role_visibility);
        out += ' ';
    }
    out += a.role_name;
    return out;
}

} // namespace detail

/// Prints a model as PlantUML-for-VDM text: class blocks, then inheritance
/// arrows, then associations. Members keep model order. No trailing newline.
inline std::string print_puml(const UmlModel& model, const Config& config = {}) {
    std::vector<const UmlClass*> classes;
    for (const auto& c : model.classes) classes.push_back(&c);
    auto generalizations = model.generalizations;
    auto associations = model.associations;
    if (config.ordering == Ordering::Alphabetical) {
        std::stable_sort(classes.begin(), classes.end(),
                         [](const UmlClass* a, const UmlClass* b) { return a->name < b->name; });
        std::stable_sort(generalizations.begin(), generalizations.end(),
                         [](const UmlGeneralization& a, const UmlGeneralization& b) {
                             return std::tie(a.parent, a.child) < std::tie(b.parent, b.child);
                         });
        std::stable_sort(associations.begin(), associations.end(),
                         [](const UmlAssociation& a, const UmlAssociation& b) {
                             return std::tie(a.source, a.role_name) < std::tie(b.source, b.role_name);
                         });
    }

    std::string out = "@startuml\n";
    for (const auto* c : classes) {
        out += "class " + c->name + " {\n";
        for (const auto& a : c->attributes) out += "  " + detail::print_attribute(a) + '\n';
        for (const auto& op : c->operations) out += "  " + detail::print_operation(op) + '\n';
        out += "}\n";
    }
    for (const auto& g : generalizations) out += g.parent + " <|-- " + g.child + '\n';
    for (const auto& a : associations) out += detail::print_association(a) + '\n';
    out += "@enduml";
    return out;
}

} // namespace vdmuml
