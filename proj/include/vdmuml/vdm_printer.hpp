#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vdmuml/model.hpp"

namespace vdmuml {

inline constexpr std::string_view kSkeletonBody = "is not yet specified";
inline constexpr std::string_view kUndefinedValue = "undefined";

namespace detail {

inline std::string modifiers(Access a, bool is_static) {
    std::string out(to_keyword(a));
    out += ' ';
    if (is_static) out += "static ";
    return out;
}

inline std::string signature_domain(const std::vector<VdmType>& params) {
    if (params.empty()) return "()";
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += " * ";
        out += render_operand(params[i]);
    }
    return out;
}

inline void print_callable(std::string& out, const Callable& f, std::string_view arrow) {
    out += modifiers(f.access, f.is_static);
    out += f.name + " : " + signature_domain(f.param_types) + ' ' + std::string(arrow) + ' ' +
           render(f.return_type) + '\n';
    out += f.name + '(';
    for (std::size_t i = 0; i < f.param_types.size(); ++i) {
        if (i) out += ", ";
        if (f.body_text && i < f.param_patterns.size()) {
            out += f.param_patterns[i];
        } else {
            out += 'p' + std::to_string(i + 1);
        }
    }
    out += ") == ";
    out += f.body_text ? *f.body_text : std::string(kSkeletonBody);
    out += ";\n";
}

} // namespace detail

/// Prints one class as VDM++ source. Blocks appear in the order values,
/// types, instance variables, operations, functions; empty blocks are
/// omitted. No trailing newline.
inline std::string print_vdm_class(const VdmClass& c) {
    std::string out = "class " + c.name;
    if (!c.superclasses.empty()) {
        out += " is subclass of ";
        for (std::size_t i = 0; i < c.superclasses.size(); ++i) {
            if (i) out += ", ";
            out += c.superclasses[i];
        }
    }
    out += '\n';
    if (!c.values.empty()) {
        out += "values\n";
        for (const auto& v : c.values) {
            out += detail::modifiers(v.access, false) + v.name + " : " + render(v.val_type) + " = " +
                   v.expr_text + ";\n";
        }
    }
    if (!c.type_defs.empty()) {
        out += "types\n";
        for (const auto& t : c.type_defs) {
            out += detail::modifiers(t.access, false) + t.name + " = " + render(t.definition) + ";\n";
        }
    }
    if (!c.instance_variables.empty()) {
        out += "instance variables\n";
        for (const auto& iv : c.instance_variables) {
            out += detail::modifiers(iv.access, iv.is_static) + iv.name + " : " + render(iv.var_type);
            if (iv.init_text) out += " := " + *iv.init_text;
            out += ";\n";
        }
    }
    if (!c.operations.empty()) {
        out += "operations\n";
        for (const auto& op : c.operations) detail::print_callable(out, op, "==>");
    }
    if (!c.functions.empty()) {
        out += "functions\n";
        for (const auto& fn : c.functions) detail::print_callable(out, fn, "->");
    }
    out += "end " + c.name;
    return out;
}

/// One (class name, source text) unit per class, in model order.
inline std::vector<std::pair<std::string, std::string>> print_vdm(const VdmModel& model) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(model.classes.size());
    for (const auto& c : model.classes) out.emplace_back(c.name, print_vdm_class(c));
    return out;
}

} // namespace vdmuml
