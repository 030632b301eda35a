#pragma once

// Paired rule-table fixtures: each <stem>.vdmpp has a matching <stem>.puml.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "vdmuml/vdmuml.hpp"

namespace vdmuml::testing {

struct GoldenPair {
    std::string stem;
    std::filesystem::path vdm;
    std::filesystem::path puml;
};

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

inline std::vector<GoldenPair> golden_pairs(const std::filesystem::path& dir) {
    std::vector<GoldenPair> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".vdmpp") continue;
        auto puml = e.path();
        puml.replace_extension(".puml");
        out.push_back({e.path().stem().string(), e.path(), puml});
    }
    std::sort(out.begin(), out.end(),
              [](const GoldenPair& a, const GoldenPair& b) { return a.stem < b.stem; });
    return out;
}

struct GoldenOutcome {
    bool forward = false;   // vdm2uml(vdm) matches the diagram
    bool backward = false;  // uml2vdm(diagram) matches the VDM up to skeletons
    std::string detail;
};

/// Both directions are compared structurally: the forward side through the
/// canonical printer, the backward side through `canonicalize`.
inline GoldenOutcome check_golden(const GoldenPair& g, const Config& config = {}) {
    GoldenOutcome r;
    auto vdm = parse_vdm(read_text(g.vdm), g.vdm.string());
    auto uml = parse_puml(read_text(g.puml), g.puml.string());
    if (!vdm) {
        r.detail = format_diagnostic(to_diagnostic(vdm.errors().front()));
        return r;
    }
    if (!uml) {
        r.detail = format_diagnostic(to_diagnostic(uml.errors().front()));
        return r;
    }
    const auto forward = print_puml(vdm_to_uml(vdm.value(), config), config);
    const auto expected = print_puml(uml.value(), config);
    r.forward = forward == expected;
    if (!r.forward) r.detail = "forward:\n" + forward + "\nexpected:\n" + expected;

    auto back = uml_to_vdm(uml.value());
    if (!back) {
        r.detail += "\nbackward: " + back.errors().front().message;
        return r;
    }
    r.backward = canonicalize(back.value()) == canonicalize(vdm.value());
    if (!r.backward) {
        std::string printed;
        for (const auto& [name, text] : print_vdm(back.value())) printed += text + "\n";
        r.detail += "\nbackward:\n" + printed;
    }
    return r;
}

} // namespace vdmuml::testing
