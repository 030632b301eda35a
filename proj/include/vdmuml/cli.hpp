#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vdmuml/model.hpp"
#include "vdmuml/puml_parser.hpp"
#include "vdmuml/puml_printer.hpp"
#include "vdmuml/transform.hpp"
#include "vdmuml/vdm_parser.hpp"
#include "vdmuml/vdm_printer.hpp"

namespace vdmuml::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kIoError = 2, kUsage = 64 };

/// Outcome of one command. `out` lines go to standard output, `diagnostics`
/// to standard error.
struct RunReport {
    std::vector<std::string> files_read;
    std::vector<std::string> files_written;
    std::vector<std::string> diagnostics;
    std::vector<std::string> out;
    int exit_code = kOk;
};

// ---------------------------------------------------------------------------
// Configuration

struct ConfigFlags {
    std::optional<std::string> gamma0;
    std::optional<std::string> gamma1;
    std::optional<std::string> ordering;
};

struct UsageError {
    std::string message;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline EnvLookup process_environment() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

namespace detail {

inline std::optional<std::uint32_t> parse_capacity(const std::string& s) {
    std::uint32_t v = 0;
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (s.empty() || ec != std::errc{} || p != e) return std::nullopt;
    return v;
}

} // namespace detail

/// Resolves capacities and ordering: flags override VDMUML_GAMMA0 /
/// VDMUML_GAMMA1, which override the defaults.
inline Result<Config, UsageError> load_config(const ConfigFlags& flags, const EnvLookup& env) {
    Config config;
    std::vector<UsageError> errors;
    auto resolve = [&](const std::optional<std::string>& flag, const char* flag_name,
                       const char* env_name, std::uint32_t& slot) {
        std::optional<std::string> raw = flag;
        std::string source = std::string("--") + flag_name;
        if (!raw) {
            raw = env(env_name);
            source = env_name;
        }
        if (!raw) return;
        if (auto v = detail::parse_capacity(*raw)) {
            slot = *v;
        } else {
            errors.push_back({source + " must be a non-negative integer, got '" + *raw + "'"});
        }
    };
    resolve(flags.gamma0, "gamma0", "VDMUML_GAMMA0", config.gamma0);
    resolve(flags.gamma1, "gamma1", "VDMUML_GAMMA1", config.gamma1);
    if (flags.ordering) {
        if (*flags.ordering == "input") {
            config.ordering = Ordering::InputOrder;
        } else if (*flags.ordering == "alpha") {
            config.ordering = Ordering::Alphabetical;
        } else {
            errors.push_back({"--ordering must be 'input' or 'alpha', got '" + *flags.ordering + "'"});
        }
    }
    if (!errors.empty()) return errors;
    return config;
}

// ---------------------------------------------------------------------------
// File helpers

namespace detail {

inline std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return ss.str();
}

inline bool write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

/// Expands inputs into a sorted list of `.vdmpp` files. Unreadable or
/// missing inputs are reported in `missing`.
inline std::vector<fs::path> collect_vdm_files(const std::vector<std::string>& inputs,
                                               std::vector<std::string>& missing) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        std::error_code ec;
        const fs::path p(in);
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (auto it = fs::recursive_directory_iterator(p, ec);
                 !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (it->is_regular_file(ec) && it->path().extension() == ".vdmpp") {
                    found.push_back(it->path());
                }
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p, ec)) {
            out.push_back(p);
        } else {
            missing.push_back(in);
        }
    }
    return out;
}

/// `<workspace-name>.puml` beside the inputs.
inline fs::path default_puml_output(const std::vector<std::string>& inputs) {
    const fs::path first(inputs.front());
    std::error_code ec;
    if (inputs.size() == 1 && fs::is_regular_file(first, ec)) {
        return first.parent_path() / (first.stem().string() + ".puml");
    }
    const fs::path dir = fs::is_directory(first, ec) ? first : first.parent_path();
    auto name = fs::absolute(dir, ec).lexically_normal().filename();
    if (name.empty()) name = fs::absolute(dir, ec).lexically_normal().parent_path().filename();
    if (name.empty()) name = "workspace";
    return dir / (name.string() + ".puml");
}

struct LoadedWorkspace {
    VdmModel model;
    bool io_error = false;
    bool failed = false;
};

/// Parses every input into one combined model. Cross-file duplicate class
/// names are errors.
inline LoadedWorkspace load_workspace(const std::vector<std::string>& inputs, RunReport& report) {
    LoadedWorkspace ws;
    std::vector<std::string> missing;
    auto files = collect_vdm_files(inputs, missing);
    for (const auto& m : missing) {
        report.diagnostics.push_back(m + ": error: cannot read input");
        ws.io_error = ws.failed = true;
    }
    if (ws.failed) return ws;
    if (files.empty()) {
        report.diagnostics.push_back("error: no .vdmpp files found");
        ws.failed = true;
        return ws;
    }
    std::map<std::string, std::string> defined_in;
    for (const auto& f : files) {
        const auto path = f.generic_string();
        auto text = read_file(f);
        if (!text) {
            report.diagnostics.push_back(path + ": error: cannot read file");
            ws.io_error = ws.failed = true;
            continue;
        }
        report.files_read.push_back(path);
        auto parsed = parse_vdm(*text, path);
        if (!parsed) {
            for (const auto& e : parsed.errors()) {
                report.diagnostics.push_back(format_diagnostic(to_diagnostic(e)));
            }
            ws.failed = true;
            continue;
        }
        for (auto& c : std::move(parsed).value().classes) {
            auto [it, fresh] = defined_in.emplace(c.name, path);
            if (!fresh) {
                report.diagnostics.push_back(path + ": error: duplicate class '" + c.name +
                                             "' (also defined in " + it->second + ")");
                ws.failed = true;
                continue;
            }
            ws.model.classes.push_back(std::move(c));
        }
    }
    if (ws.failed) return ws;
    auto diags = validate_model(ws.model);
    for (const auto& d : diags) {
        auto it = defined_in.find(d.subject.substr(0, d.subject.find('.')));
        report.diagnostics.push_back(
            format_diagnostic(d, it == defined_in.end() ? std::string_view{} : it->second));
    }
    ws.failed = has_errors(diags);
    return ws;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands

/// VDM++ workspace to a single `.puml` file.
inline RunReport cmd_vdm2uml(const std::vector<std::string>& inputs,
                             const std::optional<std::string>& output, const Config& config) {
    RunReport report;
    if (inputs.empty()) {
        report.diagnostics.push_back("error: no inputs given");
        report.exit_code = kUsage;
        return report;
    }
    auto ws = detail::load_workspace(inputs, report);
    if (ws.failed) {
        report.exit_code = ws.io_error ? kIoError : kFailure;
        return report;
    }
    const auto uml = vdm_to_uml(ws.model, config);
    std::size_t abstracted = 0;
    const auto names = ws.model.class_names();
    for (const auto& c : ws.model.classes) {
        for (const auto& v : c.values) abstracted += exceeds_capacity(v.val_type, config);
        for (const auto& t : c.type_defs) abstracted += exceeds_capacity(t.definition, config);
        for (const auto& iv : c.instance_variables) {
            const bool assoc = !iv.is_static && std::holds_alternative<AssociationPlan>(
                                                    classify_instance_variable(iv.var_type, names));
            if (!assoc) abstracted += exceeds_capacity(iv.var_type, config);
        }
    }
    const fs::path out_path = output ? fs::path(*output) : detail::default_puml_output(inputs);
    if (!detail::write_file(out_path, print_puml(uml, config) + "\n")) {
        report.diagnostics.push_back(out_path.generic_string() + ": error: cannot write output");
        report.exit_code = kIoError;
        return report;
    }
    report.files_written.push_back(out_path.generic_string());
    report.out.push_back("classes: " + std::to_string(uml.classes.size()) +
                         ", associations: " + std::to_string(uml.associations.size()) +
                         ", abstracted attributes: " + std::to_string(abstracted));
    report.out.push_back("wrote " + out_path.generic_string());
    return report;
}

/// `.puml` file to one `<ClassName>.vdmpp` skeleton per class.
inline RunReport cmd_uml2vdm(const std::string& input, const std::optional<std::string>& output_dir) {
    RunReport report;
    auto text = detail::read_file(input);
    if (!text) {
        report.diagnostics.push_back(input + ": error: cannot read input");
        report.exit_code = kIoError;
        return report;
    }
    report.files_read.push_back(input);
    auto parsed = parse_puml(*text, input);
    if (!parsed) {
        for (const auto& e : parsed.errors()) {
            report.diagnostics.push_back(format_diagnostic(to_diagnostic(e)));
        }
        report.exit_code = kFailure;
        return report;
    }
    auto diags = validate_uml(parsed.value());
    for (const auto& d : diags) report.diagnostics.push_back(format_diagnostic(d, input));
    if (has_errors(diags)) {
        report.exit_code = kFailure;
        return report;
    }
    auto model = uml_to_vdm(parsed.value());
    if (!model) {
        for (const auto& d : model.errors()) report.diagnostics.push_back(format_diagnostic(d, input));
        report.exit_code = kFailure;
        return report;
    }
    const fs::path dir = output_dir ? fs::path(*output_dir) : fs::path(input).parent_path();
    std::error_code ec;
    if (!dir.empty()) fs::create_directories(dir, ec);
    if (ec) {
        report.diagnostics.push_back(dir.generic_string() + ": error: cannot create directory");
        report.exit_code = kIoError;
        return report;
    }
    for (const auto& [name, source] : print_vdm(model.value())) {
        const auto path = dir / (name + ".vdmpp");
        if (!detail::write_file(path, source + "\n")) {
            report.diagnostics.push_back(path.generic_string() + ": error: cannot write output");
            report.exit_code = kIoError;
            return report;
        }
        report.files_written.push_back(path.generic_string());
        report.out.push_back("wrote " + path.generic_string());
    }
    return report;
}

/// vdm -> uml -> vdm in memory, reporting PASS/FAIL per class.
inline RunReport cmd_roundtrip(const std::vector<std::string>& inputs, const Config& config) {
    RunReport report;
    if (inputs.empty()) {
        report.diagnostics.push_back("error: no inputs given");
        report.exit_code = kUsage;
        return report;
    }
    auto ws = detail::load_workspace(inputs, report);
    if (ws.failed) {
        report.exit_code = kIoError;
        return report;
    }
    const auto puml = print_puml(vdm_to_uml(ws.model, config), config);
    auto reparsed = parse_puml(puml, "<roundtrip>");
    if (!reparsed) {
        for (const auto& e : reparsed.errors()) {
            report.diagnostics.push_back(format_diagnostic(to_diagnostic(e)));
        }
        report.exit_code = kIoError;
        return report;
    }
    std::vector<Diagnostic> lossy;
    const auto back = canonicalize(uml_to_vdm_partial(reparsed.value(), lossy));
    const auto expected = canonicalize(ws.model);

    bool all_pass = true;
    for (const auto& c : expected.classes) {
        std::vector<std::string> problems;
        for (const auto& d : lossy) {
            if (d.subject.substr(0, d.subject.find('.')) == c.name) {
                problems.push_back(d.subject.substr(d.subject.find('.') + 1) + " (" + d.message + ")");
            }
        }
        const auto* got = back.find(c.name);
        if (!got) {
            problems.push_back("class missing after round trip");
        } else if (problems.empty() && !(*got == c)) {
            for (const auto& m : diff_members(c, *got)) problems.push_back(m + " differs");
        }
        if (problems.empty()) {
            report.out.push_back("PASS " + c.name);
            continue;
        }
        all_pass = false;
        std::string line = "FAIL " + c.name + ":";
        for (std::size_t i = 0; i < problems.size(); ++i) line += (i ? ", " : " ") + problems[i];
        report.out.push_back(line);
    }
    report.exit_code = all_pass ? kOk : kFailure;
    return report;
}

/// Parse and validate only. Accepts `.puml` files, `.vdmpp` files and
/// directories of `.vdmpp` files.
inline RunReport cmd_check(const std::string& input) {
    RunReport report;
    if (fs::path(input).extension() == ".puml") {
        auto text = detail::read_file(input);
        if (!text) {
            report.diagnostics.push_back(input + ": error: cannot read input");
            report.exit_code = kIoError;
            return report;
        }
        report.files_read.push_back(input);
        auto parsed = parse_puml(*text, input);
        if (!parsed) {
            for (const auto& e : parsed.errors()) {
                report.diagnostics.push_back(format_diagnostic(to_diagnostic(e)));
            }
            report.exit_code = kFailure;
            return report;
        }
        auto diags = validate_uml(parsed.value());
        for (const auto& d : diags) report.diagnostics.push_back(format_diagnostic(d, input));
        report.exit_code = has_errors(diags) ? kFailure : kOk;
        if (report.exit_code == kOk) {
            report.out.push_back(input + ": ok (" + std::to_string(parsed->classes.size()) +
                                 " classes)");
        }
        return report;
    }
    auto ws = detail::load_workspace({input}, report);
    if (ws.failed) {
        report.exit_code = ws.io_error ? kIoError : kFailure;
        return report;
    }
    report.out.push_back(input + ": ok (" + std::to_string(ws.model.classes.size()) + " classes)");
    return report;
}

} // namespace vdmuml::cli
