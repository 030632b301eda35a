// vdmuml: translate between VDM++ and PlantUML class diagrams.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vdmuml/cli.hpp"

namespace {

int emit(const vdmuml::cli::RunReport& report) {
    for (const auto& line : report.out) std::cout << line << '\n';
    for (const auto& line : report.diagnostics) std::cerr << line << '\n';
    return report.exit_code;
}

void add_config_flags(CLI::App* cmd, vdmuml::cli::ConfigFlags& flags) {
    cmd->add_option("--gamma0", flags.gamma0, "capacity of set/seq/optional types (map: twice this)");
    cmd->add_option("--gamma1", flags.gamma1, "capacity of product/union types");
    cmd->add_option("--ordering", flags.ordering, "class order in the diagram: input|alpha");
}

} // namespace

int main(int argc, char** argv) {
    using namespace vdmuml::cli;

    CLI::App app{"Bidirectional translator between VDM++ and PlantUML class diagrams", "vdmuml"};
    app.require_subcommand(1);

    std::vector<std::string> inputs;
    std::string input;
    std::optional<std::string> output;
    ConfigFlags flags;

    auto* vdm2uml = app.add_subcommand("vdm2uml", "translate .vdmpp files or folders to one .puml");
    vdm2uml->add_option("inputs", inputs, ".vdmpp files or directories")->required();
    vdm2uml->add_option("-o,--output", output, "output .puml file");
    add_config_flags(vdm2uml, flags);

    auto* uml2vdm = app.add_subcommand("uml2vdm", "translate a .puml file to .vdmpp skeletons");
    uml2vdm->add_option("input", input, "PlantUML-for-VDM file")->required();
    uml2vdm->add_option("-o,--output", output, "output directory");

    auto* roundtrip = app.add_subcommand("roundtrip", "check that VDM -> UML -> VDM is lossless");
    roundtrip->add_option("inputs", inputs, ".vdmpp files or directories")->required();
    add_config_flags(roundtrip, flags);

    auto* check = app.add_subcommand("check", "parse and validate a .vdmpp, folder or .puml input");
    check->add_option("input", input, "input to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto config = load_config(flags, process_environment());
    if (!config) {
        for (const auto& e : config.errors()) std::cerr << "usage error: " << e.message << '\n';
        return kUsage;
    }

    if (*vdm2uml) return emit(cmd_vdm2uml(inputs, output, *config));
    if (*uml2vdm) return emit(cmd_uml2vdm(input, output));
    if (*roundtrip) return emit(cmd_roundtrip(inputs, *config));
    if (*check) return emit(cmd_check(input));
    return kUsage;
}
