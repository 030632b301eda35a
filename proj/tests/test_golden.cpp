#include <catch_amalgamated.hpp>

#include "support/golden.hpp"

using namespace vdmuml;

TEST_CASE("rule tables translate in both directions", "[golden]") {
    const auto pairs = testing::golden_pairs(VDMUML_FIXTURES "/rules");
    REQUIRE(pairs.size() == 15);
    for (const auto& g : pairs) {
        SECTION(g.stem) {
            REQUIRE(std::filesystem::exists(g.puml));
            const auto r = testing::check_golden(g);
            INFO(r.detail);
            CHECK(r.forward);
            CHECK(r.backward);
        }
    }
}

TEST_CASE("rule tables print back to parseable VDM", "[golden]") {
    for (const auto& g : testing::golden_pairs(VDMUML_FIXTURES "/rules")) {
        auto uml = parse_puml(testing::read_text(g.puml));
        REQUIRE(uml.ok());
        auto vdm = uml_to_vdm(uml.value());
        REQUIRE(vdm.ok());
        std::string source;
        for (const auto& [name, text] : print_vdm(vdm.value())) source += text + "\n";
        auto reparsed = parse_vdm(source);
        CAPTURE(g.stem, source);
        REQUIRE(reparsed.ok());
        CHECK(reparsed.value() == vdm.value());
    }
}

TEST_CASE("qualified multiplicity keeps the line-broken type", "[golden]") {
    auto m = parse_vdm(testing::read_text(VDMUML_FIXTURES "/rules/r09_2_qualified_multiplicity.vdmpp"));
    REQUIRE(m.ok());
    CHECK(print_puml(vdm_to_uml(m.value())).find("A [(Type)] --> \"(0..*)\" B : quali1") !=
          std::string::npos);
}
