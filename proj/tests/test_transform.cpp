#include <catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "vdmuml/puml_parser.hpp"
#include "vdmuml/puml_printer.hpp"
#include "vdmuml/transform.hpp"

using namespace vdmuml;
using K = VdmType::Kind;

namespace {

VdmType N(const char* n) { return VdmType::named(n); }
VdmType B(const char* n) { return VdmType::basic(n); }

// Independent oracle: iterative walk over every node below the root,
// counting anything that is not a basic leaf or unit.
std::size_t oracle_complexity(const VdmType& root) {
    std::size_t n = 0;
    std::vector<const VdmType*> stack;
    for (const auto& a : root.args) stack.push_back(&a);
    while (!stack.empty()) {
        const auto* t = stack.back();
        stack.pop_back();
        if (t->kind != K::Basic && t->kind != K::Unit) ++n;
        for (const auto& a : t->args) stack.push_back(&a);
    }
    return n;
}

VdmClass cls(std::string name) {
    VdmClass c;
    c.name = std::move(name);
    return c;
}

InstanceVariable iv(std::string name, VdmType t, Access a = Access::Private) {
    return {a, false, std::move(name), std::move(t), std::nullopt};
}

} // namespace

TEST_CASE("forward translation of a plain association", "[transform][forward]") {
    auto a = cls("A");
    a.instance_variables.push_back(iv("assoc1", N("B")));
    const auto uml = vdm_to_uml(VdmModel{{a, cls("B")}});
    REQUIRE(uml.associations.size() == 1);
    CHECK(uml.associations[0] ==
          UmlAssociation{"A", "B", "assoc1", Access::Private, Multiplicity::One, std::nullopt});
    CHECK(uml.classes[0].attributes.empty());
}

TEST_CASE("forward translation of a qualified association", "[transform][forward]") {
    auto a = cls("A");
    a.instance_variables.push_back(iv("quali1", VdmType::map(N("Type"), N("B"))));
    const auto uml = vdm_to_uml(VdmModel{{a, cls("B")}});
    REQUIRE(uml.associations.size() == 1);
    CHECK(uml.associations[0].qualifier == Qualifier{"Type", false});
    CHECK(print_puml(uml).find("A [Type] --> B : quali1") != std::string::npos);
}

TEST_CASE("collections of basics stay attributes", "[transform][forward]") {
    auto a = cls("A");
    a.instance_variables.push_back(iv("v", VdmType::set(B("nat"))));
    const auto uml = vdm_to_uml(VdmModel{{a}});
    CHECK(uml.associations.empty());
    REQUIRE(uml.classes[0].attributes.size() == 1);
    CHECK(uml.classes[0].attributes[0].type_text == "set of nat");
}

TEST_CASE("classification examples", "[transform][classify]") {
    const std::set<std::string> classes = {"B"};
    CHECK(std::get<AssociationPlan>(classify_instance_variable(VdmType::optional(N("B")), classes)) ==
          AssociationPlan{"B", Multiplicity::Opt, std::nullopt});
    CHECK(std::get<AssociationPlan>(classify_instance_variable(
              VdmType::map(N("Type"), VdmType::seq(N("B")), true), classes)) ==
          AssociationPlan{"B", Multiplicity::Seq0, Qualifier{"Type", true}});
    CHECK(std::holds_alternative<AttributePlan>(
        classify_instance_variable(VdmType::set(VdmType::set(N("B"))), classes)));
    // Domain referencing a class does not stop the qualified reading.
    CHECK(std::holds_alternative<AssociationPlan>(
        classify_instance_variable(VdmType::map(N("B"), N("B")), classes)));
    CHECK(std::holds_alternative<AttributePlan>(classify_instance_variable(N("Other"), classes)));
}

TEST_CASE("classification matches the rule shapes exhaustively", "[transform][classify][exhaustive]") {
    // Oracle: a type is an association iff it is R, or M(R), or map D to R / M(R)
    // with R a class reference and M a single collection constructor.
    const std::set<std::string> classes = {"B"};
    const std::vector<std::string> named = {"B", "T"};
    std::vector<VdmType> pool = {B("nat"), N("B"), N("T")};
    for (int round = 0; round < 2; ++round) {
        std::vector<VdmType> next = pool;
        for (const auto& x : pool) {
            next.push_back(VdmType::set(x));
            next.push_back(VdmType::set1(x));
            next.push_back(VdmType::seq(x));
            next.push_back(VdmType::seq1(x));
            next.push_back(VdmType::optional(x));
            next.push_back(VdmType::product({x, B("nat")}));
        }
        for (const auto& d : std::vector<VdmType>{B("nat"), N("B")}) {
            for (const auto& r : pool) {
                next.push_back(VdmType::map(d, r, false));
                next.push_back(VdmType::map(d, r, true));
            }
        }
        pool = std::move(next);
    }
    auto is_ref = [](const VdmType& t) { return t.kind == K::Named && t.name == "B"; };
    auto end_shape = [&](const VdmType& t) {
        return is_ref(t) || (is_collection(t.kind) && is_ref(t.inner()));
    };
    std::size_t assoc = 0;
    for (const auto& t : pool) {
        const bool expected = end_shape(t) || (t.kind == K::Map && end_shape(t.range()));
        const auto plan = classify_instance_variable(t, classes);
        CAPTURE(render(t));
        CHECK(std::holds_alternative<AssociationPlan>(plan) == expected);
        assoc += expected;
        if (const auto* a = std::get_if<AssociationPlan>(&plan)) {
            const auto& end = t.kind == K::Map ? t.range() : t;
            CHECK(multiplicity_to_type(a->multiplicity, a->target) == end);
        }
    }
    CHECK(assoc > 0);
    CHECK(pool.size() == 363);  // 3 -> 33 -> 363 over two rounds
}

TEST_CASE("complexity examples", "[transform][complexity]") {
    CHECK(complexity(VdmType::set(N("B"))) == 1);
    CHECK(complexity(VdmType::map(N("Type"), VdmType::seq(N("B")))) == 3);
    CHECK(complexity(VdmType::set(B("nat"))) == 0);
    CHECK_THROWS_AS(complexity(B("nat")), std::invalid_argument);
    CHECK_THROWS_AS(complexity(N("B")), std::invalid_argument);
}

TEST_CASE("complexity agrees with a node-walk oracle", "[transform][complexity][property]") {
    vdmuml::testing::Rng rng(11);
    const std::vector<std::string> named = {"A", "B"};
    std::size_t checked = 0;
    for (int i = 0; i < 5000; ++i) {
        const auto t = vdmuml::testing::random_type(rng, named, 5);
        if (!is_compound(t)) continue;
        CAPTURE(render(t));
        CHECK(complexity(t) == oracle_complexity(t));
        ++checked;
    }
    CHECK(checked > 1000);
}

TEST_CASE("capacity examples", "[transform][capacity]") {
    const Config c{};
    CHECK(capacity(VdmType::map(B("nat"), B("nat")), c) == 4);
    CHECK(capacity(VdmType::set(B("nat")), c) == 2);
    CHECK(capacity(VdmType::product({B("nat"), B("nat")}), c) == 1);
    CHECK(capacity(VdmType::optional(B("nat")), Config{7, 1}) == 7);
    CHECK(capacity(VdmType::union_of({B("nat"), B("bool")}), Config{7, 3}) == 3);
    CHECK_THROWS_AS(capacity(VdmType::unit(), c), std::invalid_argument);
}

TEST_CASE("abstraction examples", "[transform][abstract]") {
    CHECK(abstract_type(VdmType::product({N("A"), N("B"), N("C")}), Config{2, 1}) == "**");
    const auto deep = VdmType::map(B("nat"), VdmType::set(VdmType::seq(VdmType::seq(N("B")))));
    CHECK(complexity(deep) == 4);
    CHECK(abstract_type(deep, Config{1, 1}) == "map nat to set...");
    CHECK(abstract_type(deep, Config{2, 1}) == "map nat to set of seq of seq of B");
    CHECK(abstract_type(VdmType::set(N("B")), Config{}) == "set of B");
    CHECK(abstract_type(B("nat"), Config{0, 0}) == "nat");
}

TEST_CASE("abstraction markers per sub-type", "[transform][abstract]") {
    const Config tight{0, 0};
    CHECK(abstract_type(VdmType::seq(VdmType::optional(N("B"))), tight) == "seq of [...]");
    CHECK(abstract_type(VdmType::optional(VdmType::map(B("nat"), B("nat"))), tight) == "[map...]");
    CHECK(abstract_type(VdmType::set1(VdmType::product({B("nat"), B("nat"), B("nat")})), tight) ==
          "set1 of **");
    CHECK(abstract_type(VdmType::map(VdmType::seq1(B("nat")), VdmType::union_of({N("A"), N("B")}), true),
                        tight) == "inmap seq... to |");
    CHECK(abstract_type(VdmType::union_of({VdmType::set(B("nat")), N("A")}), tight) == "|");
}

TEST_CASE("abstracted text detection", "[transform][abstract]") {
    for (const char* yes : {"**", "|", "set of set...", "map nat to *", "[...]", "nat *", "| nat"}) {
        CAPTURE(yes);
        CHECK(is_abstracted_text(yes));
    }
    for (const char* no : {"nat * bool", "nat | bool", "set of (nat * bool)", "[nat] * [B]",
                           "map nat to seq of B", "()"}) {
        CAPTURE(no);
        CHECK_FALSE(is_abstracted_text(no));
    }
}

TEST_CASE("multiplicity back to types", "[transform][backward]") {
    CHECK(multiplicity_to_type(Multiplicity::Set1, "C") == VdmType::set1(N("C")));
    CHECK(render(multiplicity_to_type(Multiplicity::Set1, "C")) == "set1 of C");
    CHECK(multiplicity_to_type(Multiplicity::One, "B") == N("B"));
    CHECK(render(multiplicity_to_type(Multiplicity::Seq0, "B")) == "seq of B");
    CHECK(render(multiplicity_to_type(Multiplicity::Opt, "B")) == "[B]");
}

TEST_CASE("reverse translation of an association", "[transform][backward]") {
    UmlModel m;
    m.classes = {{"A", {}, {}}, {"B", {}, {}}};
    m.associations.push_back({"A", "B", "assoc1", Access::Private, Multiplicity::One, std::nullopt});
    auto vdm = uml_to_vdm(m);
    REQUIRE(vdm.ok());
    REQUIRE(vdm->classes[0].instance_variables.size() == 1);
    CHECK(vdm->classes[0].instance_variables[0] == iv("assoc1", N("B")));
    CHECK(print_vdm_class(vdm->classes[0]).find("private assoc1 : B;") != std::string::npos);
}

TEST_CASE("reverse translation of a unique qualified sequence", "[transform][backward]") {
    UmlModel m;
    m.classes = {{"A", {}, {}}, {"B", {}, {}}};
    m.associations.push_back(
        {"A", "B", "quali1", Access::Private, Multiplicity::Seq0, Qualifier{"Type", true}});
    auto vdm = uml_to_vdm(m);
    REQUIRE(vdm.ok());
    CHECK(print_vdm_class(vdm->classes[0]).find("quali1 : inmap Type to seq of B;") !=
          std::string::npos);
}

TEST_CASE("reverse translation of stereotyped attributes", "[transform][backward]") {
    UmlModel m;
    m.classes = {{"A",
                  {{Access::Public, false, "type1", "nat", AttributeStereotype::Type},
                   {Access::Private, false, "val1", "real", AttributeStereotype::Value}},
                  {{Access::Public, false, "f", {"nat"}, "nat", OperationStereotype::Function}}}};
    auto vdm = uml_to_vdm(m);
    REQUIRE(vdm.ok());
    const auto& c = vdm->classes[0];
    REQUIRE(c.type_defs.size() == 1);
    CHECK(c.type_defs[0] == TypeDef{Access::Public, "type1", B("nat")});
    REQUIRE(c.values.size() == 1);
    CHECK(c.values[0].expr_text == "undefined");
    REQUIRE(c.functions.size() == 1);
    CHECK_FALSE(c.functions[0].body_text);
}

TEST_CASE("abstracted and malformed types are refused", "[transform][backward][error]") {
    UmlModel m;
    m.classes = {{"A",
                  {{Access::Private, false, "x", "**", AttributeStereotype::InstanceVariable},
                   {Access::Private, false, "y", "set of", AttributeStereotype::InstanceVariable}},
                  {{Access::Private, false, "op", {"seq..."}, "()", OperationStereotype::Operation}}}};
    auto vdm = uml_to_vdm(m);
    REQUIRE_FALSE(vdm.ok());
    std::vector<std::string> got;
    for (const auto& d : vdm.errors()) got.push_back(d.code + ":" + d.subject);
    CHECK(got == std::vector<std::string>{"abstracted-type:A.x", "bad-type:A.y", "abstracted-type:A.op"});

    std::vector<Diagnostic> lossy;
    const auto partial = uml_to_vdm_partial(m, lossy);
    CHECK(lossy.size() == 3);
    CHECK(partial.classes[0].empty());
}

TEST_CASE("abstracted output is refused when fed back", "[transform][backward][error]") {
    auto a = cls("A");
    a.instance_variables.push_back(iv("p", VdmType::product({N("X"), N("Y"), N("Z")})));
    const auto uml = vdm_to_uml(VdmModel{{a}}, Config{2, 1});
    REQUIRE(uml.classes[0].attributes[0].type_text == "**");
    auto back = uml_to_vdm(uml);
    REQUIRE_FALSE(back.ok());
    CHECK(back.errors()[0].code == "abstracted-type");
}

TEST_CASE("static class references stay attributes", "[transform][forward]") {
    auto a = cls("A");
    auto s = iv("shared", N("A"));
    s.is_static = true;
    a.instance_variables.push_back(s);
    const auto uml = vdm_to_uml(VdmModel{{a}});
    CHECK(uml.associations.empty());
    REQUIRE(uml.classes[0].attributes.size() == 1);
    CHECK(uml.classes[0].attributes[0].is_static);
    auto back = uml_to_vdm(uml);
    REQUIRE(back.ok());
    CHECK(back->classes[0].instance_variables[0] == s);
}

TEST_CASE("counts, access and static flags are preserved", "[transform][property]") {
    vdmuml::testing::Rng rng(2718);
    const Config config{};
    for (int i = 0; i < 300; ++i) {
        const auto m = vdmuml::testing::random_uml_complete_vdm(rng, config, true);
        const auto uml = vdm_to_uml(m, config);
        REQUIRE(uml.classes.size() == m.classes.size());
        for (std::size_t k = 0; k < m.classes.size(); ++k) {
            const auto& vc = m.classes[k];
            const auto& uc = uml.classes[k];
            std::size_t outgoing = 0;
            for (const auto& a : uml.associations) outgoing += a.source == vc.name;
            CHECK(uc.attributes.size() + outgoing ==
                  vc.instance_variables.size() + vc.values.size() + vc.type_defs.size());
            CHECK(uc.operations.size() == vc.operations.size() + vc.functions.size());
            for (std::size_t j = 0; j < vc.operations.size(); ++j) {
                CHECK(uc.operations[j].visibility == vc.operations[j].access);
                CHECK(uc.operations[j].is_static == vc.operations[j].is_static);
            }
            for (const auto& v : vc.instance_variables) {
                auto attr = std::find_if(uc.attributes.begin(), uc.attributes.end(),
                                         [&](const UmlAttribute& x) { return x.name == v.name; });
                auto as = std::find_if(uml.associations.begin(), uml.associations.end(),
                                       [&](const UmlAssociation& x) {
                                           return x.source == vc.name && x.role_name == v.name;
                                       });
                if (attr != uc.attributes.end()) {
                    CHECK(attr->visibility == v.access);
                    CHECK(attr->is_static == v.is_static);
                } else {
                    REQUIRE(as != uml.associations.end());
                    CHECK(as->role_visibility == v.access);
                    CHECK_FALSE(v.is_static);
                }
            }
        }
    }
}

TEST_CASE("raising capacity never adds abstraction", "[transform][property]") {
    vdmuml::testing::Rng rng(1618);
    const std::vector<std::string> named = {"A", "B"};
    for (int i = 0; i < 3000; ++i) {
        const auto t = vdmuml::testing::random_type(rng, named, 5);
        for (std::uint32_t g0 = 0; g0 < 4; ++g0) {
            for (std::uint32_t g1 = 0; g1 < 3; ++g1) {
                if (exceeds_capacity(t, Config{g0 + 1, g1})) CHECK(exceeds_capacity(t, Config{g0, g1}));
                if (exceeds_capacity(t, Config{g0, g1 + 1})) CHECK(exceeds_capacity(t, Config{g0, g1}));
            }
        }
    }
}

TEST_CASE("abstraction looks only at the argument", "[transform][property]") {
    // The rendering of a member does not depend on the other members around it.
    vdmuml::testing::Rng rng(77);
    const std::vector<std::string> named = {"C0", "C1"};
    for (int i = 0; i < 200; ++i) {
        const auto t = vdmuml::testing::random_type(rng, named, 4);
        auto lone = cls("C0");
        lone.type_defs.push_back({Access::Private, "T", t});
        auto crowded = vdmuml::testing::random_uml_complete_vdm(rng, Config{}, false, 3, 10);
        crowded.classes[0].type_defs.insert(crowded.classes[0].type_defs.begin(),
                                            {Access::Private, "T", t});
        const Config c{1, 1};
        const auto a = vdm_to_uml(VdmModel{{lone, cls("C1")}}, c);
        const auto b = vdm_to_uml(crowded, c);
        auto named_t = [](const UmlClass& uc) {
            return *std::find_if(uc.attributes.begin(), uc.attributes.end(),
                                 [](const UmlAttribute& x) { return x.name == "T"; });
        };
        CHECK(named_t(a.classes[0]) == named_t(b.classes[0]));
    }
}
