#include <doctest.h>

#include <algorithm>

#include "preface/preface.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace preface;
using namespace preface::testing;

namespace {

std::vector<std::string> ids(const std::vector<Package>& packages)
{
    std::vector<std::string> out;
    for (const auto& p : packages) {
        out.push_back(p.id);
    }
    return out;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& diags)
{
    std::vector<std::string> out;
    for (const auto& d : diags) {
        out.push_back(d.code);
    }
    return out;
}

Literal int_lit(std::int64_t v) { return v; }

// The two import orders of a project over a toolsmith and a client package
// that disagree on one key.
PackageRepository versions_repo()
{
    return repo_of({
        R"(package "T" { const vendor = "toolsmith" const shared_t = 1 })",
        R"(package "C" { const vendor = "client" const shared_c = 2 })",
        R"(package "P-v1" { import "T" import "C" })",
        R"(package "P-v2" { import "C" import "T" })",
    });
}

}  // namespace

TEST_CASE("flatten_imports emits imports in listed order before the importer")
{
    auto repo = repo_of({
        R"(package "T" {})",
        R"(package "C" {})",
        R"(package "P" { import "T" import "C" })",
    });
    CHECK(ids(flatten_imports(repo, "P")) == std::vector<std::string>{"T", "C", "P"});
    CHECK(ids(flatten_imports(repo, "T")) == std::vector<std::string>{"T"});
}

TEST_CASE("diamond imports keep the shared base earliest")
{
    auto repo = repo_of({
        R"(package "Base" {})",
        R"(package "X" { import "Base" })",
        R"(package "Y" { import "Base" })",
        R"(package "P" { import "X" import "Y" })",
    });
    const auto order = ids(flatten_imports(repo, "P"));
    CHECK(order == std::vector<std::string>{"Base", "X", "Y", "P"});
    CHECK(order == oracle::flatten_ids(repo, "P"));
}

TEST_CASE("flattening matches the full-expansion oracle and respects import order")
{
    Rng rng(21);
    for (int round = 0; round < 300; ++round) {
        std::string root;
        auto repo = random_repository(rng, 6, 3, root);
        const auto order = ids(flatten_imports(repo, root));
        REQUIRE(order == oracle::flatten_ids(repo, root));
        CHECK(order.back() == root);
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (const auto& imp : repo.packages.at(order[i]).imports) {
                auto pos = std::find(order.begin(), order.end(), imp) - order.begin();
                CHECK(static_cast<std::size_t>(pos) < i);
            }
        }
    }
}

TEST_CASE("composition errors")
{
    SUBCASE("unknown root")
    {
        PackageRepository repo;
        try {
            flatten_imports(repo, "nope");
            FAIL("expected a composition error");
        } catch (const CompositionError& e) {
            CHECK(e.kind() == CompositionError::Kind::unknown_root);
        }
    }
    SUBCASE("unknown import")
    {
        auto repo = repo_of({R"(package "P" { import "Ghost" })"});
        try {
            flatten_imports(repo, "P");
            FAIL("expected a composition error");
        } catch (const CompositionError& e) {
            CHECK(e.kind() == CompositionError::Kind::unknown_import);
            CHECK(e.importer() == "P");
            CHECK(e.missing() == "Ghost");
        }
    }
    SUBCASE("cycle")
    {
        auto repo = repo_of({
            R"(package "A" { import "B" })",
            R"(package "B" { import "A" })",
        });
        try {
            flatten_imports(repo, "A");
            FAIL("expected a composition error");
        } catch (const CompositionError& e) {
            CHECK(e.kind() == CompositionError::Kind::cycle);
            CHECK(e.cycle() == std::vector<std::string>{"A", "B", "A"});
            CHECK(std::string(e.what()) == "import cycle: A -> B -> A");
        }
    }
}

TEST_CASE("the max example resolves to the project value")
{
    const auto eff = compose(max_repo(), "project-p");
    auto max = lookup_scalar(eff, "max");
    REQUIRE(max);
    CHECK(max->value == int_lit(8));
    CHECK(max->provenance.package_id == "project-p");
    CHECK(max->provenance.definition_index == 1);

    auto chain = explain(eff, "max");
    REQUIRE(chain);
    REQUIRE(chain->entries.size() == 2);
    CHECK(chain->entries[0].package_id == "uml-core");
    CHECK(chain->entries[0].value == int_lit(10));
    CHECK(chain->entries[1].package_id == "project-p");
    CHECK(chain->winner().value == max->value);
}

TEST_CASE("an empty composition has only option defaults")
{
    const auto eff = resolve({});
    CHECK_FALSE(lookup_scalar(eff, "max"));
    CHECK_FALSE(explain(eff, "max"));
    CHECK(eff.scalars.size() == option_catalogue().size());
    for (const auto& spec : option_catalogue()) {
        auto b = lookup_scalar(eff, spec.key);
        REQUIRE(b);
        CHECK(b->provenance.is_default());
        CHECK(b->provenance.package_id == kCatalogueDefault);
        CHECK(b->value == Literal(std::string(spec.default_value)));
        CHECK(eff.option(spec.key) == spec.default_value);
        CHECK(explain(eff, spec.key)->entries.size() == 1);
    }
    CHECK(eff.predicated.empty());
    CHECK(eff.constraints.empty());
    CHECK(eff.flattened_order.empty());
}

TEST_CASE("a single definer wins with its own value")
{
    const auto eff = preface_with("const limit = \"x\"");
    CHECK(lookup_scalar(eff, "limit")->value == Literal(std::string("x")));
    CHECK(explain(eff, "limit")->entries.size() == 1);
}

TEST_CASE("option catalogue")
{
    CHECK(option_catalogue().size() == 6);
    const std::pair<std::string_view, std::string_view> defaults[] = {
        {options::kAggregation, "weak"},
        {options::kAttachTo, "class"},
        {options::kUnexpectedEvent, "error"},
        {options::kMultipleInheritance, "allowed"},
        {options::kFraming, "unconstrained"},
        {options::kCommunication, "procedure_call"},
    };
    for (const auto& [key, value] : defaults) {
        REQUIRE(find_option(key));
        CHECK(find_option(key)->default_value == value);
    }
    CHECK(find_option(options::kCommunication)->domain.size() == 3);
    CHECK_FALSE(find_option("statechart.colour"));
}

TEST_CASE("order sensitivity: the later import wins")
{
    const auto repo = versions_repo();
    const auto v1 = compose(repo, "P-v1");
    const auto v2 = compose(repo, "P-v2");
    CHECK(lookup_scalar(v1, "vendor")->value == Literal(std::string("client")));
    CHECK(lookup_scalar(v1, "vendor")->provenance.package_id == "C");
    CHECK(lookup_scalar(v2, "vendor")->value == Literal(std::string("toolsmith")));
    CHECK(lookup_scalar(v2, "vendor")->provenance.package_id == "T");
    CHECK(lookup_scalar(v1, "shared_t")->value == lookup_scalar(v2, "shared_t")->value);
}

TEST_CASE("definitions in the body beat every import")
{
    Rng rng(31);
    for (int round = 0; round < 200; ++round) {
        std::string root;
        auto repo = random_repository(rng, 5, 6, root);
        Package& top = repo.packages.at(root);
        top.definitions.push_back({ConstDef{"max", int_lit(round)}, {}});
        top.definitions.push_back({OptionDef{std::string(options::kUnexpectedEvent), "ignore"}, {}});
        const auto eff = compose(repo, root);
        CHECK(lookup_scalar(eff, "max")->value == int_lit(round));
        CHECK(lookup_scalar(eff, "max")->provenance.package_id == root);
        CHECK(eff.option(options::kUnexpectedEvent) == "ignore");
    }
}

TEST_CASE("resolve agrees with the sequential replay oracle")
{
    Rng rng(41);
    for (int round = 0; round < 300; ++round) {
        std::string root;
        auto repo = random_repository(rng, 6, 10, root);
        const auto flat = flatten_imports(repo, root);
        const auto eff = resolve(flat);
        const std::string diff = oracle::compare_with_replay(flat, eff);
        CAPTURE(round);
        CHECK(diff.empty());
        for (const auto& [key, binding] : eff.scalars) {
            CHECK(explain(eff, key)->winner().value == binding.value);
        }
    }
}

TEST_CASE("provenance indices increase along every chain")
{
    Rng rng(43);
    for (int round = 0; round < 100; ++round) {
        std::string root;
        const auto eff = compose(random_repository(rng, 6, 10, root), root);
        for (const auto& [key, history] : eff.scalar_history) {
            for (std::size_t i = 1; i < history.size(); ++i) {
                REQUIRE(history[i].provenance.definition_index);
                if (history[i - 1].provenance.definition_index) {
                    CHECK(*history[i - 1].provenance.definition_index < *history[i].provenance.definition_index);
                }
            }
        }
        for (const auto& [key, chain] : eff.predicated) {
            for (std::size_t i = 1; i < chain.size(); ++i) {
                CHECK(*chain[i - 1].provenance.definition_index > *chain[i].provenance.definition_index);
            }
        }
    }
}

TEST_CASE("swapping disjoint imports changes nothing observable")
{
    Rng rng(47);
    ModelShape shape;
    for (int round = 0; round < 150; ++round) {
        Package a = random_package(rng, "A", {}, 8);
        Package b = random_package(rng, "B", {}, 8);
        // Keep only what B does not also define, so the two are disjoint.
        std::set<std::string> a_keys;
        for (const auto& d : a.definitions) {
            if (const auto* c = std::get_if<ConstDef>(&d.body)) a_keys.insert("k:" + c->key);
            if (const auto* o = std::get_if<OptionDef>(&d.body)) a_keys.insert("k:" + o->key);
            if (const auto* c = std::get_if<ConstraintDef>(&d.body)) a_keys.insert("c:" + c->name);
            if (const auto* r = std::get_if<PredicatedRuleDef>(&d.body)) a_keys.insert("r:" + r->property);
        }
        std::erase_if(b.definitions, [&](const Definition& d) {
            if (const auto* c = std::get_if<ConstDef>(&d.body)) return a_keys.count("k:" + c->key) > 0;
            if (const auto* o = std::get_if<OptionDef>(&d.body)) return a_keys.count("k:" + o->key) > 0;
            if (const auto* c = std::get_if<ConstraintDef>(&d.body)) return a_keys.count("c:" + c->name) > 0;
            if (const auto* r = std::get_if<PredicatedRuleDef>(&d.body)) return a_keys.count("r:" + r->property) > 0;
            return false;
        });
        PackageRepository repo;
        repo.add(a);
        repo.add(b);
        repo.add(package_from(R"(package "AB" { import "A" import "B" })"));
        repo.add(package_from(R"(package "BA" { import "B" import "A" })"));
        const auto ab = compose(repo, "AB");
        const auto ba = compose(repo, "BA");

        REQUIRE(ab.scalars.size() == ba.scalars.size());
        for (const auto& [key, binding] : ab.scalars) {
            const auto& other = ba.scalars.at(key);
            CHECK(binding.value == other.value);
            CHECK(binding.provenance.package_id == other.provenance.package_id);
        }
        REQUIRE(ab.constraints.size() == ba.constraints.size());
        for (const auto& [name, reg] : ab.constraints) {
            CHECK(reg.def == ba.constraints.at(name).def);
        }
        const Model m = random_model(rng, shape);
        for (const auto& [property, chain] : ab.predicated) {
            for (const auto& ref : all_elements(m)) {
                auto x = resolve_predicated(ab, property, ref, m);
                auto y = resolve_predicated(ba, property, ref, m);
                REQUIRE(x.has_value() == y.has_value());
                if (x) {
                    CHECK(x->value == y->value);
                    CHECK(x->provenance.package_id == y->provenance.package_id);
                }
            }
        }
    }
}

TEST_CASE("same-name constraints are replaced wholesale")
{
    const auto eff = preface_with(R"(
        constraint c on Class severity warning : true
        constraint d on Class : false
        constraint c on Operation : size(self.name) = 0
    )");
    REQUIRE(eff.constraints.size() == 2);
    const auto& c = eff.constraints.at("c");
    CHECK(c.def.scope == ElementKind::Operation);
    CHECK(c.def.severity == Severity::error);
    CHECK(c.provenance.definition_index == 2);
    auto ordered = eff.ordered_constraints();
    CHECK(ordered[0]->def.name == "d");
    CHECK(ordered[1]->def.name == "c");
}

TEST_CASE("predicated chains are newest first")
{
    const auto eff = preface_with(R"(
        rule persistence when all = persistent
        rule persistence when stereotype(event) = transient
    )");
    const auto& chain = eff.predicated.at("persistence");
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].value == "transient");
    CHECK(chain[1].value == "persistent");
}

TEST_CASE("persistence: event classes are transient, everything else persistent")
{
    const auto eff = preface_with(R"(
        stereotype event on Class
        rule persistence when all = persistent
        rule persistence when stereotype(event) = transient
    )");
    Model m = three_states();
    ClassDef ev;
    ev.name = "Tick";
    ev.stereotypes.insert("event");
    m.classes.push_back(ev);

    auto c = resolve_predicated(eff, "persistence", *lookup_element(m, "C"), m);
    auto tick = resolve_predicated(eff, "persistence", *lookup_element(m, "Tick"), m);
    REQUIRE(c);
    REQUIRE(tick);
    CHECK(c->value == "persistent");
    CHECK(tick->value == "transient");
    CHECK(tick->provenance.definition_index == 2);
    CHECK(resolve_predicated(eff, "persistence", *lookup_element(m, "C.m1"), m)->value == "persistent");
}

TEST_CASE("no applicable rule")
{
    const Model m = three_states();
    const auto ref = *lookup_element(m, "C");
    CHECK_FALSE(resolve_predicated(resolve({}), "persistence", ref, m));
    const auto eff = preface_with("rule persistence when metaclass(Operation) = transient");
    CHECK_FALSE(resolve_predicated(eff, "persistence", ref, m));
    CHECK(resolve_predicated(eff, "persistence", *lookup_element(m, "C.m2"), m)->value == "transient");
}

TEST_CASE("resolve_predicated matches the longhand if-then-else")
{
    Rng rng(53);
    const std::vector<std::string> stereos = {"event", "entity", "control"};
    for (int round = 0; round < 200; ++round) {
        const Model m = random_model(rng);
        std::vector<PredicatedRuleDef> rules;
        const auto length = std::uniform_int_distribution<int>(0, 5)(rng);
        Package pkg;
        pkg.id = "p";
        for (int i = 0; i < length; ++i) {
            PredicatedRuleDef r;
            r.property = "persistence";
            r.value = "v" + std::to_string(i);
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: r.predicate = pred::All{}; break;
            case 1: r.predicate = pred::HasStereotype{stereos[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]}; break;
            default:
                r.predicate = pred::IsMetaclass{static_cast<ElementKind>(std::uniform_int_distribution<int>(0, 5)(rng))};
            }
            rules.push_back(r);
            pkg.definitions.push_back({r, {}});
        }
        const auto eff = resolve(std::vector<Package>{pkg});
        for (const auto& ref : all_elements(m)) {
            auto actual = resolve_predicated(eff, "persistence", ref, m);
            auto expected = oracle::longhand_rule(rules, m, ref);
            REQUIRE(actual.has_value() == expected.has_value());
            if (actual) {
                CHECK(actual->value == *expected);
            }
        }
    }
}

TEST_CASE("validate_preface accepts a clean repository")
{
    auto repo = repo_of({
        R"(package "uml-core" { const max = 10 stereotype event on Class tagdef table : string
                               rule persistence when all = persistent })",
        R"(package "T" { import "uml-core" transform statechart-to-class on })",
        R"(package "C" { import "uml-core" rule persistence when stereotype(event) = transient })",
        R"(package "P" { import "T" import "C" const max = 8 option statechart.unexpected_event = ignore })",
    });
    CHECK(validate_preface(repo, "P").empty());
}

TEST_CASE("validate_preface reports definition problems")
{
    SUBCASE("value outside the option domain")
    {
        auto repo = repo_of({R"(package "p" { option statechart.unexpected_event = defer })"});
        auto diags = validate_preface(repo, "p");
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].code == "E104");
        CHECK(diags[0].message.find("not in {error, ignore}") != std::string::npos);
        CHECK(diags[0].path == "p");
    }
    SUBCASE("unknown option")
    {
        auto repo = repo_of({R"(package "p" { option statechart.colour = red })"});
        CHECK(codes(validate_preface(repo, "p")) == std::vector<std::string>{"E103"});
    }
    SUBCASE("unknown root and import")
    {
        auto repo = repo_of({R"(package "p" { import "q" })"});
        CHECK(codes(validate_preface(repo, "zz")) == std::vector<std::string>{"E100"});
        CHECK(codes(validate_preface(repo, "p")) == std::vector<std::string>{"E101"});
    }
    SUBCASE("transitive cycle")
    {
        auto repo = repo_of({
            R"(package "a" { import "b" })",
            R"(package "b" { import "c" })",
            R"(package "c" { import "a" })",
        });
        auto diags = validate_preface(repo, "a");
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].code == "E102");
        CHECK(diags[0].message == "import cycle: a -> b -> c -> a");
    }
    SUBCASE("self import built in memory")
    {
        PackageRepository repo;
        Package p;
        p.id = "self";
        p.imports = {"self"};
        repo.add(p);
        CHECK(codes(validate_preface(repo, "self")) == std::vector<std::string>{"E102"});
    }
    SUBCASE("duplicates within one package")
    {
        auto repo = repo_of({R"(package "p" { stereotype s on Class stereotype s on Class tagdef t : int tagdef t : bool })"});
        CHECK(codes(validate_preface(repo, "p")) == std::vector<std::string>{"E105", "E106"});
    }
    SUBCASE("the same stereotype in two packages is a redefinition, not a duplicate")
    {
        auto repo = repo_of({
            R"(package "a" { stereotype s on Class })",
            R"(package "b" { import "a" stereotype s on Class })",
        });
        CHECK(validate_preface(repo, "b").empty());
    }
    SUBCASE("shadowing a stereotype on another metaclass warns")
    {
        auto repo = repo_of({
            R"(package "a" { stereotype s on Class })",
            R"(package "b" { import "a" stereotype s on Operation })",
        });
        auto diags = validate_preface(repo, "b");
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].code == "W102");
        CHECK(diags[0].severity == Severity::warning);
        CHECK(compose(repo, "b").stereotypes.at("s").def.base == ElementKind::Operation);
    }
    SUBCASE("rules and stereotypes referring to undeclared names")
    {
        auto repo = repo_of({R"(package "p" { rule persistence when stereotype(ghost) = transient
                                               stereotype s on Class requires missing
                                               transform other-thing on })"});
        CHECK(codes(validate_preface(repo, "p")) == std::vector<std::string>{"W101", "W103", "W104"});
    }
}

TEST_CASE("metaclass names")
{
    CHECK(parse_metaclass("Class") == ElementKind::Class);
    CHECK(parse_metaclass("Attribute") == ElementKind::Attribute);
    CHECK(parse_metaclass("Operation") == ElementKind::Operation);
    CHECK(parse_metaclass("Statechart") == ElementKind::Statechart);
    CHECK(parse_metaclass("Transition") == ElementKind::Transition);
    CHECK_FALSE(parse_metaclass("State"));
    CHECK_FALSE(parse_metaclass("class"));
}

TEST_CASE("transform selections follow last-wins")
{
    CHECK(preface_with("transform statechart-to-class on").transform_enabled(kStatechartToClass));
    CHECK_FALSE(preface_with("transform statechart-to-class on transform statechart-to-class off")
                    .transform_enabled(kStatechartToClass));
    CHECK_FALSE(resolve({}).transform_enabled(kStatechartToClass));
}
