#include "preface/preface.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace preface {

namespace {

const std::vector<OptionSpec>& catalogue()
{
    static const std::vector<OptionSpec> specs = {
        {options::kAggregation, {"strong", "weak"}, "weak"},
        {options::kAttachTo, {"class", "method"}, "class"},
        {options::kUnexpectedEvent, {"error", "ignore"}, "error"},
        {options::kMultipleInheritance, {"allowed", "forbidden"}, "allowed"},
        {options::kFraming, {"unmentioned_unchanged", "unconstrained"}, "unconstrained"},
        {options::kCommunication, {"synchronous", "asynchronous", "procedure_call"}, "procedure_call"},
    };
    return specs;
}

}  // namespace

std::span<const OptionSpec> option_catalogue() { return catalogue(); }

const OptionSpec* find_option(std::string_view key)
{
    for (const auto& spec : catalogue()) {
        if (spec.key == key) {
            return &spec;
        }
    }
    return nullptr;
}

std::optional<ElementKind> parse_metaclass(std::string_view text)
{
    if (text == "Class") return ElementKind::Class;
    if (text == "Attribute") return ElementKind::Attribute;
    if (text == "Operation") return ElementKind::Operation;
    if (text == "Statechart") return ElementKind::Statechart;
    if (text == "Transition") return ElementKind::Transition;
    return std::nullopt;
}

std::string_view to_string(TagType type)
{
    switch (type) {
    case TagType::string: return "string";
    case TagType::int_: return "int";
    case TagType::bool_: return "bool";
    }
    return "string";
}

bool operator==(const ConstraintDef& a, const ConstraintDef& b)
{
    return a.name == b.name && a.scope == b.scope && a.severity == b.severity && same_expr(a.body, b.body);
}

bool operator==(const Definition& a, const Definition& b) { return a.body == b.body; }

bool operator==(const Package& a, const Package& b)
{
    return a.id == b.id && a.imports == b.imports && a.definitions == b.definitions;
}

bool predicate_matches(const Predicate& predicate, const Model& model, const ElementRef& subject)
{
    return std::visit(
        [&](const auto& p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, pred::All>) {
                return true;
            } else if constexpr (std::is_same_v<T, pred::HasStereotype>) {
                return subject.kind == ElementKind::Class &&
                       model.classes.at(subject.owner).stereotypes.count(p.name) != 0;
            } else {
                return subject.kind == p.kind;
            }
        },
        predicate);
}

const Package* PackageRepository::find(std::string_view id) const
{
    auto it = packages.find(std::string(id));
    return it == packages.end() ? nullptr : &it->second;
}

void PackageRepository::add(Package package)
{
    std::string id = package.id;
    packages.insert_or_assign(std::move(id), std::move(package));
}

// ---------------------------------------------------------------------------

namespace {

std::string join_path(const std::vector<std::string>& ids)
{
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) {
            out += " -> ";
        }
        out += id;
    }
    return out;
}

/// Depth-first post-order walk of the import graph. Problems are reported to
/// the callbacks; the walk carries on past them so validation sees everything.
struct ImportWalk {
    const PackageRepository& repo;
    std::function<void(const Package& importer, const std::string& missing)> on_unknown;
    std::function<void(const Package& importer, std::vector<std::string> cycle)> on_cycle;

    std::vector<const Package*> order;
    std::unordered_set<std::string> emitted;
    std::vector<std::string> stack;

    void visit(const Package& pkg)
    {
        stack.push_back(pkg.id);
        for (const auto& imp : pkg.imports) {
            if (emitted.count(imp) != 0) {
                continue;
            }
            auto on_stack = std::find(stack.begin(), stack.end(), imp);
            if (on_stack != stack.end()) {
                std::vector<std::string> cycle(on_stack, stack.end());
                cycle.push_back(imp);
                on_cycle(pkg, std::move(cycle));
                continue;
            }
            const Package* next = repo.find(imp);
            if (!next) {
                on_unknown(pkg, imp);
                continue;
            }
            visit(*next);
        }
        stack.pop_back();
        emitted.insert(pkg.id);
        order.push_back(&pkg);
    }
};

}  // namespace

std::vector<Package> flatten_imports(const PackageRepository& repo, const std::string& root_id)
{
    const Package* root = repo.find(root_id);
    if (!root) {
        throw CompositionError(CompositionError::Kind::unknown_root, "unknown root package '" + root_id + "'",
                               {}, {}, root_id);
    }
    ImportWalk walk{
        repo,
        [](const Package& importer, const std::string& missing) {
            throw CompositionError(CompositionError::Kind::unknown_import,
                                   "package '" + importer.id + "' imports unknown package '" + missing + "'",
                                   {}, importer.id, missing);
        },
        [](const Package&, std::vector<std::string> cycle) {
            std::string message = "import cycle: " + join_path(cycle);
            throw CompositionError(CompositionError::Kind::cycle, std::move(message), std::move(cycle));
        },
        {}, {}, {}};
    walk.visit(*root);

    std::vector<Package> out;
    out.reserve(walk.order.size());
    for (const Package* p : walk.order) {
        out.push_back(*p);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string EffectiveDefinitions::option(std::string_view key) const
{
    auto it = scalars.find(std::string(key));
    if (it != scalars.end()) {
        if (const auto* s = std::get_if<std::string>(&it->second.value)) {
            return *s;
        }
    }
    const OptionSpec* spec = find_option(key);
    return spec ? std::string(spec->default_value) : std::string();
}

bool EffectiveDefinitions::transform_enabled(std::string_view id) const
{
    auto it = transforms.find(std::string(id));
    return it != transforms.end() && it->second.def;
}

std::vector<const Registered<ConstraintDef>*> EffectiveDefinitions::ordered_constraints() const
{
    std::vector<const Registered<ConstraintDef>*> out;
    for (const auto& [name, reg] : constraints) {
        out.push_back(&reg);
    }
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
        return a->provenance.definition_index < b->provenance.definition_index;
    });
    return out;
}

EffectiveDefinitions resolve(std::span<const Package> flattened)
{
    EffectiveDefinitions eff;
    for (const auto& spec : option_catalogue()) {
        ScalarBinding binding{std::string(spec.default_value), Provenance::catalogue_default(), true};
        eff.scalars.emplace(spec.key, binding);
        eff.scalar_history[std::string(spec.key)].push_back(std::move(binding));
    }

    auto set_scalar = [&](const std::string& key, ScalarBinding binding) {
        eff.scalars.insert_or_assign(key, binding);
        eff.scalar_history[key].push_back(std::move(binding));
    };

    std::size_t index = 0;
    for (const auto& pkg : flattened) {
        eff.flattened_order.push_back(pkg.id);
        for (const auto& def : pkg.definitions) {
            Provenance prov{pkg.id, index++};
            std::visit(
                [&](const auto& d) {
                    using T = std::decay_t<decltype(d)>;
                    if constexpr (std::is_same_v<T, ConstDef>) {
                        set_scalar(d.key, {d.value, prov, false});
                    } else if constexpr (std::is_same_v<T, OptionDef>) {
                        set_scalar(d.key, {d.value, prov, true});
                    } else if constexpr (std::is_same_v<T, StereotypeDef>) {
                        eff.stereotypes.insert_or_assign(d.name, Registered<StereotypeDef>{d, prov});
                    } else if constexpr (std::is_same_v<T, TagDef>) {
                        eff.tags.insert_or_assign(d.name, Registered<TagDef>{d, prov});
                    } else if constexpr (std::is_same_v<T, ConstraintDef>) {
                        eff.constraints.insert_or_assign(d.name, Registered<ConstraintDef>{d, prov});
                    } else if constexpr (std::is_same_v<T, PredicatedRuleDef>) {
                        auto& chain = eff.predicated[d.property];
                        chain.insert(chain.begin(), PredicatedEntry{d.predicate, d.value, prov});
                    } else {
                        eff.transforms.insert_or_assign(d.id, Registered<bool>{d.enabled, prov});
                    }
                },
                def.body);
        }
    }
    return eff;
}

std::optional<ScalarBinding> lookup_scalar(const EffectiveDefinitions& eff, std::string_view key)
{
    auto it = eff.scalars.find(std::string(key));
    if (it == eff.scalars.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<PredicatedMatch> resolve_predicated(const EffectiveDefinitions& eff, std::string_view property,
                                                  const ElementRef& subject, const Model& model)
{
    auto it = eff.predicated.find(std::string(property));
    if (it == eff.predicated.end()) {
        return std::nullopt;
    }
    for (const auto& entry : it->second) {
        if (predicate_matches(entry.predicate, model, subject)) {
            return PredicatedMatch{entry.value, entry.provenance};
        }
    }
    return std::nullopt;
}

std::optional<OverrideChain> explain(const EffectiveDefinitions& eff, std::string_view key)
{
    auto it = eff.scalar_history.find(std::string(key));
    if (it == eff.scalar_history.end() || it->second.empty()) {
        return std::nullopt;
    }
    OverrideChain chain{std::string(key), {}};
    for (const auto& binding : it->second) {
        chain.entries.push_back({binding.provenance.package_id, binding.value, binding.provenance});
    }
    return chain;
}

// ---------------------------------------------------------------------------

namespace {

std::string domain_text(const OptionSpec& spec)
{
    std::string out = "{";
    for (std::size_t i = 0; i < spec.domain.size(); ++i) {
        out += (i ? ", " : "");
        out += spec.domain[i];
    }
    return out + "}";
}

const std::set<std::string_view>& known_transforms()
{
    static const std::set<std::string_view> ids = {"statechart-to-class"};
    return ids;
}

}  // namespace

std::vector<Diagnostic> validate_preface(const PackageRepository& repo, const std::string& root_id)
{
    std::vector<Diagnostic> diags;
    auto report = [&](Severity sev, const char* code, const SourceLocation& loc, const std::string& pkg,
                      std::string message) {
        diags.push_back({sev, code, loc, pkg, std::move(message), pkg});
    };

    const Package* root = repo.find(root_id);
    if (!root) {
        report(Severity::error, "E100", {}, root_id, "unknown root package '" + root_id + "'");
        return diags;
    }

    ImportWalk walk{
        repo,
        [&](const Package& importer, const std::string& missing) {
            report(Severity::error, "E101", importer.loc, importer.id, "unknown import '" + missing + "'");
        },
        [&](const Package& importer, std::vector<std::string> cycle) {
            report(Severity::error, "E102", importer.loc, importer.id, "import cycle: " + join_path(cycle));
        },
        {}, {}, {}};
    walk.visit(*root);

    // Declarations visible anywhere in the composition.
    std::unordered_set<std::string> declared_stereotypes;
    std::unordered_set<std::string> declared_tags;
    for (const Package* pkg : walk.order) {
        for (const auto& def : pkg->definitions) {
            if (const auto* s = std::get_if<StereotypeDef>(&def.body)) {
                declared_stereotypes.insert(s->name);
            } else if (const auto* t = std::get_if<TagDef>(&def.body)) {
                declared_tags.insert(t->name);
            }
        }
    }

    std::unordered_map<std::string, std::pair<ElementKind, std::string>> stereotype_bases;
    for (const Package* pkg : walk.order) {
        std::unordered_set<std::string> local_stereotypes;
        std::unordered_set<std::string> local_tags;
        for (const auto& def : pkg->definitions) {
            const SourceLocation& loc = def.loc;
            if (const auto* opt = std::get_if<OptionDef>(&def.body)) {
                const OptionSpec* spec = find_option(opt->key);
                if (!spec) {
                    report(Severity::error, "E103", loc, pkg->id, "unknown option '" + opt->key + "'");
                } else if (std::find(spec->domain.begin(), spec->domain.end(), opt->value) == spec->domain.end()) {
                    report(Severity::error, "E104", loc, pkg->id,
                           "option " + opt->key + ": value '" + opt->value + "' not in " + domain_text(*spec));
                }
            } else if (const auto* st = std::get_if<StereotypeDef>(&def.body)) {
                if (!local_stereotypes.insert(st->name).second) {
                    report(Severity::error, "E105", loc, pkg->id, "duplicate stereotype '" + st->name + "'");
                }
                auto [it, fresh] = stereotype_bases.try_emplace(st->name, st->base, pkg->id);
                if (!fresh && it->second.first != st->base) {
                    report(Severity::warning, "W102", loc, pkg->id,
                           "stereotype '" + st->name + "' redefined on " + std::string(to_string(st->base)) +
                               ", was on " + std::string(to_string(it->second.first)) + " in '" +
                               it->second.second + "'");
                    it->second = {st->base, pkg->id};
                }
                for (const auto& tag : st->required_tags) {
                    if (declared_tags.count(tag) == 0) {
                        report(Severity::warning, "W103", loc, pkg->id,
                               "stereotype '" + st->name + "' requires undeclared tag '" + tag + "'");
                    }
                }
            } else if (const auto* tag = std::get_if<TagDef>(&def.body)) {
                if (!local_tags.insert(tag->name).second) {
                    report(Severity::error, "E106", loc, pkg->id, "duplicate tag definition '" + tag->name + "'");
                }
            } else if (const auto* rule = std::get_if<PredicatedRuleDef>(&def.body)) {
                if (const auto* has = std::get_if<pred::HasStereotype>(&rule->predicate)) {
                    if (declared_stereotypes.count(has->name) == 0) {
                        report(Severity::warning, "W101", loc, pkg->id,
                               "rule '" + rule->property + "' refers to undeclared stereotype '" + has->name + "'");
                    }
                }
            } else if (const auto* tr = std::get_if<TransformSelection>(&def.body)) {
                if (known_transforms().count(tr->id) == 0) {
                    report(Severity::warning, "W104", loc, pkg->id, "unknown transform '" + tr->id + "'");
                }
            }
        }
    }
    return diags;
}

}  // namespace preface
