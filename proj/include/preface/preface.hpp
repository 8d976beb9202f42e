#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "preface/diagnostic.hpp"
#include "preface/expr.hpp"
#include "preface/model.hpp"

namespace preface {

// ---------------------------------------------------------------------------
// Option catalogue
// ---------------------------------------------------------------------------

struct OptionSpec {
    std::string_view key;
    std::vector<std::string_view> domain;
    std::string_view default_value;
};

/// The fixed set of semantic variation points a preface may choose.
std::span<const OptionSpec> option_catalogue();
const OptionSpec* find_option(std::string_view key);

namespace options {
inline constexpr std::string_view kAggregation = "aggregation.semantics";
inline constexpr std::string_view kAttachTo = "statechart.attach_to";
inline constexpr std::string_view kUnexpectedEvent = "statechart.unexpected_event";
inline constexpr std::string_view kMultipleInheritance = "inheritance.multiple";
inline constexpr std::string_view kFraming = "framing.default";
inline constexpr std::string_view kCommunication = "communication.paradigm";
}  // namespace options

// ---------------------------------------------------------------------------
// Definitions and packages
// ---------------------------------------------------------------------------

/// Metaclasses a stereotype, constraint or predicate may target.
std::optional<ElementKind> parse_metaclass(std::string_view text);

struct ConstDef {
    std::string key;
    Literal value;
    friend bool operator==(const ConstDef&, const ConstDef&) = default;
};

struct OptionDef {
    std::string key;
    std::string value;
    friend bool operator==(const OptionDef&, const OptionDef&) = default;
};

struct StereotypeDef {
    std::string name;
    ElementKind base = ElementKind::Class;
    std::vector<std::string> required_tags;
    friend bool operator==(const StereotypeDef&, const StereotypeDef&) = default;
};

enum class TagType { string, int_, bool_ };
std::string_view to_string(TagType type);

struct TagDef {
    std::string name;
    TagType type = TagType::string;
    friend bool operator==(const TagDef&, const TagDef&) = default;
};

struct ConstraintDef {
    std::string name;
    ElementKind scope = ElementKind::Class;
    Severity severity = Severity::error;
    ExprPtr body;
};
bool operator==(const ConstraintDef& a, const ConstraintDef& b);

namespace pred {
struct All {
    friend bool operator==(const All&, const All&) = default;
};
struct HasStereotype {
    std::string name;
    friend bool operator==(const HasStereotype&, const HasStereotype&) = default;
};
struct IsMetaclass {
    ElementKind kind;
    friend bool operator==(const IsMetaclass&, const IsMetaclass&) = default;
};
}  // namespace pred

using Predicate = std::variant<pred::All, pred::HasStereotype, pred::IsMetaclass>;

bool predicate_matches(const Predicate& predicate, const Model& model, const ElementRef& subject);

struct PredicatedRuleDef {
    std::string property;
    Predicate predicate;
    std::string value;
    friend bool operator==(const PredicatedRuleDef&, const PredicatedRuleDef&) = default;
};

struct TransformSelection {
    std::string id;
    bool enabled = true;
    friend bool operator==(const TransformSelection&, const TransformSelection&) = default;
};

struct Definition {
    using Body = std::variant<ConstDef, OptionDef, StereotypeDef, TagDef, ConstraintDef,
                              PredicatedRuleDef, TransformSelection>;
    Body body;
    SourceLocation loc;
};
bool operator==(const Definition& a, const Definition& b);

struct Package {
    std::string id;
    std::vector<std::string> imports;
    std::vector<Definition> definitions;
    SourceLocation loc;
};
bool operator==(const Package& a, const Package& b);

struct PackageRepository {
    std::map<std::string, Package> packages;

    [[nodiscard]] const Package* find(std::string_view id) const;
    void add(Package package);
};

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

class CompositionError : public std::runtime_error {
public:
    enum class Kind { cycle, unknown_import, unknown_root };

    CompositionError(Kind kind, std::string message, std::vector<std::string> cycle = {},
                     std::string importer = {}, std::string missing = {})
        : std::runtime_error(std::move(message)),
          kind_(kind),
          cycle_(std::move(cycle)),
          importer_(std::move(importer)),
          missing_(std::move(missing)) {}

    [[nodiscard]] Kind kind() const { return kind_; }
    /// Package ids along the cycle; the first id is repeated at the end.
    [[nodiscard]] const std::vector<std::string>& cycle() const { return cycle_; }
    [[nodiscard]] const std::string& importer() const { return importer_; }
    [[nodiscard]] const std::string& missing() const { return missing_; }

private:
    Kind kind_;
    std::vector<std::string> cycle_;
    std::string importer_;
    std::string missing_;
};

/// Linearises the import graph below `root_id`: each package's imports are
/// emitted (recursively, in listed order) before the package itself, and a
/// package reached a second time is skipped. The root comes last.
std::vector<Package> flatten_imports(const PackageRepository& repo, const std::string& root_id);

inline constexpr std::string_view kCatalogueDefault = "catalogue-default";

struct Provenance {
    std::string package_id;
    /// Position in the concatenated definition list; empty for catalogue defaults.
    std::optional<std::size_t> definition_index;

    [[nodiscard]] bool is_default() const { return !definition_index.has_value(); }
    static Provenance catalogue_default() { return {std::string(kCatalogueDefault), std::nullopt}; }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ScalarBinding {
    Literal value;
    Provenance provenance;
    bool is_option = false;
    friend bool operator==(const ScalarBinding&, const ScalarBinding&) = default;
};

struct PredicatedEntry {
    Predicate predicate;
    std::string value;
    Provenance provenance;
    friend bool operator==(const PredicatedEntry&, const PredicatedEntry&) = default;
};

template <class T>
struct Registered {
    T def;
    Provenance provenance;
    friend bool operator==(const Registered&, const Registered&) = default;
};

/// The resolved preface: one winner per key, with provenance.
struct EffectiveDefinitions {
    std::map<std::string, ScalarBinding> scalars;
    /// Every definition of each scalar key, oldest first. Option keys start
    /// with their catalogue default.
    std::map<std::string, std::vector<ScalarBinding>> scalar_history;
    /// Newest first.
    std::map<std::string, std::vector<PredicatedEntry>> predicated;
    std::map<std::string, Registered<ConstraintDef>> constraints;
    std::map<std::string, Registered<StereotypeDef>> stereotypes;
    std::map<std::string, Registered<TagDef>> tags;
    std::map<std::string, Registered<bool>> transforms;
    std::vector<std::string> flattened_order;

    /// Value of a catalogue option (its default when unset).
    [[nodiscard]] std::string option(std::string_view key) const;
    [[nodiscard]] bool transform_enabled(std::string_view id) const;
    /// Active constraints ordered by the position of their winning definition.
    [[nodiscard]] std::vector<const Registered<ConstraintDef>*> ordered_constraints() const;

    friend bool operator==(const EffectiveDefinitions&, const EffectiveDefinitions&) = default;
};

EffectiveDefinitions resolve(std::span<const Package> flattened);

std::optional<ScalarBinding> lookup_scalar(const EffectiveDefinitions& eff, std::string_view key);

struct PredicatedMatch {
    std::string value;
    Provenance provenance;
    friend bool operator==(const PredicatedMatch&, const PredicatedMatch&) = default;
};

/// Walks the chain for `property` newest first and returns the first entry
/// whose predicate holds for `subject`; nullopt when none applies.
std::optional<PredicatedMatch> resolve_predicated(const EffectiveDefinitions& eff,
                                                  std::string_view property,
                                                  const ElementRef& subject, const Model& model);

struct OverrideChain {
    struct Entry {
        std::string package_id;
        Literal value;
        Provenance provenance;
    };
    std::string key;
    std::vector<Entry> entries;  // oldest first

    [[nodiscard]] const Entry& winner() const { return entries.back(); }
};

std::optional<OverrideChain> explain(const EffectiveDefinitions& eff, std::string_view key);

/// Checks the packages reachable from `root_id`; never throws.
std::vector<Diagnostic> validate_preface(const PackageRepository& repo, const std::string& root_id);

}  // namespace preface
