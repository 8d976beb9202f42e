#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "preface/diagnostic.hpp"
#include "preface/expr.hpp"

namespace preface {

enum class OriginKind { authored, induced };

/// Where a model element came from. Induced elements remember the transform
/// and the statechart that produced them, so re-running a transform can
/// recognise its own output.
struct Origin {
    OriginKind kind = OriginKind::authored;
    std::string rule_id;
    std::string chart;

    static Origin induced(std::string rule_id, std::string chart) {
        return {OriginKind::induced, std::move(rule_id), std::move(chart)};
    }
    [[nodiscard]] bool is_induced() const { return kind == OriginKind::induced; }

    friend bool operator==(const Origin&, const Origin&) = default;
};

inline constexpr std::string_view kBooleanType = "Boolean";
inline constexpr std::string_view kIntegerType = "Integer";
inline constexpr std::string_view kStringType = "String";

bool is_known_type(std::string_view type_name);

struct Attribute {
    std::string name;
    std::string type;
    Origin origin;
    SourceLocation loc;
};

struct Parameter {
    std::string name;
    std::string type;
};

struct InducedPrecondition {
    ExprPtr expr;
    Origin origin;
};

struct Operation {
    std::string name;
    std::vector<Parameter> params;
    ExprPtr pre_authored;
    std::optional<InducedPrecondition> pre_induced;
    ExprPtr post_authored;
    Origin origin;
    SourceLocation loc;

    /// Conjunction of the authored and induced preconditions (authored
    /// first), or null when the operation has neither.
    [[nodiscard]] ExprPtr effective_precondition() const;
};

struct Invariant {
    ExprPtr expr;
    Origin origin;
    SourceLocation loc;
};

struct ClassDef {
    std::string name;
    std::set<std::string> stereotypes;
    std::map<std::string, Literal> tagged_values;
    std::vector<std::string> superclasses;
    std::vector<Attribute> attributes;
    std::vector<Operation> operations;
    std::vector<Invariant> invariants;
    SourceLocation loc;

    [[nodiscard]] const Attribute* find_attribute(std::string_view name) const;
    [[nodiscard]] const Operation* find_operation(std::string_view name) const;
    Operation* find_operation(std::string_view name);
};

struct State {
    std::string name;
    bool initial = false;
    SourceLocation loc;
};

struct Transition {
    std::string source;
    std::string target;
    std::string event;
    ExprPtr guard;
    SourceLocation loc;
};

struct Statechart {
    std::string name;
    std::string attached_to;
    std::vector<State> states;
    std::vector<Transition> transitions;
    SourceLocation loc;

    [[nodiscard]] std::optional<std::size_t> state_index(std::string_view name) const;
    [[nodiscard]] const State* initial_state() const;
    /// Distinct event names in order of first appearance.
    [[nodiscard]] std::vector<std::string> events() const;
};

struct Model {
    std::string name;
    std::vector<ClassDef> classes;
    std::vector<Statechart> statecharts;
    SourceLocation loc;

    [[nodiscard]] const ClassDef* find_class(std::string_view name) const;
    ClassDef* find_class(std::string_view name);
    [[nodiscard]] std::optional<std::size_t> class_index(std::string_view name) const;
    [[nodiscard]] const Statechart* find_statechart(std::string_view name) const;
};

// Structural equality: source locations never participate.
bool operator==(const Attribute& a, const Attribute& b);
bool operator==(const Parameter& a, const Parameter& b);
bool operator==(const InducedPrecondition& a, const InducedPrecondition& b);
bool operator==(const Operation& a, const Operation& b);
bool operator==(const Invariant& a, const Invariant& b);
bool operator==(const ClassDef& a, const ClassDef& b);
bool operator==(const State& a, const State& b);
bool operator==(const Transition& a, const Transition& b);
bool operator==(const Statechart& a, const Statechart& b);
bool operator==(const Model& a, const Model& b);

enum class ElementKind { Class, Attribute, Operation, Statechart, State, Transition };

std::string_view to_string(ElementKind kind);

/// Handle to one element of a model: `owner` is the class or statechart
/// index, `index` the member, state or transition index within it.
struct ElementRef {
    ElementKind kind = ElementKind::Class;
    std::size_t owner = 0;
    std::size_t index = 0;

    friend auto operator<=>(const ElementRef&, const ElementRef&) = default;
};

class MalformedPath : public std::invalid_argument {
public:
    explicit MalformedPath(const std::string& path)
        : std::invalid_argument("malformed element path '" + path + "'") {}
};

/// Paths: `Class`, `Class.member`, `Chart`, `Chart/state`, `Chart/<transition index>`.
/// Returns nullopt when nothing lives at a well-formed path.
std::optional<ElementRef> lookup_element(const Model& model, std::string_view path);

std::string element_path(const Model& model, const ElementRef& ref);
SourceLocation element_location(const Model& model, const ElementRef& ref);

/// Every element of the model in declaration order: each class followed by
/// its attributes and operations, then each statechart followed by its states
/// and transitions.
std::vector<ElementRef> all_elements(const Model& model);

/// Structural well-formedness, always on. Diagnostics come out in
/// declaration order; an empty result means every model invariant holds.
std::vector<Diagnostic> builtin_check(const Model& model);

}  // namespace preface
