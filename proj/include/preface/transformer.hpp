#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "preface/diagnostic.hpp"
#include "preface/model.hpp"
#include "preface/preface.hpp"

namespace preface {

/// Transform id under which the statechart-to-class induction is selected in
/// a preface, and the rule id recorded on everything it induces.
inline constexpr std::string_view kStatechartToClass = "statechart-to-class";

struct ReportEntry {
    std::string path;
    std::string description;
    friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct TransformReport {
    std::vector<ReportEntry> induced_attributes;
    std::vector<ReportEntry> induced_invariants;
    std::vector<ReportEntry> induced_operations;
    std::vector<ReportEntry> induced_preconditions;
    /// Authored-and-induced conjunction for every operation that has both.
    std::vector<ReportEntry> effective_preconditions;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool empty() const;
    void append(const TransformReport& other);
};

struct TransformResult {
    Model model;
    TransformReport report;
};

// The four induction rules. Each returns an augmented copy of `model`; an
// element that would clash with an authored one is skipped with an error
// diagnostic while the rest are still induced.

/// One Boolean attribute per state on the attached class.
TransformResult rule1_state_attributes(const Model& model, const Statechart& chart);
/// One invariant saying exactly one state attribute holds.
TransformResult rule2_mutex_invariant(const Model& model, const Statechart& chart);
/// Binds each event to the same-named operation, creating missing ones.
TransformResult rule3_event_operations(const Model& model, const Statechart& chart);
/// Induced precondition per event: disjunction of its source-state attributes.
TransformResult rule4_preconditions(const Model& model, const Statechart& chart);

/// Runs rules 1-4 for every statechart, in declaration order, when the
/// preface enables the statechart-to-class transform; identity otherwise.
TransformResult apply_transforms(const Model& model, const EffectiveDefinitions& eff);

/// Canonical exactly-one formula over the given Boolean attribute names.
ExprPtr exactly_one(const std::vector<std::string>& names);

}  // namespace preface
