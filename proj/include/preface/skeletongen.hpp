#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "preface/model.hpp"
#include "preface/preface.hpp"

namespace preface {

struct SkeletonUnit {
    std::string class_name;
    std::string text;
    std::string monitor_text;
    friend bool operator==(const SkeletonUnit&, const SkeletonUnit&) = default;
};

class UntransformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Marker lines emitted in a routine's failed-guard branch.
inline constexpr std::string_view kTrapMarker = "TRAP precondition_violation";
inline constexpr std::string_view kIgnoreMarker = "RETURN // ignored";

/// One skeleton unit per class, in declaration order. Expects the output of
/// apply_transforms; throws UntransformedInput when a class with a statechart
/// lacks its induced state flags.
std::vector<SkeletonUnit> generate_skeleton(const Model& model, const EffectiveDefinitions& eff);

/// One monitor unit per class that has a statechart attached.
std::vector<SkeletonUnit> generate_monitor(const Model& model, const EffectiveDefinitions& eff);

/// Event sequences along transition-simple paths (no transition used twice)
/// of length 1..max_length from the initial state, in depth-first
/// transition-declaration order. Each entry also names the state reached.
struct CallSequence {
    std::vector<std::string> events;
    std::string final_state;
    friend bool operator==(const CallSequence&, const CallSequence&) = default;
};
std::vector<CallSequence> enumerate_call_sequences(const Statechart& chart, std::size_t max_length);

}  // namespace preface
