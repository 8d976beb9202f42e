#include "preface/skeletongen.hpp"

#include <functional>
#include <sstream>

#include "preface/textio.hpp"
#include "preface/transformer.hpp"

namespace preface {

namespace {

std::vector<const Statechart*> charts_for(const Model& model, const ClassDef& cls)
{
    std::vector<const Statechart*> out;
    for (const auto& chart : model.statecharts) {
        if (chart.attached_to == cls.name) {
            out.push_back(&chart);
        }
    }
    return out;
}

void require_state_flags(const ClassDef& cls, const std::vector<const Statechart*>& charts)
{
    for (const Statechart* chart : charts) {
        const Origin origin = Origin::induced(std::string(kStatechartToClass), chart->name);
        for (const auto& state : chart->states) {
            const Attribute* attr = cls.find_attribute(state.name);
            if (!attr || attr->origin != origin) {
                throw UntransformedInput("class '" + cls.name + "' has no induced flag for state " + chart->name +
                                         "/" + state.name + "; apply the statechart-to-class transform first");
            }
        }
    }
}

/// Names of all attributes that are induced state flags for one of `charts`.
bool is_state_flag(const Attribute& attr, const std::vector<const Statechart*>& charts)
{
    for (const Statechart* chart : charts) {
        if (attr.origin.is_induced() && attr.origin.chart == chart->name && chart->state_index(attr.name)) {
            return true;
        }
    }
    return false;
}

void emit_state_update(std::ostream& os, const Statechart& chart, const Transition& t, const std::string& indent)
{
    if (t.guard) {
        os << indent << "// guard [" << print_expr(*t.guard) << "] is not enforced\n";
    }
    for (const auto& state : chart.states) {
        os << indent << "SET " << state.name << " = " << (state.name == t.target ? "true" : "false") << "\n";
    }
}

void emit_routine(std::ostream& os, const Operation& op, const std::vector<const Statechart*>& charts,
                  std::string_view marker)
{
    os << "  ROUTINE " << op.name << "(";
    for (std::size_t i = 0; i < op.params.size(); ++i) {
        os << (i ? ", " : "") << op.params[i].name << " : " << op.params[i].type;
    }
    os << ")\n";
    if (ExprPtr pre = op.effective_precondition()) {
        os << "    GUARD " << print_expr(*pre) << "\n";
        os << "      " << marker << "\n";
    }
    os << "    TODO body\n";

    for (const Statechart* chart : charts) {
        // First transition per source state, sources in state declaration order.
        std::vector<const Transition*> by_source(chart->states.size(), nullptr);
        for (const auto& t : chart->transitions) {
            if (t.event != op.name) {
                continue;
            }
            if (auto idx = chart->state_index(t.source); idx && !by_source[*idx]) {
                by_source[*idx] = &t;
            }
        }
        std::size_t sources = 0;
        for (const auto* t : by_source) {
            sources += t ? 1 : 0;
        }
        if (sources == 0) {
            continue;
        }
        if (sources == 1) {
            for (const auto* t : by_source) {
                if (t) {
                    emit_state_update(os, *chart, *t, "    ");
                }
            }
            continue;
        }
        for (std::size_t i = 0; i < by_source.size(); ++i) {
            if (by_source[i]) {
                os << "    WHEN " << chart->states[i].name << "\n";
                emit_state_update(os, *chart, *by_source[i], "      ");
            }
        }
        os << "    END WHEN\n";
    }
    os << "  END ROUTINE\n";
}

}  // namespace

std::vector<SkeletonUnit> generate_skeleton(const Model& model, const EffectiveDefinitions& eff)
{
    const std::string_view marker = eff.option(options::kUnexpectedEvent) == "ignore" ? kIgnoreMarker : kTrapMarker;
    std::vector<SkeletonUnit> units;
    for (const auto& cls : model.classes) {
        const auto charts = charts_for(model, cls);
        require_state_flags(cls, charts);

        std::ostringstream os;
        os << "// skeleton for class " << cls.name << "\n";
        os << "// " << options::kFraming << " = " << eff.option(options::kFraming) << "\n";
        os << "// " << options::kCommunication << " = " << eff.option(options::kCommunication) << "\n";
        os << "CLASS " << cls.name;
        if (!cls.superclasses.empty()) {
            os << " SPECIALIZES ";
            for (std::size_t i = 0; i < cls.superclasses.size(); ++i) {
                os << (i ? ", " : "") << cls.superclasses[i];
            }
        }
        os << "\n";
        for (const auto& attr : cls.attributes) {
            if (is_state_flag(attr, charts)) {
                const Statechart* chart = model.find_statechart(attr.origin.chart);
                const State* initial = chart ? chart->initial_state() : nullptr;
                const bool on = initial && initial->name == attr.name;
                os << "  FLAG " << attr.name << " = " << (on ? "true" : "false") << "\n";
            } else {
                os << "  FIELD " << attr.name << " : " << attr.type << "\n";
            }
        }
        for (const auto& inv : cls.invariants) {
            os << "  INVARIANT " << print_expr(*inv.expr) << "\n";
        }
        for (const auto& op : cls.operations) {
            emit_routine(os, op, charts, marker);
        }
        os << "END CLASS\n";
        units.push_back({cls.name, os.str(), {}});
    }
    return units;
}

std::vector<CallSequence> enumerate_call_sequences(const Statechart& chart, std::size_t max_length)
{
    std::vector<CallSequence> out;
    const State* initial = chart.initial_state();
    if (!initial || max_length == 0) {
        return out;
    }
    std::vector<bool> used(chart.transitions.size(), false);
    std::vector<std::string> events;
    std::function<void(const std::string&)> walk = [&](const std::string& from) {
        for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
            const Transition& t = chart.transitions[i];
            if (used[i] || t.source != from) {
                continue;
            }
            used[i] = true;
            events.push_back(t.event);
            out.push_back({events, t.target});
            if (events.size() < max_length) {
                walk(t.target);
            }
            events.pop_back();
            used[i] = false;
        }
    };
    walk(initial->name);
    return out;
}

std::vector<SkeletonUnit> generate_monitor(const Model& model, const EffectiveDefinitions&)
{
    std::vector<SkeletonUnit> units;
    for (const auto& cls : model.classes) {
        const auto charts = charts_for(model, cls);
        if (charts.empty()) {
            continue;
        }
        require_state_flags(cls, charts);

        std::ostringstream os;
        os << "// monitor for class " << cls.name << "\n";
        os << "MONITOR " << cls.name << "\n";
        for (const Statechart* chart : charts) {
            const Origin origin = Origin::induced(std::string(kStatechartToClass), chart->name);
            os << "  CHART " << chart->name << "\n";
            if (const State* initial = chart->initial_state()) {
                os << "    INITIAL " << initial->name << "\n";
            }
            for (const auto& inv : cls.invariants) {
                if (inv.origin == origin) {
                    os << "    AFTER EVERY ROUTINE ASSERT " << print_expr(*inv.expr) << "\n";
                }
            }
            for (const auto& seq : enumerate_call_sequences(*chart, 3)) {
                os << "    SEQUENCE ";
                for (std::size_t i = 0; i < seq.events.size(); ++i) {
                    os << (i ? ", " : "") << seq.events[i];
                }
                os << " EXPECT " << seq.final_state << "\n";
            }
            os << "  END CHART\n";
        }
        os << "END MONITOR\n";
        units.push_back({cls.name, {}, os.str()});
    }
    return units;
}

}  // namespace preface
