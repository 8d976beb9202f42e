#include "preface/transformer.hpp"

#include <algorithm>

#include "preface/textio.hpp"

namespace preface {

bool TransformReport::empty() const
{
    return induced_attributes.empty() && induced_invariants.empty() && induced_operations.empty() &&
           induced_preconditions.empty() && effective_preconditions.empty() && diagnostics.empty();
}

void TransformReport::append(const TransformReport& other)
{
    auto cat = [](auto& into, const auto& from) { into.insert(into.end(), from.begin(), from.end()); };
    cat(induced_attributes, other.induced_attributes);
    cat(induced_invariants, other.induced_invariants);
    cat(induced_operations, other.induced_operations);
    cat(induced_preconditions, other.induced_preconditions);
    cat(effective_preconditions, other.effective_preconditions);
    cat(diagnostics, other.diagnostics);
}

ExprPtr exactly_one(const std::vector<std::string>& names)
{
    if (names.size() == 1) {
        return build::var(names.front());
    }
    std::vector<ExprPtr> disjuncts;
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::vector<ExprPtr> conjuncts;
        for (std::size_t j = 0; j < names.size(); ++j) {
            ExprPtr flag = build::var(names[j]);
            conjuncts.push_back(i == j ? flag : build::not_(flag));
        }
        disjuncts.push_back(build::fold(LogicOp::and_, conjuncts));
    }
    return build::fold(LogicOp::or_, disjuncts);
}

namespace {

Origin origin_for(const Statechart& chart)
{
    return Origin::induced(std::string(kStatechartToClass), chart.name);
}

Diagnostic make_diag(Severity severity, const char* code, const SourceLocation& loc, std::string path,
                     std::string message)
{
    return {severity, code, loc, std::move(path), std::move(message), {}};
}

/// Shared prologue: copies the model and locates the attached class.
struct RuleContext {
    TransformResult result;
    ClassDef* cls = nullptr;
    Origin origin;

    RuleContext(const Model& model, const Statechart& chart) : result{model, {}}, origin(origin_for(chart))
    {
        cls = result.model.find_class(chart.attached_to);
        if (!cls) {
            result.report.diagnostics.push_back(make_diag(Severity::error, "E300", chart.loc, chart.name,
                                                          "statechart attached to unknown class '" +
                                                              chart.attached_to + "'"));
        }
    }

    /// True when every state of the chart has its induced flag on the class.
    [[nodiscard]] bool has_state_flag(const std::string& state) const
    {
        const Attribute* attr = cls->find_attribute(state);
        return attr && attr->origin == origin && attr->type == kBooleanType;
    }
};

}  // namespace

TransformResult rule1_state_attributes(const Model& model, const Statechart& chart)
{
    RuleContext ctx(model, chart);
    if (!ctx.cls) {
        return std::move(ctx.result);
    }
    auto& report = ctx.result.report;
    for (const auto& state : chart.states) {
        const std::string path = ctx.cls->name + "." + state.name;
        if (const Attribute* existing = ctx.cls->find_attribute(state.name)) {
            if (existing->origin != ctx.origin || existing->type != kBooleanType) {
                report.diagnostics.push_back(make_diag(Severity::error, "E301", state.loc, path,
                                                       "state '" + state.name + "' of " + chart.name +
                                                           " clashes with attribute '" + path + "'"));
            }
            continue;
        }
        if (ctx.cls->find_operation(state.name)) {
            report.diagnostics.push_back(make_diag(Severity::error, "E301", state.loc, path,
                                                   "state '" + state.name + "' of " + chart.name +
                                                       " clashes with operation '" + path + "'"));
            continue;
        }
        ctx.cls->attributes.push_back({state.name, std::string(kBooleanType), ctx.origin, state.loc});
        report.induced_attributes.push_back({path, "Boolean flag for state " + chart.name + "/" + state.name});
    }
    return std::move(ctx.result);
}

TransformResult rule2_mutex_invariant(const Model& model, const Statechart& chart)
{
    RuleContext ctx(model, chart);
    if (!ctx.cls || chart.states.empty()) {
        return std::move(ctx.result);
    }
    auto& report = ctx.result.report;
    std::vector<std::string> names;
    for (const auto& state : chart.states) {
        if (!ctx.has_state_flag(state.name)) {
            report.diagnostics.push_back(make_diag(Severity::info, "I302", chart.loc, ctx.cls->name,
                                                   "mutual-exclusion invariant for " + chart.name +
                                                       " not induced: state '" + state.name + "' has no flag"));
            return std::move(ctx.result);
        }
        names.push_back(state.name);
    }

    ExprPtr formula = exactly_one(names);
    auto& invariants = ctx.cls->invariants;
    auto existing = std::find_if(invariants.begin(), invariants.end(),
                                 [&](const Invariant& inv) { return inv.origin == ctx.origin; });
    if (existing != invariants.end()) {
        if (same_expr(existing->expr, formula)) {
            return std::move(ctx.result);
        }
        existing->expr = formula;
    } else {
        invariants.push_back({formula, ctx.origin, chart.loc});
    }
    report.induced_invariants.push_back({ctx.cls->name, print_expr(*formula)});
    return std::move(ctx.result);
}

TransformResult rule3_event_operations(const Model& model, const Statechart& chart)
{
    RuleContext ctx(model, chart);
    if (!ctx.cls) {
        return std::move(ctx.result);
    }
    auto& report = ctx.result.report;
    for (const auto& event : chart.events()) {
        if (ctx.cls->find_operation(event)) {
            continue;
        }
        const auto first = std::find_if(chart.transitions.begin(), chart.transitions.end(),
                                         [&](const Transition& t) { return t.event == event; });
        const std::string path = ctx.cls->name + "." + event;
        if (ctx.cls->find_attribute(event)) {
            report.diagnostics.push_back(make_diag(Severity::error, "E302", first->loc, path,
                                                   "event " + event + " clashes with attribute '" + path + "'"));
            continue;
        }
        Operation op;
        op.name = event;
        op.origin = ctx.origin;
        op.loc = first->loc;
        ctx.cls->operations.push_back(std::move(op));
        report.induced_operations.push_back({path, "operation for event " + event + " of " + chart.name});
        report.diagnostics.push_back(make_diag(Severity::info, "I301", first->loc, path,
                                               "operation '" + event + "' induced for event " + event));
    }
    return std::move(ctx.result);
}

TransformResult rule4_preconditions(const Model& model, const Statechart& chart)
{
    RuleContext ctx(model, chart);
    if (!ctx.cls) {
        return std::move(ctx.result);
    }
    auto& report = ctx.result.report;
    for (const auto& event : chart.events()) {
        Operation* op = ctx.cls->find_operation(event);
        if (!op) {
            continue;
        }
        const std::string path = ctx.cls->name + "." + event;

        std::vector<bool> is_source(chart.states.size(), false);
        for (const auto& t : chart.transitions) {
            if (t.event == event) {
                if (auto idx = chart.state_index(t.source)) {
                    is_source[*idx] = true;
                }
            }
        }
        std::vector<ExprPtr> disjuncts;
        bool complete = true;
        for (std::size_t i = 0; i < chart.states.size(); ++i) {
            if (!is_source[i]) {
                continue;
            }
            if (!ctx.has_state_flag(chart.states[i].name)) {
                complete = false;
                break;
            }
            disjuncts.push_back(build::var(chart.states[i].name));
        }
        if (!complete || disjuncts.empty()) {
            report.diagnostics.push_back(make_diag(Severity::info, "I303", op->loc, path,
                                                   "precondition for event " + event +
                                                       " not induced: source states have no flags"));
            continue;
        }

        ExprPtr pre = build::fold(LogicOp::or_, disjuncts);
        if (op->pre_induced) {
            if (op->pre_induced->origin != ctx.origin) {
                report.diagnostics.push_back(make_diag(Severity::error, "E303", op->loc, path,
                                                       "precondition of '" + path + "' is already induced by " +
                                                           op->pre_induced->origin.chart));
                continue;
            }
            if (same_expr(op->pre_induced->expr, pre)) {
                continue;
            }
        }
        op->pre_induced = InducedPrecondition{pre, ctx.origin};
        report.induced_preconditions.push_back({path, print_expr(*pre)});
        if (op->pre_authored) {
            report.effective_preconditions.push_back({path, print_expr(*op->effective_precondition())});
        }
    }
    return std::move(ctx.result);
}

TransformResult apply_transforms(const Model& model, const EffectiveDefinitions& eff)
{
    TransformResult out{model, {}};
    if (!eff.transform_enabled(kStatechartToClass)) {
        return out;
    }
    auto structural = builtin_check(model);
    if (has_errors(structural)) {
        out.report.diagnostics = std::move(structural);
        return out;
    }
    if (eff.option(options::kAttachTo) == "method") {
        for (const auto& chart : model.statecharts) {
            out.report.diagnostics.push_back(make_diag(Severity::error, "E304", chart.loc, chart.name,
                                                       "statechart attachment to methods is not supported; " +
                                                           chart.name + " left untransformed"));
        }
        return out;
    }

    for (const auto& chart : model.statecharts) {
        for (auto* rule : {&rule1_state_attributes, &rule2_mutex_invariant, &rule3_event_operations,
                           &rule4_preconditions}) {
            TransformResult step = rule(out.model, chart);
            out.model = std::move(step.model);
            out.report.append(step.report);
        }
    }
    return out;
}

}  // namespace preface
