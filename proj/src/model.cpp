#include "preface/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace preface {

bool is_known_type(std::string_view type_name)
{
    return type_name == kBooleanType || type_name == kIntegerType || type_name == kStringType;
}

ExprPtr Operation::effective_precondition() const
{
    ExprPtr induced = pre_induced ? pre_induced->expr : nullptr;
    if (pre_authored && induced) {
        return build::and_(pre_authored, induced);
    }
    return pre_authored ? pre_authored : induced;
}

const Attribute* ClassDef::find_attribute(std::string_view n) const
{
    auto it = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.name == n; });
    return it == attributes.end() ? nullptr : &*it;
}

const Operation* ClassDef::find_operation(std::string_view n) const
{
    auto it = std::find_if(operations.begin(), operations.end(), [&](const Operation& o) { return o.name == n; });
    return it == operations.end() ? nullptr : &*it;
}

Operation* ClassDef::find_operation(std::string_view n)
{
    return const_cast<Operation*>(std::as_const(*this).find_operation(n));
}

std::optional<std::size_t> Statechart::state_index(std::string_view n) const
{
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].name == n) {
            return i;
        }
    }
    return std::nullopt;
}

const State* Statechart::initial_state() const
{
    auto it = std::find_if(states.begin(), states.end(), [](const State& s) { return s.initial; });
    return it == states.end() ? nullptr : &*it;
}

std::vector<std::string> Statechart::events() const
{
    std::vector<std::string> out;
    for (const auto& t : transitions) {
        if (std::find(out.begin(), out.end(), t.event) == out.end()) {
            out.push_back(t.event);
        }
    }
    return out;
}

const ClassDef* Model::find_class(std::string_view n) const
{
    auto idx = class_index(n);
    return idx ? &classes[*idx] : nullptr;
}

ClassDef* Model::find_class(std::string_view n)
{
    return const_cast<ClassDef*>(std::as_const(*this).find_class(n));
}

std::optional<std::size_t> Model::class_index(std::string_view n) const
{
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].name == n) {
            return i;
        }
    }
    return std::nullopt;
}

const Statechart* Model::find_statechart(std::string_view n) const
{
    auto it = std::find_if(statecharts.begin(), statecharts.end(), [&](const Statechart& s) { return s.name == n; });
    return it == statecharts.end() ? nullptr : &*it;
}

// --- structural equality ----------------------------------------------------

bool operator==(const Attribute& a, const Attribute& b)
{
    return a.name == b.name && a.type == b.type && a.origin == b.origin;
}

bool operator==(const Parameter& a, const Parameter& b) { return a.name == b.name && a.type == b.type; }

bool operator==(const InducedPrecondition& a, const InducedPrecondition& b)
{
    return a.origin == b.origin && same_expr(a.expr, b.expr);
}

bool operator==(const Operation& a, const Operation& b)
{
    return a.name == b.name && a.params == b.params && same_expr(a.pre_authored, b.pre_authored) &&
           a.pre_induced == b.pre_induced && same_expr(a.post_authored, b.post_authored) &&
           a.origin == b.origin;
}

bool operator==(const Invariant& a, const Invariant& b)
{
    return a.origin == b.origin && same_expr(a.expr, b.expr);
}

bool operator==(const ClassDef& a, const ClassDef& b)
{
    return a.name == b.name && a.stereotypes == b.stereotypes && a.tagged_values == b.tagged_values &&
           a.superclasses == b.superclasses && a.attributes == b.attributes &&
           a.operations == b.operations && a.invariants == b.invariants;
}

bool operator==(const State& a, const State& b) { return a.name == b.name && a.initial == b.initial; }

bool operator==(const Transition& a, const Transition& b)
{
    return a.source == b.source && a.target == b.target && a.event == b.event && same_expr(a.guard, b.guard);
}

bool operator==(const Statechart& a, const Statechart& b)
{
    return a.name == b.name && a.attached_to == b.attached_to && a.states == b.states &&
           a.transitions == b.transitions;
}

bool operator==(const Model& a, const Model& b)
{
    return a.name == b.name && a.classes == b.classes && a.statecharts == b.statecharts;
}

// --- element paths ----------------------------------------------------------

std::string_view to_string(ElementKind kind)
{
    switch (kind) {
    case ElementKind::Class: return "Class";
    case ElementKind::Attribute: return "Attribute";
    case ElementKind::Operation: return "Operation";
    case ElementKind::Statechart: return "Statechart";
    case ElementKind::State: return "State";
    case ElementKind::Transition: return "Transition";
    }
    return "Class";
}

namespace {

bool is_ident(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

std::optional<ElementRef> lookup_element(const Model& model, std::string_view path)
{
    const auto sep = path.find_first_of("./");
    const std::string_view head = path.substr(0, sep);
    if (!is_ident(head)) {
        throw MalformedPath(std::string(path));
    }
    if (sep == std::string_view::npos) {
        if (auto ci = model.class_index(head)) {
            return ElementRef{ElementKind::Class, *ci, 0};
        }
        for (std::size_t i = 0; i < model.statecharts.size(); ++i) {
            if (model.statecharts[i].name == head) {
                return ElementRef{ElementKind::Statechart, i, 0};
            }
        }
        return std::nullopt;
    }

    const std::string_view tail = path.substr(sep + 1);
    if (path[sep] == '.') {
        if (!is_ident(tail)) {
            throw MalformedPath(std::string(path));
        }
        auto ci = model.class_index(head);
        if (!ci) {
            return std::nullopt;
        }
        const ClassDef& cls = model.classes[*ci];
        for (std::size_t i = 0; i < cls.attributes.size(); ++i) {
            if (cls.attributes[i].name == tail) {
                return ElementRef{ElementKind::Attribute, *ci, i};
            }
        }
        for (std::size_t i = 0; i < cls.operations.size(); ++i) {
            if (cls.operations[i].name == tail) {
                return ElementRef{ElementKind::Operation, *ci, i};
            }
        }
        return std::nullopt;
    }

    const bool numeric = is_digits(tail);
    if (!numeric && !is_ident(tail)) {
        throw MalformedPath(std::string(path));
    }
    for (std::size_t c = 0; c < model.statecharts.size(); ++c) {
        const Statechart& chart = model.statecharts[c];
        if (chart.name != head) {
            continue;
        }
        if (numeric) {
            if (tail.size() > 9) {
                return std::nullopt;
            }
            const auto idx = static_cast<std::size_t>(std::stoul(std::string(tail)));
            if (idx < chart.transitions.size()) {
                return ElementRef{ElementKind::Transition, c, idx};
            }
            return std::nullopt;
        }
        if (auto si = chart.state_index(tail)) {
            return ElementRef{ElementKind::State, c, *si};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::string element_path(const Model& model, const ElementRef& ref)
{
    switch (ref.kind) {
    case ElementKind::Class:
        return model.classes.at(ref.owner).name;
    case ElementKind::Attribute: {
        const auto& cls = model.classes.at(ref.owner);
        return cls.name + "." + cls.attributes.at(ref.index).name;
    }
    case ElementKind::Operation: {
        const auto& cls = model.classes.at(ref.owner);
        return cls.name + "." + cls.operations.at(ref.index).name;
    }
    case ElementKind::Statechart:
        return model.statecharts.at(ref.owner).name;
    case ElementKind::State: {
        const auto& chart = model.statecharts.at(ref.owner);
        return chart.name + "/" + chart.states.at(ref.index).name;
    }
    case ElementKind::Transition:
        return model.statecharts.at(ref.owner).name + "/" + std::to_string(ref.index);
    }
    return {};
}

SourceLocation element_location(const Model& model, const ElementRef& ref)
{
    switch (ref.kind) {
    case ElementKind::Class: return model.classes.at(ref.owner).loc;
    case ElementKind::Attribute: return model.classes.at(ref.owner).attributes.at(ref.index).loc;
    case ElementKind::Operation: return model.classes.at(ref.owner).operations.at(ref.index).loc;
    case ElementKind::Statechart: return model.statecharts.at(ref.owner).loc;
    case ElementKind::State: return model.statecharts.at(ref.owner).states.at(ref.index).loc;
    case ElementKind::Transition: return model.statecharts.at(ref.owner).transitions.at(ref.index).loc;
    }
    return {};
}

std::vector<ElementRef> all_elements(const Model& model)
{
    std::vector<ElementRef> out;
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        out.push_back({ElementKind::Class, c, 0});
        for (std::size_t i = 0; i < model.classes[c].attributes.size(); ++i) {
            out.push_back({ElementKind::Attribute, c, i});
        }
        for (std::size_t i = 0; i < model.classes[c].operations.size(); ++i) {
            out.push_back({ElementKind::Operation, c, i});
        }
    }
    for (std::size_t s = 0; s < model.statecharts.size(); ++s) {
        out.push_back({ElementKind::Statechart, s, 0});
        for (std::size_t i = 0; i < model.statecharts[s].states.size(); ++i) {
            out.push_back({ElementKind::State, s, i});
        }
        for (std::size_t i = 0; i < model.statecharts[s].transitions.size(); ++i) {
            out.push_back({ElementKind::Transition, s, i});
        }
    }
    return out;
}

// --- builtin_check ----------------------------------------------------------

namespace {

class Checker {
public:
    explicit Checker(const Model& model) : model_(model) {}

    std::vector<Diagnostic> run()
    {
        std::unordered_set<std::string> class_names;
        for (const auto& cls : model_.classes) {
            if (!class_names.insert(cls.name).second) {
                error("E001", cls.loc, cls.name, "duplicate class name '" + cls.name + "'");
            }
            check_class(cls);
        }
        check_inheritance_cycles();

        std::unordered_set<std::string> chart_names;
        for (const auto& chart : model_.statecharts) {
            if (!chart_names.insert(chart.name).second) {
                error("E002", chart.loc, chart.name, "duplicate statechart name '" + chart.name + "'");
            }
            if (class_names.count(chart.name) != 0) {
                error("E013", chart.loc, chart.name,
                      "statechart name '" + chart.name + "' is already used by a class");
            }
            check_chart(chart);
        }
        return std::move(diags_);
    }

private:
    void error(const char* code, const SourceLocation& loc, std::string path, std::string message)
    {
        diags_.push_back({Severity::error, code, loc, std::move(path), std::move(message), {}});
    }

    void check_origin(const Origin& origin, const SourceLocation& loc, const std::string& path)
    {
        if (origin.is_induced() && origin.rule_id.empty()) {
            error("E015", loc, path, "induced element without a rule id");
        }
    }

    void check_class(const ClassDef& cls)
    {
        for (const auto& super : cls.superclasses) {
            if (!model_.find_class(super)) {
                error("E005", cls.loc, cls.name, "unknown superclass '" + super + "'");
            }
        }
        std::unordered_set<std::string> attr_names;
        for (const auto& attr : cls.attributes) {
            const std::string path = cls.name + "." + attr.name;
            if (!attr_names.insert(attr.name).second) {
                error("E004", attr.loc, path, "duplicate member name '" + attr.name + "'");
            }
            if (!is_known_type(attr.type)) {
                error("E007", attr.loc, path, "unknown type '" + attr.type + "'");
            }
            check_origin(attr.origin, attr.loc, path);
        }
        std::unordered_set<std::string> op_names;
        for (const auto& op : cls.operations) {
            const std::string path = cls.name + "." + op.name;
            if (attr_names.count(op.name) != 0) {
                error("E004", op.loc, path, "operation '" + op.name + "' shares its name with an attribute");
            } else if (!op_names.insert(op.name).second) {
                error("E004", op.loc, path, "duplicate member name '" + op.name + "'");
            }
            std::unordered_set<std::string> params;
            for (const auto& p : op.params) {
                if (!params.insert(p.name).second) {
                    error("E008", op.loc, path, "duplicate parameter name '" + p.name + "'");
                }
                if (!is_known_type(p.type)) {
                    error("E014", op.loc, path, "unknown type '" + p.type + "' for parameter '" + p.name + "'");
                }
            }
            check_origin(op.origin, op.loc, path);
            if (op.pre_induced) {
                check_origin(op.pre_induced->origin, op.loc, path);
            }
        }
        for (const auto& inv : cls.invariants) {
            check_origin(inv.origin, inv.loc, cls.name);
        }
    }

    void check_inheritance_cycles()
    {
        for (const auto& cls : model_.classes) {
            // Depth-first search from cls over resolvable superclasses.
            std::unordered_set<std::string> seen;
            std::vector<std::string> stack(cls.superclasses.begin(), cls.superclasses.end());
            bool cyclic = false;
            while (!stack.empty() && !cyclic) {
                std::string name = std::move(stack.back());
                stack.pop_back();
                if (name == cls.name) {
                    cyclic = true;
                    break;
                }
                if (!seen.insert(name).second) {
                    continue;
                }
                if (const ClassDef* super = model_.find_class(name)) {
                    stack.insert(stack.end(), super->superclasses.begin(), super->superclasses.end());
                }
            }
            if (cyclic) {
                error("E006", cls.loc, cls.name, "class '" + cls.name + "' is its own superclass");
            }
        }
    }

    void check_chart(const Statechart& chart)
    {
        if (!model_.find_class(chart.attached_to)) {
            error("E003", chart.loc, chart.name,
                  "statechart attached to unknown class '" + chart.attached_to + "'");
        }
        std::unordered_set<std::string> names;
        std::size_t initial = 0;
        for (const auto& state : chart.states) {
            if (!names.insert(state.name).second) {
                error("E009", state.loc, chart.name + "/" + state.name,
                      "duplicate state name '" + state.name + "'");
            }
            initial += state.initial ? 1 : 0;
        }
        if (initial != 1) {
            error("E010", chart.loc, chart.name,
                  "statechart must have exactly one initial state, found " + std::to_string(initial));
        }
        for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
            const auto& t = chart.transitions[i];
            const std::string path = chart.name + "/" + std::to_string(i);
            for (const auto* end : {&t.source, &t.target}) {
                if (names.count(*end) == 0) {
                    error("E011", t.loc, path, "unknown state '" + *end + "'");
                }
            }
            if (t.event.empty()) {
                error("E012", t.loc, path, "transition without an event");
            }
        }
    }

    const Model& model_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> builtin_check(const Model& model)
{
    return Checker(model).run();
}

}  // namespace preface
