#include "preface/constraints.hpp"

#include <algorithm>

#include "preface/textio.hpp"
#include "preface/transformer.hpp"

namespace preface {

std::string describe(const Value& value)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return render_literal(v);
            } else if constexpr (std::is_same_v<T, ElementRef>) {
                return "<" + std::string(to_string(v.kind)) + ">";
            } else {
                return "sequence of " + std::to_string(v.size());
            }
        },
        value.data);
}

namespace {

std::string_view type_name(const Value& v)
{
    switch (v.data.index()) {
    case 0: return "Boolean";
    case 1: return "Integer";
    case 2: return "String";
    case 3: return "element";
    default: return "sequence";
    }
}

class Evaluator {
public:
    explicit Evaluator(const Model& model) : model_(model) {}

    EvalResult eval(const Expr& e, const Env& env) const
    {
        return std::visit([&](const auto& node) { return eval_node(node, e, env); }, e.node);
    }

private:
    static EvalError fail(const Expr& e, std::string message)
    {
        return EvalError{std::move(message), e.loc, print_expr(e)};
    }

    EvalResult eval_node(const ast::Lit& n, const Expr&, const Env&) const
    {
        return std::visit([](const auto& v) { return EvalResult(Value(v)); }, n.value);
    }

    EvalResult eval_node(const ast::Var& n, const Expr& e, const Env& env) const
    {
        auto it = env.bindings.find(n.name);
        if (it == env.bindings.end()) {
            return fail(e, "unbound variable '" + n.name + "'");
        }
        return it->second;
    }

    EvalResult eval_node(const ast::Nav& n, const Expr& e, const Env& env) const
    {
        EvalResult target = eval(*n.target, env);
        if (!target.ok()) {
            return target;
        }
        if (!target.value().is<ElementRef>()) {
            return fail(e, "type mismatch: cannot navigate '" + n.feature + "' on " +
                               std::string(type_name(target.value())));
        }
        return feature(target.value().as<ElementRef>(), n.feature, e);
    }

    EvalResult feature(const ElementRef& ref, const std::string& name, const Expr& e) const
    {
        auto unknown = [&]() {
            return fail(e, "unknown feature '" + name + "' on " + std::string(to_string(ref.kind)));
        };
        switch (ref.kind) {
        case ElementKind::Class: {
            const ClassDef& cls = model_.classes.at(ref.owner);
            if (name == "name") {
                return Value(cls.name);
            }
            if (name == "superclasses") {
                Sequence seq;
                for (const auto& super : cls.superclasses) {
                    auto idx = model_.class_index(super);
                    if (!idx) {
                        return fail(e, "unresolved superclass '" + super + "'");
                    }
                    seq.emplace_back(ElementRef{ElementKind::Class, *idx, 0});
                }
                return Value(std::move(seq));
            }
            if (name == "attributes") {
                Sequence seq;
                for (std::size_t i = 0; i < cls.attributes.size(); ++i) {
                    seq.emplace_back(ElementRef{ElementKind::Attribute, ref.owner, i});
                }
                return Value(std::move(seq));
            }
            if (name == "operations") {
                Sequence seq;
                for (std::size_t i = 0; i < cls.operations.size(); ++i) {
                    seq.emplace_back(ElementRef{ElementKind::Operation, ref.owner, i});
                }
                return Value(std::move(seq));
            }
            if (name == "stereotypes") {
                Sequence seq;
                for (const auto& s : cls.stereotypes) {
                    seq.emplace_back(s);
                }
                return Value(std::move(seq));
            }
            return unknown();
        }
        case ElementKind::Statechart: {
            const Statechart& chart = model_.statecharts.at(ref.owner);
            if (name == "name") {
                return Value(chart.name);
            }
            if (name == "states") {
                Sequence seq;
                for (const auto& s : chart.states) {
                    seq.emplace_back(s.name);
                }
                return Value(std::move(seq));
            }
            if (name == "transitions") {
                Sequence seq;
                for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
                    seq.emplace_back(ElementRef{ElementKind::Transition, ref.owner, i});
                }
                return Value(std::move(seq));
            }
            if (name == "attachedTo") {
                auto idx = model_.class_index(chart.attached_to);
                if (!idx) {
                    return fail(e, "unresolved class '" + chart.attached_to + "'");
                }
                return Value(ElementRef{ElementKind::Class, *idx, 0});
            }
            return unknown();
        }
        case ElementKind::Transition: {
            const Transition& t = model_.statecharts.at(ref.owner).transitions.at(ref.index);
            if (name == "source") return Value(t.source);
            if (name == "target") return Value(t.target);
            if (name == "event") return Value(t.event);
            return unknown();
        }
        case ElementKind::Attribute:
            if (name == "name") return Value(model_.classes.at(ref.owner).attributes.at(ref.index).name);
            return unknown();
        case ElementKind::Operation:
            if (name == "name") return Value(model_.classes.at(ref.owner).operations.at(ref.index).name);
            return unknown();
        case ElementKind::State:
            if (name == "name") return Value(model_.statecharts.at(ref.owner).states.at(ref.index).name);
            return unknown();
        }
        return unknown();
    }

    EvalResult eval_node(const ast::Call& n, const Expr& e, const Env& env) const
    {
        const std::size_t arity = n.fn == Builtin::has_stereotype ? 2 : 1;
        if (n.args.size() != arity) {
            return fail(e, std::string(to_string(n.fn)) + " expects " + std::to_string(arity) + " argument(s)");
        }
        std::vector<Value> args;
        for (const auto& arg : n.args) {
            EvalResult r = eval(*arg, env);
            if (!r.ok()) {
                return r;
            }
            args.push_back(r.value());
        }
        switch (n.fn) {
        case Builtin::size:
        case Builtin::is_empty: {
            if (!args[0].is<Sequence>()) {
                return fail(e, "type mismatch: " + std::string(to_string(n.fn)) + " expects a sequence, got " +
                                   std::string(type_name(args[0])));
            }
            const auto count = args[0].as<Sequence>().size();
            if (n.fn == Builtin::size) {
                return Value(static_cast<std::int64_t>(count));
            }
            return Value(count == 0);
        }
        case Builtin::has_stereotype: {
            if (!args[0].is<ElementRef>() || !args[1].is<std::string>()) {
                return fail(e, "type mismatch: hasStereotype expects (element, String)");
            }
            const ElementRef& ref = args[0].as<ElementRef>();
            const bool has = ref.kind == ElementKind::Class &&
                             model_.classes.at(ref.owner).stereotypes.count(args[1].as<std::string>()) != 0;
            return Value(has);
        }
        }
        return fail(e, "unknown function");
    }

    EvalResult eval_node(const ast::Quant& n, const Expr& e, const Env& env) const
    {
        EvalResult domain = eval(*n.domain, env);
        if (!domain.ok()) {
            return domain;
        }
        if (!domain.value().is<Sequence>()) {
            return fail(e, "type mismatch: quantifier domain is " + std::string(type_name(domain.value())));
        }
        bool all = true;
        bool any = false;
        for (const Value& item : domain.value().as<Sequence>()) {
            EvalResult body = eval(*n.body, env.with(n.var, item));
            if (!body.ok()) {
                return body;
            }
            if (!body.value().is<bool>()) {
                return fail(e, "type mismatch: quantifier body is " + std::string(type_name(body.value())));
            }
            const bool holds = body.value().as<bool>();
            all = all && holds;
            any = any || holds;
        }
        return Value(n.kind == Quantifier::forall ? all : any);
    }

    EvalResult eval_node(const ast::Not& n, const Expr& e, const Env& env) const
    {
        EvalResult operand = eval(*n.operand, env);
        if (!operand.ok()) {
            return operand;
        }
        if (!operand.value().is<bool>()) {
            return fail(e, "type mismatch: not expects Boolean, got " + std::string(type_name(operand.value())));
        }
        return Value(!operand.value().as<bool>());
    }

    EvalResult eval_node(const ast::Logic& n, const Expr& e, const Env& env) const
    {
        const std::string op(to_string(n.op));
        EvalResult lhs = eval(*n.lhs, env);
        if (!lhs.ok()) {
            return lhs;
        }
        if (!lhs.value().is<bool>()) {
            return fail(e, "type mismatch: " + op + " expects Boolean operands, got " +
                               std::string(type_name(lhs.value())));
        }
        const bool l = lhs.value().as<bool>();
        if (n.op == LogicOp::and_ && !l) return Value(false);
        if (n.op == LogicOp::or_ && l) return Value(true);
        if (n.op == LogicOp::implies && !l) return Value(true);

        EvalResult rhs = eval(*n.rhs, env);
        if (!rhs.ok()) {
            return rhs;
        }
        if (!rhs.value().is<bool>()) {
            return fail(e, "type mismatch: " + op + " expects Boolean operands, got " +
                               std::string(type_name(rhs.value())));
        }
        return rhs;
    }

    EvalResult eval_node(const ast::Compare& n, const Expr& e, const Env& env) const
    {
        EvalResult lhs = eval(*n.lhs, env);
        if (!lhs.ok()) {
            return lhs;
        }
        EvalResult rhs = eval(*n.rhs, env);
        if (!rhs.ok()) {
            return rhs;
        }
        const Value& a = lhs.value();
        const Value& b = rhs.value();
        if (a.data.index() != b.data.index()) {
            return fail(e, "type mismatch: cannot compare " + std::string(type_name(a)) + " with " +
                               std::string(type_name(b)));
        }
        switch (n.op) {
        case CompareOp::eq: return Value(a == b);
        case CompareOp::ne: return Value(!(a == b));
        default: break;
        }
        int order = 0;
        if (a.is<std::int64_t>()) {
            const auto x = a.as<std::int64_t>();
            const auto y = b.as<std::int64_t>();
            order = x < y ? -1 : (x > y ? 1 : 0);
        } else if (a.is<std::string>()) {
            const int c = a.as<std::string>().compare(b.as<std::string>());
            order = c < 0 ? -1 : (c > 0 ? 1 : 0);
        } else {
            return fail(e, "type mismatch: ordering is undefined on " + std::string(type_name(a)));
        }
        switch (n.op) {
        case CompareOp::lt: return Value(order < 0);
        case CompareOp::le: return Value(order <= 0);
        case CompareOp::gt: return Value(order > 0);
        case CompareOp::ge: return Value(order >= 0);
        default: return Value(false);
        }
    }

    EvalResult eval_node(const ast::Arith& n, const Expr& e, const Env& env) const
    {
        EvalResult lhs = eval(*n.lhs, env);
        if (!lhs.ok()) {
            return lhs;
        }
        EvalResult rhs = eval(*n.rhs, env);
        if (!rhs.ok()) {
            return rhs;
        }
        if (!lhs.value().is<std::int64_t>() || !rhs.value().is<std::int64_t>()) {
            return fail(e, "type mismatch: arithmetic expects Integer operands");
        }
        std::int64_t out = 0;
        const bool overflow = n.op == ArithOp::add
                                  ? __builtin_add_overflow(lhs.value().as<std::int64_t>(), rhs.value().as<std::int64_t>(), &out)
                                  : __builtin_sub_overflow(lhs.value().as<std::int64_t>(), rhs.value().as<std::int64_t>(), &out);
        if (overflow) {
            return fail(e, "integer overflow");
        }
        return Value(out);
    }

    const Model& model_;
};

std::vector<ElementRef> elements_of(const Model& model, ElementKind kind)
{
    std::vector<ElementRef> out;
    for (const auto& ref : all_elements(model)) {
        if (ref.kind == kind) {
            out.push_back(ref);
        }
    }
    return out;
}

bool literal_matches(const Literal& value, TagType type)
{
    switch (type) {
    case TagType::string: return std::holds_alternative<std::string>(value);
    case TagType::int_: return std::holds_alternative<std::int64_t>(value);
    case TagType::bool_: return std::holds_alternative<bool>(value);
    }
    return false;
}

}  // namespace

EvalResult eval(const Expr& expr, const Env& env)
{
    if (!env.model) {
        return EvalError{"no model bound", expr.loc, print_expr(expr)};
    }
    return Evaluator(*env.model).eval(expr, env);
}

std::vector<Diagnostic> check_constraints(const Model& model, const EffectiveDefinitions& eff)
{
    std::vector<Diagnostic> diags;
    const Evaluator evaluator(model);

    for (const auto* reg : eff.ordered_constraints()) {
        const ConstraintDef& c = reg->def;
        if (!c.body) {
            continue;
        }
        for (const auto& ref : elements_of(model, c.scope)) {
            Env env{&model, {{"self", Value(ref)}}};
            EvalResult r = evaluator.eval(*c.body, env);
            Diagnostic d{Severity::error, "E201", element_location(model, ref), element_path(model, ref), {},
                         reg->provenance.package_id};
            if (!r.ok()) {
                d.message = "constraint '" + c.name + "' could not be evaluated: " + r.error().message;
            } else if (!r.value().is<bool>()) {
                d.message = "constraint '" + c.name + "' evaluated to " + describe(r.value()) + ", not a Boolean";
            } else if (!r.value().as<bool>()) {
                const bool warn = c.severity == Severity::warning;
                d.severity = c.severity;
                d.code = warn ? "W200" : "E200";
                d.message = "constraint '" + c.name + "' violated";
            } else {
                continue;
            }
            diags.push_back(std::move(d));
        }
    }

    // Option-activated built-ins.
    if (eff.option(options::kMultipleInheritance) == "forbidden") {
        const auto rule = build::compare(CompareOp::le,
                                         build::call(Builtin::size, {build::nav(build::var("self"), "superclasses")}),
                                         build::lit(std::int64_t{1}));
        const std::string prov = eff.scalars.at(std::string(options::kMultipleInheritance)).provenance.package_id;
        for (const auto& ref : elements_of(model, ElementKind::Class)) {
            EvalResult r = evaluator.eval(*rule, Env{&model, {{"self", Value(ref)}}});
            if (!r.ok() || !r.value().as<bool>()) {
                const auto& cls = model.classes[ref.owner];
                diags.push_back({Severity::error, "E210", cls.loc, cls.name,
                                 "multiple inheritance is forbidden: '" + cls.name + "' specializes " +
                                     std::to_string(cls.superclasses.size()) + " classes",
                                 prov});
            }
        }
    }

    for (const auto& cls : model.classes) {
        for (const auto& s : cls.stereotypes) {
            auto it = eff.stereotypes.find(s);
            if (it == eff.stereotypes.end()) {
                diags.push_back({Severity::warning, "W201", cls.loc, cls.name,
                                 "stereotype '" + s + "' is not declared by the preface", {}});
                continue;
            }
            const StereotypeDef& def = it->second.def;
            const std::string& prov = it->second.provenance.package_id;
            if (def.base != ElementKind::Class) {
                diags.push_back({Severity::error, "E205", cls.loc, cls.name,
                                 "stereotype '" + s + "' applies to " + std::string(to_string(def.base)) +
                                     ", not Class",
                                 prov});
            }
            for (const auto& tag : def.required_tags) {
                if (cls.tagged_values.count(tag) == 0) {
                    diags.push_back({Severity::error, "E203", cls.loc, cls.name,
                                     "stereotype '" + s + "' requires tagged value '" + tag + "'", prov});
                }
            }
        }
        for (const auto& [tag, value] : cls.tagged_values) {
            auto it = eff.tags.find(tag);
            if (it == eff.tags.end()) {
                diags.push_back({Severity::warning, "W204", cls.loc, cls.name,
                                 "tag '" + tag + "' is not declared by the preface", {}});
            } else if (!literal_matches(value, it->second.def.type)) {
                diags.push_back({Severity::error, "E204", cls.loc, cls.name,
                                 "tag '" + tag + "' expects a " + std::string(to_string(it->second.def.type)) +
                                     " value",
                                 it->second.provenance.package_id});
            }
        }
    }

    const bool induction_enabled = eff.transform_enabled(kStatechartToClass);
    for (const auto& chart : model.statecharts) {
        const ClassDef* cls = model.find_class(chart.attached_to);
        if (!cls) {
            continue;
        }
        if (!induction_enabled) {
            for (const auto& event : chart.events()) {
                if (cls->find_operation(event)) {
                    continue;
                }
                std::size_t first = 0;
                while (chart.transitions[first].event != event) {
                    ++first;
                }
                diags.push_back({Severity::warning, "W202", chart.transitions[first].loc,
                                 chart.name + "/" + std::to_string(first),
                                 "event " + event + " has no matching operation in class '" + cls->name + "'",
                                 {}});
            }
        }

        // Guards only have to be evaluable over the class's Boolean attributes.
        const auto self = Value(ElementRef{ElementKind::Class, *model.class_index(cls->name), 0});
        for (std::size_t i = 0; i < chart.transitions.size(); ++i) {
            const Transition& t = chart.transitions[i];
            if (!t.guard) {
                continue;
            }
            for (const bool assignment : {false, true}) {
                Env env{&model, {{"self", self}}};
                for (const auto& attr : cls->attributes) {
                    if (attr.type == kBooleanType) {
                        env.bindings.insert_or_assign(attr.name, Value(assignment));
                    }
                }
                EvalResult r = evaluator.eval(*t.guard, env);
                if (!r.ok() || !r.value().is<bool>()) {
                    const std::string why = r.ok() ? "evaluates to " + describe(r.value()) : r.error().message;
                    diags.push_back({Severity::error, "E220", t.loc, chart.name + "/" + std::to_string(i),
                                     "guard is not a Boolean over the attributes of '" + cls->name + "': " + why,
                                     {}});
                    break;
                }
            }
        }
    }
    return diags;
}

}  // namespace preface
