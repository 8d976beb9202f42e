#include <sstream>

#include "preface/textio.hpp"

namespace preface {

namespace {

// Binding strength, loosest first.
enum Prec : int { kImplies = 1, kOr, kAnd, kNot, kCompare, kAdditive, kPostfix, kAtom };

int precedence(const Expr& e)
{
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ast::Logic>) {
                switch (n.op) {
                case LogicOp::implies: return kImplies;
                case LogicOp::or_: return kOr;
                case LogicOp::and_: return kAnd;
                }
                return kAnd;
            } else if constexpr (std::is_same_v<T, ast::Not>) {
                return kNot;
            } else if constexpr (std::is_same_v<T, ast::Compare>) {
                return kCompare;
            } else if constexpr (std::is_same_v<T, ast::Arith>) {
                return kAdditive;
            } else if constexpr (std::is_same_v<T, ast::Nav>) {
                return kPostfix;
            } else {
                return kAtom;
            }
        },
        e.node);
}

bool is_conjunction(const Expr& e)
{
    const auto* logic = std::get_if<ast::Logic>(&e.node);
    return logic && logic->op == LogicOp::and_;
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_child(std::ostream& os, const ExprPtr& child, int min_prec, bool force_parens = false)
{
    const bool parens = force_parens || precedence(*child) < min_prec;
    if (parens) os << "(";
    print(os, *child, parens ? kImplies : min_prec);
    if (parens) os << ")";
}

void print(std::ostream& os, const Expr& e, int)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ast::Lit>) {
                os << render_literal(n.value);
            } else if constexpr (std::is_same_v<T, ast::Var>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, ast::Nav>) {
                print_child(os, n.target, kPostfix);
                os << "." << n.feature;
            } else if constexpr (std::is_same_v<T, ast::Call>) {
                os << to_string(n.fn) << "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) os << ", ";
                    print_child(os, n.args[i], kImplies);
                }
                os << ")";
            } else if constexpr (std::is_same_v<T, ast::Quant>) {
                os << (n.kind == Quantifier::forall ? "forall(" : "exists(") << n.var << " in ";
                print_child(os, n.domain, kImplies);
                os << " | ";
                print_child(os, n.body, kImplies);
                os << ")";
            } else if constexpr (std::is_same_v<T, ast::Not>) {
                os << "not ";
                print_child(os, n.operand, kNot);
            } else if constexpr (std::is_same_v<T, ast::Logic>) {
                switch (n.op) {
                case LogicOp::implies:
                    print_child(os, n.lhs, kOr);
                    os << " implies ";
                    print_child(os, n.rhs, kImplies);
                    break;
                case LogicOp::or_:
                    // Conjunctions inside a disjunction are bracketed for readability.
                    print_child(os, n.lhs, kOr, is_conjunction(*n.lhs));
                    os << " or ";
                    print_child(os, n.rhs, kAnd, is_conjunction(*n.rhs));
                    break;
                case LogicOp::and_:
                    print_child(os, n.lhs, kAnd);
                    os << " and ";
                    print_child(os, n.rhs, kNot);
                    break;
                }
            } else if constexpr (std::is_same_v<T, ast::Compare>) {
                print_child(os, n.lhs, kAdditive);
                os << " " << to_string(n.op) << " ";
                print_child(os, n.rhs, kAdditive);
            } else {
                print_child(os, n.lhs, kAdditive);
                os << (n.op == ArithOp::add ? " + " : " - ");
                print_child(os, n.rhs, kPostfix);
            }
        },
        e.node);
}

std::string annotation(const Origin& origin)
{
    if (!origin.is_induced()) {
        return {};
    }
    return " // induced by " + origin.rule_id + " from " + origin.chart;
}

std::string metaclass_name(ElementKind kind) { return std::string(to_string(kind)); }

}  // namespace

std::string print_expr(const Expr& expr)
{
    std::ostringstream os;
    print(os, expr, kImplies);
    return os.str();
}

std::string print_model(const Model& model)
{
    std::ostringstream os;
    os << "model " << model.name << "\n";
    for (const auto& cls : model.classes) {
        os << "\nclass " << cls.name;
        if (!cls.superclasses.empty()) {
            os << " specializes ";
            for (std::size_t i = 0; i < cls.superclasses.size(); ++i) {
                os << (i ? ", " : "") << cls.superclasses[i];
            }
        }
        if (!cls.stereotypes.empty()) {
            os << " <<";
            bool first = true;
            for (const auto& s : cls.stereotypes) {
                os << (first ? "" : ", ") << s;
                first = false;
            }
            os << ">>";
        }
        os << " {\n";
        for (const auto& [key, value] : cls.tagged_values) {
            os << "  tag " << key << " = " << render_literal(value) << "\n";
        }
        for (const auto& attr : cls.attributes) {
            os << "  attribute " << attr.name << " : " << attr.type << annotation(attr.origin) << "\n";
        }
        for (const auto& op : cls.operations) {
            os << "  operation " << op.name << "(";
            for (std::size_t i = 0; i < op.params.size(); ++i) {
                os << (i ? ", " : "") << op.params[i].name << " : " << op.params[i].type;
            }
            os << ")";
            if (op.pre_authored) {
                os << " pre: " << print_expr(*op.pre_authored);
            }
            if (op.post_authored) {
                os << " post: " << print_expr(*op.post_authored);
            }
            os << annotation(op.origin) << "\n";
            if (op.pre_induced) {
                os << "  // induced pre " << op.name << " by " << op.pre_induced->origin.rule_id << " from "
                   << op.pre_induced->origin.chart << ": " << print_expr(*op.pre_induced->expr) << "\n";
            }
        }
        for (const auto& inv : cls.invariants) {
            os << "  invariant " << print_expr(*inv.expr) << annotation(inv.origin) << "\n";
        }
        os << "}\n";
    }
    for (const auto& chart : model.statecharts) {
        os << "\nstatechart " << chart.name << " for " << chart.attached_to << " {\n";
        for (const auto& state : chart.states) {
            os << "  " << (state.initial ? "initial " : "") << "state " << state.name << "\n";
        }
        for (const auto& t : chart.transitions) {
            os << "  transition " << t.source << " -> " << t.target << " on " << t.event;
            if (t.guard) {
                os << " [" << print_expr(*t.guard) << "]";
            }
            os << "\n";
        }
        os << "}\n";
    }
    return os.str();
}

std::string print_package(const Package& package)
{
    std::ostringstream os;
    os << "package " << render_literal(package.id) << " {\n";
    for (const auto& imp : package.imports) {
        os << "  import " << render_literal(imp) << "\n";
    }
    for (const auto& def : package.definitions) {
        os << "  ";
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, ConstDef>) {
                    os << "const " << d.key << " = " << render_literal(d.value);
                } else if constexpr (std::is_same_v<T, OptionDef>) {
                    os << "option " << d.key << " = " << d.value;
                } else if constexpr (std::is_same_v<T, StereotypeDef>) {
                    os << "stereotype " << d.name << " on " << metaclass_name(d.base);
                    if (!d.required_tags.empty()) {
                        os << " requires ";
                        for (std::size_t i = 0; i < d.required_tags.size(); ++i) {
                            os << (i ? ", " : "") << d.required_tags[i];
                        }
                    }
                } else if constexpr (std::is_same_v<T, TagDef>) {
                    os << "tagdef " << d.name << " : " << to_string(d.type);
                } else if constexpr (std::is_same_v<T, ConstraintDef>) {
                    os << "constraint " << d.name << " on " << metaclass_name(d.scope) << " severity "
                       << to_string(d.severity) << " : " << print_expr(*d.body);
                } else if constexpr (std::is_same_v<T, PredicatedRuleDef>) {
                    os << "rule " << d.property << " when ";
                    std::visit(
                        [&](const auto& p) {
                            using P = std::decay_t<decltype(p)>;
                            if constexpr (std::is_same_v<P, pred::All>) {
                                os << "all";
                            } else if constexpr (std::is_same_v<P, pred::HasStereotype>) {
                                os << "stereotype(" << p.name << ")";
                            } else {
                                os << "metaclass(" << metaclass_name(p.kind) << ")";
                            }
                        },
                        d.predicate);
                    os << " = " << d.value;
                } else {
                    os << "transform " << d.id << (d.enabled ? " on" : " off");
                }
            },
            def.body);
        os << "\n";
    }
    os << "}\n";
    return os.str();
}

namespace {

std::string scalar_text(const ScalarBinding& b)
{
    if (b.is_option) {
        if (const auto* s = std::get_if<std::string>(&b.value)) {
            return *s;
        }
    }
    return render_literal(b.value);
}

std::string source_name(const Provenance& p) { return p.is_default() ? "default" : p.package_id; }

std::string predicate_text(const Predicate& p)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, pred::All>) {
                return "all";
            } else if constexpr (std::is_same_v<T, pred::HasStereotype>) {
                return "stereotype(" + v.name + ")";
            } else {
                return "metaclass(" + metaclass_name(v.kind) + ")";
            }
        },
        p);
}

}  // namespace

std::string print_report(const EffectiveDefinitions& eff)
{
    std::ostringstream os;
    if (!eff.flattened_order.empty()) {
        os << "packages (in order):\n";
        for (const auto& id : eff.flattened_order) {
            os << "  " << id << "\n";
        }
    }

    os << "scalars:\n";
    for (const auto& [key, binding] : eff.scalars) {
        os << "  " << key << " = " << scalar_text(binding) << " (";
        if (binding.provenance.is_default()) {
            os << "default";
        } else {
            os << binding.provenance.package_id;
            const auto& history = eff.scalar_history.at(key);
            if (history.size() > 1) {
                os << ", overrides ";
                for (std::size_t i = 0; i + 1 < history.size(); ++i) {
                    os << (i ? ", " : "") << source_name(history[i].provenance) << ": " << scalar_text(history[i]);
                }
            }
        }
        os << ")\n";
    }

    if (!eff.predicated.empty()) {
        os << "predicated rules (newest first):\n";
        for (const auto& [key, chain] : eff.predicated) {
            os << "  " << key << ":\n";
            for (const auto& entry : chain) {
                os << "    when " << predicate_text(entry.predicate) << " = " << entry.value << " ("
                   << entry.provenance.package_id << ")\n";
            }
        }
    }
    if (!eff.stereotypes.empty()) {
        os << "stereotypes:\n";
        for (const auto& [name, reg] : eff.stereotypes) {
            os << "  " << name << " on " << metaclass_name(reg.def.base);
            if (!reg.def.required_tags.empty()) {
                os << " requires ";
                for (std::size_t i = 0; i < reg.def.required_tags.size(); ++i) {
                    os << (i ? ", " : "") << reg.def.required_tags[i];
                }
            }
            os << " (" << reg.provenance.package_id << ")\n";
        }
    }
    if (!eff.tags.empty()) {
        os << "tags:\n";
        for (const auto& [name, reg] : eff.tags) {
            os << "  " << name << " : " << to_string(reg.def.type) << " (" << reg.provenance.package_id << ")\n";
        }
    }
    if (!eff.constraints.empty()) {
        os << "constraints:\n";
        for (const auto& [name, reg] : eff.constraints) {
            os << "  " << name << " on " << metaclass_name(reg.def.scope) << " severity "
               << to_string(reg.def.severity) << " : " << print_expr(*reg.def.body) << " ("
               << reg.provenance.package_id << ")\n";
        }
    }
    if (!eff.transforms.empty()) {
        os << "transforms:\n";
        for (const auto& [id, reg] : eff.transforms) {
            os << "  " << id << " " << (reg.def ? "on" : "off") << " (" << reg.provenance.package_id << ")\n";
        }
    }
    return os.str();
}

std::string print_transform_report(const TransformReport& report)
{
    std::ostringstream os;
    auto section = [&](std::string_view title, const std::vector<ReportEntry>& entries) {
        if (entries.empty()) {
            return;
        }
        os << title << ":\n";
        for (const auto& e : entries) {
            os << "  " << e.path << ": " << e.description << "\n";
        }
    };
    section("induced attributes", report.induced_attributes);
    section("induced invariants", report.induced_invariants);
    section("induced operations", report.induced_operations);
    section("induced preconditions", report.induced_preconditions);
    section("effective preconditions", report.effective_preconditions);
    if (report.empty()) {
        os << "no changes\n";
    }
    return os.str();
}

}  // namespace preface
