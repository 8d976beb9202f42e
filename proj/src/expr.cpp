#include "preface/expr.hpp"

namespace preface {

namespace {

template <class T>
bool node_equal(const T& a, const T& b);

template <>
bool node_equal(const ast::Lit& a, const ast::Lit& b) { return a.value == b.value; }
template <>
bool node_equal(const ast::Var& a, const ast::Var& b) { return a.name == b.name; }
template <>
bool node_equal(const ast::Nav& a, const ast::Nav& b)
{
    return a.feature == b.feature && same_expr(a.target, b.target);
}
template <>
bool node_equal(const ast::Call& a, const ast::Call& b)
{
    if (a.fn != b.fn || a.args.size() != b.args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!same_expr(a.args[i], b.args[i])) {
            return false;
        }
    }
    return true;
}
template <>
bool node_equal(const ast::Quant& a, const ast::Quant& b)
{
    return a.kind == b.kind && a.var == b.var && same_expr(a.domain, b.domain) &&
           same_expr(a.body, b.body);
}
template <>
bool node_equal(const ast::Not& a, const ast::Not& b) { return same_expr(a.operand, b.operand); }

template <class T>
bool binary_equal(const T& a, const T& b)
{
    return a.op == b.op && same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
}
template <>
bool node_equal(const ast::Logic& a, const ast::Logic& b) { return binary_equal(a, b); }
template <>
bool node_equal(const ast::Compare& a, const ast::Compare& b) { return binary_equal(a, b); }
template <>
bool node_equal(const ast::Arith& a, const ast::Arith& b) { return binary_equal(a, b); }

ExprPtr make(Expr::Node node, SourceLocation loc)
{
    return std::make_shared<const Expr>(Expr{std::move(node), std::move(loc)});
}

}  // namespace

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node.index() != b.node.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& lhs) {
            using T = std::decay_t<decltype(lhs)>;
            return node_equal(lhs, std::get<T>(b.node));
        },
        a.node);
}

bool same_expr(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b) {
        return !a && !b;
    }
    return a == b || *a == *b;
}

namespace build {

ExprPtr lit(Literal value, SourceLocation loc) { return make(ast::Lit{std::move(value)}, std::move(loc)); }
ExprPtr var(std::string name, SourceLocation loc) { return make(ast::Var{std::move(name)}, std::move(loc)); }
ExprPtr nav(ExprPtr target, std::string feature, SourceLocation loc)
{
    return make(ast::Nav{std::move(target), std::move(feature)}, std::move(loc));
}
ExprPtr call(Builtin fn, std::vector<ExprPtr> args, SourceLocation loc)
{
    return make(ast::Call{fn, std::move(args)}, std::move(loc));
}
ExprPtr quant(Quantifier kind, std::string var, ExprPtr domain, ExprPtr body, SourceLocation loc)
{
    return make(ast::Quant{kind, std::move(var), std::move(domain), std::move(body)}, std::move(loc));
}
ExprPtr not_(ExprPtr operand, SourceLocation loc) { return make(ast::Not{std::move(operand)}, std::move(loc)); }
ExprPtr logic(LogicOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc)
{
    return make(ast::Logic{op, std::move(lhs), std::move(rhs)}, std::move(loc));
}
ExprPtr compare(CompareOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc)
{
    return make(ast::Compare{op, std::move(lhs), std::move(rhs)}, std::move(loc));
}
ExprPtr arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc)
{
    return make(ast::Arith{op, std::move(lhs), std::move(rhs)}, std::move(loc));
}

ExprPtr fold(LogicOp op, const std::vector<ExprPtr>& operands)
{
    if (operands.empty()) {
        return nullptr;
    }
    ExprPtr acc = operands.front();
    for (std::size_t i = 1; i < operands.size(); ++i) {
        acc = logic(op, acc, operands[i]);
    }
    return acc;
}

}  // namespace build

std::string_view to_string(CompareOp op)
{
    switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "<>";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    }
    return "=";
}

std::string_view to_string(LogicOp op)
{
    switch (op) {
    case LogicOp::and_: return "and";
    case LogicOp::or_: return "or";
    case LogicOp::implies: return "implies";
    }
    return "and";
}

std::string_view to_string(Builtin fn)
{
    switch (fn) {
    case Builtin::size: return "size";
    case Builtin::is_empty: return "isEmpty";
    case Builtin::has_stereotype: return "hasStereotype";
    }
    return "size";
}

}  // namespace preface
