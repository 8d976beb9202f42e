#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "preface/diagnostic.hpp"

namespace preface {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class CompareOp { eq, ne, lt, le, gt, ge };
enum class LogicOp { and_, or_, implies };
enum class ArithOp { add, sub };
enum class Builtin { size, is_empty, has_stereotype };
enum class Quantifier { forall, exists };

namespace ast {

struct Lit {
    Literal value;
};
struct Var {
    std::string name;  // `self` is an ordinary variable bound by the checker
};
struct Nav {
    ExprPtr target;
    std::string feature;
};
struct Call {
    Builtin fn;
    std::vector<ExprPtr> args;
};
struct Quant {
    Quantifier kind;
    std::string var;
    ExprPtr domain;
    ExprPtr body;
};
struct Not {
    ExprPtr operand;
};
struct Logic {
    LogicOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Compare {
    CompareOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Arith {
    ArithOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

}  // namespace ast

/// Immutable constraint-expression node. Children are shared, so copying an
/// expression tree is cheap. Equality is structural and ignores locations.
struct Expr {
    using Node = std::variant<ast::Lit, ast::Var, ast::Nav, ast::Call, ast::Quant, ast::Not,
                              ast::Logic, ast::Compare, ast::Arith>;
    Node node;
    SourceLocation loc;
};

bool operator==(const Expr& a, const Expr& b);

/// Null-aware structural comparison of optional expression slots.
bool same_expr(const ExprPtr& a, const ExprPtr& b);

namespace build {

ExprPtr lit(Literal value, SourceLocation loc = {});
ExprPtr var(std::string name, SourceLocation loc = {});
ExprPtr nav(ExprPtr target, std::string feature, SourceLocation loc = {});
ExprPtr call(Builtin fn, std::vector<ExprPtr> args, SourceLocation loc = {});
ExprPtr quant(Quantifier kind, std::string var, ExprPtr domain, ExprPtr body, SourceLocation loc = {});
ExprPtr not_(ExprPtr operand, SourceLocation loc = {});
ExprPtr logic(LogicOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc = {});
ExprPtr compare(CompareOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc = {});
ExprPtr arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourceLocation loc = {});

inline ExprPtr and_(ExprPtr a, ExprPtr b) { return logic(LogicOp::and_, std::move(a), std::move(b)); }
inline ExprPtr or_(ExprPtr a, ExprPtr b) { return logic(LogicOp::or_, std::move(a), std::move(b)); }

/// Left-folds `operands` with `op`; a single operand is returned as is.
ExprPtr fold(LogicOp op, const std::vector<ExprPtr>& operands);

}  // namespace build

std::string_view to_string(CompareOp op);
std::string_view to_string(LogicOp op);
std::string_view to_string(Builtin fn);

}  // namespace preface
