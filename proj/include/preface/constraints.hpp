#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "preface/diagnostic.hpp"
#include "preface/expr.hpp"
#include "preface/model.hpp"
#include "preface/preface.hpp"

namespace preface {

struct Value;
using Sequence = std::vector<Value>;

/// Runtime value of a constraint expression.
struct Value {
    std::variant<bool, std::int64_t, std::string, ElementRef, Sequence> data;

    Value() : data(false) {}
    Value(bool b) : data(b) {}
    Value(std::int64_t i) : data(i) {}
    Value(std::string s) : data(std::move(s)) {}
    Value(ElementRef e) : data(e) {}
    Value(Sequence s) : data(std::move(s)) {}

    template <class T>
    [[nodiscard]] bool is() const { return std::holds_alternative<T>(data); }
    template <class T>
    [[nodiscard]] const T& as() const { return std::get<T>(data); }

    friend bool operator==(const Value&, const Value&) = default;
};

std::string describe(const Value& value);

struct EvalError {
    std::string message;
    SourceLocation loc;
    std::string subexpression;
};

class EvalResult {
public:
    EvalResult(Value v) : result_(std::move(v)) {}
    EvalResult(EvalError e) : result_(std::move(e)) {}

    [[nodiscard]] bool ok() const { return std::holds_alternative<Value>(result_); }
    [[nodiscard]] const Value& value() const { return std::get<Value>(result_); }
    [[nodiscard]] const EvalError& error() const { return std::get<EvalError>(result_); }

private:
    std::variant<Value, EvalError> result_;
};

struct Env {
    const Model* model = nullptr;
    std::map<std::string, Value> bindings;

    [[nodiscard]] Env with(const std::string& name, Value value) const {
        Env copy = *this;
        copy.bindings.insert_or_assign(name, std::move(value));
        return copy;
    }
};

/// Strict evaluation. `and`/`or`/`implies` stop once the left operand decides
/// the result; everything else evaluates every operand, so a type error in
/// any quantifier body surfaces even when another body is already false.
EvalResult eval(const Expr& expr, const Env& env);

/// Runs every active constraint of the preface against every element of its
/// scope metaclass, plus the option-activated built-in checks. Expects a
/// model with a clean builtin_check.
std::vector<Diagnostic> check_constraints(const Model& model, const EffectiveDefinitions& eff);

}  // namespace preface
