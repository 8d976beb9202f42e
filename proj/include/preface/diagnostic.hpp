#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace preface {

/// A literal value as written in model and package sources.
using Literal = std::variant<bool, std::int64_t, std::string>;

/// Renders a literal the way it is written in source: `true`, `42`, `"text"`.
std::string render_literal(const Literal& value);

struct SourceLocation {
    std::string file;
    int line = 0;  // 1-based; 0 when the element was not parsed from text
    int column = 0;

    [[nodiscard]] bool known() const { return line > 0; }
    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class Severity { error, warning, info };

std::string_view to_string(Severity severity);

/// A finding against a model or a preface. Codes are stable:
/// E0xx structural, E1xx preface, E2xx constraints, E3xx transforms,
/// W-prefixed warnings and I-prefixed informational notes.
struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;
    SourceLocation location;
    std::string path;        // element path or package id
    std::string message;
    std::string provenance;  // package that supplied the violated definition, if any

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

[[nodiscard]] std::size_t count_severity(std::span<const Diagnostic> diags, Severity severity);
[[nodiscard]] bool has_errors(std::span<const Diagnostic> diags);

}  // namespace preface
