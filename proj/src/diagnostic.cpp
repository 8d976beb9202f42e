#include "preface/diagnostic.hpp"

#include <algorithm>

namespace preface {

std::string render_literal(const Literal& value)
{
    if (const auto* b = std::get_if<bool>(&value)) {
        return *b ? "true" : "false";
    }
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
        return std::to_string(*i);
    }
    std::string out = "\"";
    for (char c : std::get<std::string>(value)) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string_view to_string(Severity severity)
{
    switch (severity) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
    }
    return "error";
}

std::size_t count_severity(std::span<const Diagnostic> diags, Severity severity)
{
    return static_cast<std::size_t>(std::count_if(
        diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == severity; }));
}

bool has_errors(std::span<const Diagnostic> diags)
{
    return count_severity(diags, Severity::error) > 0;
}

}  // namespace preface
