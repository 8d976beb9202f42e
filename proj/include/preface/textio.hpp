#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "preface/diagnostic.hpp"
#include "preface/expr.hpp"
#include "preface/model.hpp"
#include "preface/preface.hpp"
#include "preface/transformer.hpp"

namespace preface {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLocation loc, std::string expected, std::string found);
    ParseError(SourceLocation loc, std::string message);

    [[nodiscard]] const SourceLocation& location() const { return loc_; }
    [[nodiscard]] const std::string& expected() const { return expected_; }
    [[nodiscard]] const std::string& found() const { return found_; }

private:
    SourceLocation loc_;
    std::string expected_;
    std::string found_;
};

class ImportAfterDefinition : public ParseError {
public:
    using ParseError::ParseError;
};

Model parse_model(std::string_view text, std::string file = "<input>");
Package parse_package(std::string_view text, std::string file = "<input>");
ExprPtr parse_expr(std::string_view text, std::string file = "<input>");

std::string print_model(const Model& model);
std::string print_package(const Package& package);
std::string print_expr(const Expr& expr);
std::string print_report(const EffectiveDefinitions& eff);
std::string print_transform_report(const TransformReport& report);

/// Reads every `*.preface` file in `dir` (sorted by file name). Throws
/// ParseError on malformed files and on two files declaring one package id.
PackageRepository load_repository(const std::filesystem::path& dir);

}  // namespace preface
