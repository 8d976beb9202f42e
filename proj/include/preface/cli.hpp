#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "preface/diagnostic.hpp"

namespace preface::cli {

enum class Command { compose, validate, transform, explain, skeleton };
enum class Format { text, json };

struct RunConfig {
    Command command = Command::compose;
    std::optional<std::string> model_path;
    std::string preface_dir;
    std::string root_package;
    std::optional<std::string> output_path;
    std::optional<std::string> key;  // explain only
    Format format = Format::text;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int diagnostics = 1;
inline constexpr int usage = 2;
inline constexpr int composition = 3;
}  // namespace exit_code

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string render_diagnostics(std::span<const Diagnostic> diags, Format format);

}  // namespace preface::cli
