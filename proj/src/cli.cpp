#include "preface/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "preface/constraints.hpp"
#include "preface/model.hpp"
#include "preface/preface.hpp"
#include "preface/skeletongen.hpp"
#include "preface/textio.hpp"
#include "preface/transformer.hpp"

namespace preface::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(SourceLocation{path, 0, 0}, "cannot read file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

Json literal_json(const Literal& value)
{
    return std::visit([](const auto& v) { return Json(v); }, value);
}

struct Loaded {
    PackageRepository repo;
    EffectiveDefinitions eff;
    std::vector<Diagnostic> diagnostics;
};

Loaded load_preface(const RunConfig& config)
{
    Loaded out;
    out.repo = load_repository(config.preface_dir);
    out.eff = resolve(flatten_imports(out.repo, config.root_package));
    out.diagnostics = validate_preface(out.repo, config.root_package);
    return out;
}

Model load_model(const RunConfig& config)
{
    if (!config.model_path) {
        throw UsageError("a model file is required for this command");
    }
    return parse_model(read_file(*config.model_path), *config.model_path);
}

void append(std::vector<Diagnostic>& into, const std::vector<Diagnostic>& from)
{
    into.insert(into.end(), from.begin(), from.end());
}

int finish(std::span<const Diagnostic> diags, Format format, std::ostream& err)
{
    if (!diags.empty()) {
        err << render_diagnostics(diags, format);
        if (format == Format::json) {
            err << "\n";
        }
    }
    return has_errors(diags) ? exit_code::diagnostics : exit_code::ok;
}

int run_compose(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Loaded preface = load_preface(config);
    if (config.format == Format::json) {
        Json doc;
        doc["packages"] = preface.eff.flattened_order;
        Json scalars = Json::object();
        for (const auto& [key, binding] : preface.eff.scalars) {
            scalars[key] = {{"value", literal_json(binding.value)},
                            {"package", binding.provenance.package_id},
                            {"default", binding.provenance.is_default()}};
        }
        doc["scalars"] = scalars;
        Json transforms = Json::object();
        for (const auto& [id, reg] : preface.eff.transforms) {
            transforms[id] = reg.def;
        }
        doc["transforms"] = transforms;
        Json constraints = Json::array();
        for (const auto* reg : preface.eff.ordered_constraints()) {
            constraints.push_back(reg->def.name);
        }
        doc["constraints"] = constraints;
        out << doc.dump(2) << "\n";
    } else {
        out << print_report(preface.eff);
    }
    return finish(preface.diagnostics, config.format, err);
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Model model = load_model(config);
    Loaded preface = load_preface(config);
    std::vector<Diagnostic> diags = builtin_check(model);
    const bool structurally_clean = !has_errors(diags);
    append(diags, preface.diagnostics);
    if (structurally_clean) {
        append(diags, check_constraints(model, preface.eff));
    }
    const auto errors = count_severity(diags, Severity::error);
    const auto warnings = count_severity(diags, Severity::warning);
    if (config.format == Format::json) {
        out << Json{{"errors", errors}, {"warnings", warnings}}.dump() << "\n";
    } else {
        out << errors << (errors == 1 ? " error, " : " errors, ") << warnings
            << (warnings == 1 ? " warning" : " warnings") << "\n";
    }
    return finish(diags, config.format, err);
}

int run_transform(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Model model = load_model(config);
    Loaded preface = load_preface(config);
    std::vector<Diagnostic> diags = builtin_check(model);
    if (has_errors(diags)) {
        return finish(diags, config.format, err);
    }
    append(diags, preface.diagnostics);
    TransformResult result = apply_transforms(model, preface.eff);
    append(diags, result.report.diagnostics);

    const std::string text = print_model(result.model);
    if (config.output_path) {
        write_file(*config.output_path, text);
        out << print_transform_report(result.report);
    } else {
        out << text;
        err << print_transform_report(result.report);
    }
    return finish(diags, config.format, err);
}

int run_explain(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (!config.key) {
        throw UsageError("explain needs a key");
    }
    Loaded preface = load_preface(config);
    auto chain = explain(preface.eff, *config.key);
    if (!chain) {
        err << "error: '" << *config.key << "' is not defined by the preface\n";
        return exit_code::diagnostics;
    }
    auto source = [](const OverrideChain::Entry& e) {
        return e.provenance.is_default() ? std::string("default") : e.package_id;
    };
    const bool option = preface.eff.scalars.at(chain->key).is_option;
    auto shown = [option](const Literal& v) {
        const auto* s = std::get_if<std::string>(&v);
        return option && s ? *s : render_literal(v);
    };
    if (config.format == Format::json) {
        Json entries = Json::array();
        for (const auto& e : chain->entries) {
            entries.push_back({{"package", source(e)}, {"value", literal_json(e.value)}});
        }
        out << Json{{"key", chain->key},
                    {"winner", {{"package", source(chain->winner())}, {"value", literal_json(chain->winner().value)}}},
                    {"entries", entries}}
                   .dump(2)
            << "\n";
    } else {
        out << chain->key << " = " << shown(chain->winner().value) << "\n";
        for (std::size_t i = 0; i < chain->entries.size(); ++i) {
            const auto& e = chain->entries[i];
            out << "  " << (i + 1) << ". " << source(e) << ": " << shown(e.value)
                << (i + 1 == chain->entries.size() ? " (winner)" : "") << "\n";
        }
    }
    return finish(preface.diagnostics, config.format, err);
}

int run_skeleton(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (!config.output_path) {
        throw UsageError("skeleton needs an output directory (--out)");
    }
    Model model = load_model(config);
    Loaded preface = load_preface(config);
    std::vector<Diagnostic> diags = builtin_check(model);
    if (has_errors(diags)) {
        return finish(diags, config.format, err);
    }
    append(diags, preface.diagnostics);
    TransformResult result = apply_transforms(model, preface.eff);
    append(diags, result.report.diagnostics);
    if (has_errors(diags)) {
        return finish(diags, config.format, err);
    }

    std::vector<SkeletonUnit> skeletons;
    std::vector<SkeletonUnit> monitors;
    try {
        skeletons = generate_skeleton(result.model, preface.eff);
        monitors = generate_monitor(result.model, preface.eff);
    } catch (const UntransformedInput& e) {
        finish(diags, config.format, err);
        err << "error: " << e.what() << "\n";
        return exit_code::diagnostics;
    }

    const std::filesystem::path dir(*config.output_path);
    std::filesystem::create_directories(dir);
    for (const auto& unit : skeletons) {
        const auto path = dir / (unit.class_name + ".skel");
        write_file(path, unit.text);
        out << "wrote " << path.string() << "\n";
    }
    for (const auto& unit : monitors) {
        const auto path = dir / (unit.class_name + ".monitor");
        write_file(path, unit.monitor_text);
        out << "wrote " << path.string() << "\n";
    }
    return finish(diags, config.format, err);
}

}  // namespace

std::string render_diagnostics(std::span<const Diagnostic> diags, Format format)
{
    if (format == Format::json) {
        Json array = Json::array();
        for (const auto& d : diags) {
            array.push_back({{"severity", to_string(d.severity)},
                             {"code", d.code},
                             {"file", d.location.file},
                             {"line", d.location.line},
                             {"column", d.location.column},
                             {"path", d.path},
                             {"message", d.message},
                             {"provenance", d.provenance}});
        }
        return array.dump(2);
    }
    std::ostringstream os;
    for (const auto& d : diags) {
        os << to_string(d.severity) << " " << d.code << " " << (d.location.file.empty() ? "-" : d.location.file)
           << ":" << d.location.line << ":" << d.location.column << " " << d.path << ": " << d.message;
        if (!d.provenance.empty()) {
            os << " [" << d.provenance << "]";
        }
        os << "\n";
    }
    return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        switch (config.command) {
        case Command::compose: return run_compose(config, out, err);
        case Command::validate: return run_validate(config, out, err);
        case Command::transform: return run_transform(config, out, err);
        case Command::explain: return run_explain(config, out, err);
        case Command::skeleton: return run_skeleton(config, out, err);
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const CompositionError& e) {
        err << "composition error: " << e.what() << "\n";
        return exit_code::composition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::diagnostics;
    }
    return exit_code::usage;
}

}  // namespace preface::cli
