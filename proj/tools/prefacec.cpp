// prefacec: compose prefaces, validate and transform models, emit skeletons.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "preface/cli.hpp"

int main(int argc, char** argv)
{
    using namespace preface::cli;

    CLI::App app{"Compose language prefaces and apply them to models"};
    app.require_subcommand(1);

    RunConfig config;
    std::string model_path;
    std::string key;
    std::string output;
    std::string format = "text";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--preface", config.preface_dir, "directory of .preface package files")->required();
        sub->add_option("--root", config.root_package, "id of the root package")->required();
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    };

    auto* compose = app.add_subcommand("compose", "print the resolved preface");
    add_common(compose);

    auto* validate = app.add_subcommand("validate", "check a model against the preface");
    validate->add_option("model", model_path, "model file")->required();
    add_common(validate);

    auto* transform = app.add_subcommand("transform", "apply the preface's transforms to a model");
    transform->add_option("model", model_path, "model file")->required();
    transform->add_option("-o,--out", output, "write the transformed model here instead of stdout");
    add_common(transform);

    auto* explain = app.add_subcommand("explain", "show the override chain of a key");
    explain->add_option("key", key, "constant or option key")->required();
    add_common(explain);

    auto* skeleton = app.add_subcommand("skeleton", "emit skeleton and monitor code");
    skeleton->add_option("model", model_path, "model file")->required();
    skeleton->add_option("-o,--out", output, "output directory")->required();
    add_common(skeleton);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code::usage;
    }

    const std::map<CLI::App*, Command> commands = {{compose, Command::compose},
                                                   {validate, Command::validate},
                                                   {transform, Command::transform},
                                                   {explain, Command::explain},
                                                   {skeleton, Command::skeleton}};
    for (const auto& [sub, command] : commands) {
        if (sub->parsed()) {
            config.command = command;
        }
    }
    if (!model_path.empty()) {
        config.model_path = model_path;
    }
    if (!key.empty()) {
        config.key = key;
    }
    if (!output.empty()) {
        config.output_path = output;
    }
    config.format = format == "json" ? Format::json : Format::text;

    return run(config, std::cout, std::cerr);
}
