#include <algorithm>
#include <fstream>
#include <sstream>

#include "preface/textio.hpp"

namespace preface {

PackageRepository load_repository(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw ParseError(SourceLocation{dir.string(), 0, 0}, "preface directory not found");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".preface") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    PackageRepository repo;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ParseError(SourceLocation{path.string(), 0, 0}, "cannot read file");
        }
        std::ostringstream text;
        text << in.rdbuf();
        Package pkg = parse_package(text.str(), path.string());
        if (repo.find(pkg.id)) {
            throw ParseError(pkg.loc, "package '" + pkg.id + "' is declared in more than one file");
        }
        repo.add(std::move(pkg));
    }
    return repo;
}

}  // namespace preface
