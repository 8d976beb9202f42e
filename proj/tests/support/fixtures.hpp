#pragma once

#include <string>

#include "preface/model.hpp"
#include "preface/preface.hpp"
#include "preface/textio.hpp"

namespace preface::testing {

inline const char* const kThreeStates = R"(model ThreeStates

class C {
  operation m1()
  operation m2()
  operation m3()
}

statechart SC for C {
  initial state s1
  state s2
  state s3
  transition s1 -> s2 on m1
  transition s2 -> s1 on m2
  transition s1 -> s3 on m3
  transition s2 -> s3 on m3
}
)";

inline Model three_states() { return parse_model(kThreeStates, "three_states.model"); }

inline Package package_from(const std::string& text) { return parse_package(text, "test.preface"); }

inline PackageRepository repo_of(std::initializer_list<std::string> texts)
{
    PackageRepository repo;
    for (const auto& t : texts) {
        repo.add(package_from(t));
    }
    return repo;
}

inline EffectiveDefinitions compose(const PackageRepository& repo, const std::string& root)
{
    return resolve(flatten_imports(repo, root));
}

/// A single package with the given body, composed on its own.
inline EffectiveDefinitions preface_with(const std::string& body)
{
    PackageRepository repo;
    repo.add(package_from("package \"p\" {\n" + body + "\n}\n"));
    return compose(repo, "p");
}

/// The max example: base package defines 10, project package redefines 8.
inline PackageRepository max_repo()
{
    return repo_of({
        R"(package "uml-core" { const max = 10 })",
        R"(package "project-p" { import "uml-core" const max = 8 })",
    });
}

}  // namespace preface::testing
