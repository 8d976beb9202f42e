#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "preface/skeletongen.hpp"
#include "preface/textio.hpp"
#include "preface/transformer.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace preface;
using namespace preface::testing;

namespace {

EffectiveDefinitions policy(const std::string& unexpected)
{
    return preface_with("transform statechart-to-class on\noption statechart.unexpected_event = " + unexpected);
}

Model transformed() { return apply_transforms(three_states(), policy("error")).model; }

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

std::size_t count_lines(const std::string& text, std::string_view needle)
{
    std::size_t n = 0;
    for (const auto& line : lines_of(text)) {
        n += line.find(needle) != std::string::npos ? 1 : 0;
    }
    return n;
}

const char* const kTransformedSkeleton = R"(// skeleton for class C
// framing.default = unconstrained
// communication.paradigm = procedure_call
CLASS C
  FLAG s1 = true
  FLAG s2 = false
  FLAG s3 = false
  INVARIANT (s1 and not s2 and not s3) or (not s1 and s2 and not s3) or (not s1 and not s2 and s3)
  ROUTINE m1()
    GUARD s1
      TRAP precondition_violation
    TODO body
    SET s1 = false
    SET s2 = true
    SET s3 = false
  END ROUTINE
  ROUTINE m2()
    GUARD s2
      TRAP precondition_violation
    TODO body
    SET s1 = true
    SET s2 = false
    SET s3 = false
  END ROUTINE
  ROUTINE m3()
    GUARD s1 or s2
      TRAP precondition_violation
    TODO body
    WHEN s1
      SET s1 = false
      SET s2 = false
      SET s3 = true
    WHEN s2
      SET s1 = false
      SET s2 = false
      SET s3 = true
    END WHEN
  END ROUTINE
END CLASS
)";

const char* const kTransformedMonitor = R"(// monitor for class C
MONITOR C
  CHART SC
    INITIAL s1
    AFTER EVERY ROUTINE ASSERT (s1 and not s2 and not s3) or (not s1 and s2 and not s3) or (not s1 and not s2 and s3)
    SEQUENCE m1 EXPECT s2
    SEQUENCE m1, m2 EXPECT s1
    SEQUENCE m1, m2, m3 EXPECT s3
    SEQUENCE m1, m3 EXPECT s3
    SEQUENCE m3 EXPECT s3
  END CHART
END MONITOR
)";

/// Lines of the routine named `name`, from its ROUTINE line to END ROUTINE.
std::string routine_block(const std::string& text, const std::string& name)
{
    const auto start = text.find("  ROUTINE " + name + "(");
    if (start == std::string::npos) {
        return {};
    }
    const auto end = text.find("  END ROUTINE\n", start);
    return text.substr(start, end - start);
}

/// Valid transition-index tuples of length 1..max from the initial state,
/// listed in lexicographic order (prefixes first).
std::vector<std::vector<std::size_t>> walks(const Statechart& chart, std::size_t max)
{
    std::vector<std::vector<std::size_t>> out;
    const std::size_t n = chart.transitions.size();
    std::vector<std::vector<std::size_t>> frontier = {{}};
    for (std::size_t len = 1; len <= max; ++len) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : frontier) {
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<std::size_t> cand = prefix;
                cand.push_back(i);
                next.push_back(cand);
            }
        }
        frontier.clear();
        for (auto& cand : next) {
            bool ok = std::find(cand.begin(), cand.end() - 1, cand.back()) == cand.end() - 1;
            const std::string& from =
                cand.size() == 1 ? chart.initial_state()->name : chart.transitions[cand[cand.size() - 2]].target;
            ok = ok && chart.transitions[cand.back()].source == from;
            if (ok) {
                out.push_back(cand);
                frontier.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("the transformed skeleton under the error policy")
{
    const auto units = generate_skeleton(transformed(), policy("error"));
    REQUIRE(units.size() == 1);
    CHECK(units[0].class_name == "C");
    CHECK(units[0].text == kTransformedSkeleton);
    CHECK(count_lines(units[0].text, "TRAP precondition_violation") == 3);
    CHECK(count_lines(units[0].text, "RETURN // ignored") == 0);
}

TEST_CASE("the ignore policy only swaps marker lines")
{
    const Model m = transformed();
    const auto trap = lines_of(generate_skeleton(m, policy("error"))[0].text);
    const auto ignore = lines_of(generate_skeleton(m, policy("ignore"))[0].text);
    REQUIRE(trap.size() == ignore.size());
    std::size_t differing = 0;
    for (std::size_t i = 0; i < trap.size(); ++i) {
        if (trap[i] != ignore[i]) {
            ++differing;
            CHECK(trap[i] == "      TRAP precondition_violation");
            CHECK(ignore[i] == "      RETURN // ignored");
        }
    }
    CHECK(differing == 3);
}

TEST_CASE("header surfaces the documentation options")
{
    const auto eff = preface_with(R"(transform statechart-to-class on
        option framing.default = unmentioned_unchanged
        option communication.paradigm = asynchronous)");
    const auto text = generate_skeleton(apply_transforms(three_states(), eff).model, eff)[0].text;
    CHECK(text.find("// framing.default = unmentioned_unchanged\n") != std::string::npos);
    CHECK(text.find("// communication.paradigm = asynchronous\n") != std::string::npos);
}

TEST_CASE("a class without a statechart gets plain routines")
{
    const Model m = parse_model(R"(model M
class Plain specializes Base {
  attribute count : Integer
  operation bump(by : Integer)
}
class Base { }
)");
    const auto units = generate_skeleton(m, resolve({}));
    REQUIRE(units.size() == 2);
    const std::string& text = units[0].text;
    CHECK(text.find("CLASS Plain SPECIALIZES Base\n") != std::string::npos);
    CHECK(text.find("  FIELD count : Integer\n") != std::string::npos);
    CHECK(text.find("  ROUTINE bump(by : Integer)\n    TODO body\n  END ROUTINE\n") != std::string::npos);
    CHECK(count_lines(text, "GUARD") == 0);
    CHECK(generate_monitor(m, resolve({})).empty());
}

TEST_CASE("untransformed input is rejected")
{
    CHECK_THROWS_AS(generate_skeleton(three_states(), resolve({})), UntransformedInput);
    CHECK_THROWS_AS(generate_monitor(three_states(), resolve({})), UntransformedInput);
}

TEST_CASE("the transformed monitor")
{
    const auto units = generate_monitor(transformed(), policy("error"));
    REQUIRE(units.size() == 1);
    CHECK(units[0].monitor_text == kTransformedMonitor);
}

TEST_CASE("call sequences follow transition-simple paths")
{
    const Model m = three_states();
    const auto seqs = enumerate_call_sequences(m.statecharts[0], 3);
    std::vector<std::vector<std::string>> events;
    for (const auto& s : seqs) {
        events.push_back(s.events);
    }
    using V = std::vector<std::string>;
    CHECK(events == std::vector<V>{{"m1"}, {"m1", "m2"}, {"m1", "m2", "m3"}, {"m1", "m3"}, {"m3"}});
    CHECK(enumerate_call_sequences(m.statecharts[0], 0).empty());
    CHECK(enumerate_call_sequences(m.statecharts[0], 1).size() == 2);
}

TEST_CASE("call sequences match the exhaustive walk oracle")
{
    Rng rng(81);
    ModelShape shape;
    shape.clash_rate = 0;
    for (int round = 0; round < 200; ++round) {
        const Model m = random_model(rng, shape);
        for (const auto& chart : m.statecharts) {
            const auto actual = enumerate_call_sequences(chart, 3);
            const auto expected = walks(chart, 3);
            REQUIRE(actual.size() == expected.size());
            for (std::size_t i = 0; i < actual.size(); ++i) {
                std::vector<std::string> ev;
                for (auto t : expected[i]) {
                    ev.push_back(chart.transitions[t].event);
                }
                CHECK(actual[i].events == ev);
                CHECK(actual[i].final_state == chart.transitions[expected[i].back()].target);
            }
        }
    }
}

TEST_CASE("a single-state chart asserts its only flag")
{
    const Model m = parse_model("model M\nclass K { }\nstatechart S for K {\n  initial state idle\n}\n");
    const auto eff = policy("error");
    const auto out = apply_transforms(m, eff).model;
    const auto units = generate_monitor(out, eff);
    REQUIRE(units.size() == 1);
    CHECK(units[0].monitor_text.find("ASSERT idle\n") != std::string::npos);
    CHECK(count_lines(units[0].monitor_text, "SEQUENCE") == 0);
}

TEST_CASE("monitors for independent classes do not interact")
{
    const char* first = "class A { }\nstatechart SA for A {\n  initial state a\n  state b\n  transition a -> b on go\n}\n";
    const char* second = "class B { }\nstatechart SB for B {\n  initial state x\n  transition x -> x on spin\n}\n";
    const auto eff = policy("error");
    auto monitor = [&](const std::string& body) {
        return generate_monitor(apply_transforms(parse_model("model M\n" + body), eff).model, eff);
    };
    const auto both = monitor(std::string(first) + second);
    const auto only_a = monitor(first);
    const auto only_b = monitor(second);
    REQUIRE(both.size() == 2);
    CHECK(both[0] == only_a[0]);
    CHECK(both[1] == only_b[0]);
}

TEST_CASE("policy soundness, guard coverage and determinism on random models")
{
    Rng rng(83);
    for (int round = 0; round < 150; ++round) {
        const Model input = random_model(rng);
        for (const char* mode : {"error", "ignore"}) {
            const auto eff = policy(mode);
            const auto out = apply_transforms(input, eff);
            if (has_errors(out.report.diagnostics)) {
                continue;
            }
            const auto units = generate_skeleton(out.model, eff);
            CHECK(units == generate_skeleton(out.model, eff));
            CHECK(generate_monitor(out.model, eff) == generate_monitor(out.model, eff));
            const bool trap = std::string(mode) == "error";
            for (std::size_t c = 0; c < units.size(); ++c) {
                const auto& text = units[c].text;
                CHECK((count_lines(text, kTrapMarker) > 0) == (trap && count_lines(text, "GUARD") > 0));
                CHECK((count_lines(text, kIgnoreMarker) > 0) == (!trap && count_lines(text, "GUARD") > 0));
                CHECK(count_lines(text, "GUARD") == count_lines(text, trap ? kTrapMarker : kIgnoreMarker));
                for (const auto& op : out.model.classes[c].operations) {
                    const auto block = routine_block(text, op.name);
                    const std::size_t guards = count_lines(block, "GUARD");
                    if (op.pre_induced) {
                        CHECK(guards == 1);
                        CHECK(block.find("    GUARD " + print_expr(*op.effective_precondition()) + "\n") !=
                              std::string::npos);
                    } else {
                        CHECK(guards == (op.pre_authored ? 1u : 0u));
                    }
                }
            }
        }
    }
}
