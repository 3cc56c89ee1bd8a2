#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "esr/numcore/error.hpp"
#include "esr/scenario/scenario.hpp"

using namespace esr;
using namespace esr::scenario;

namespace {

std::string bundled_text(const char* name) {
    std::ifstream in(resolve_scenario_path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_comments(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out << line << '\n';
    return out.str();
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

Error parse_error(const std::string& text) {
    try {
        (void)parse_scenario(text, "case.toml");
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected a scenario error");
    return Error(ErrorCode::InvariantViolation, "unreachable");
}

}  // namespace

TEST_CASE("reference three-state scenario loads") {
    const Scenario sc = load_scenario(resolve_scenario_path("simplified3-appendixC"));
    CHECK(sc.constants.T_f == 232.0);
    CHECK(sc.constants.R == 60.22);
    CHECK(sc.constants.A_cross == 343.0);
    CHECK(sc.constants.p == 10.0);
    CHECK(sc.solver.mode == CharMode::Literal3);
    REQUIRE(sc.literal3.has_value());
    CHECK(sc.literal3->regularizer == 1e6);
    CHECK(sc.solver.s_begin == 1e-5);
    CHECK(sc.solver.s_end == 10.0);
}

TEST_CASE("pressure in bar is stored in Pa") {
    const Scenario sc = load_scenario(resolve_scenario_path("full8-randomized"));
    CHECK(sc.constants.p == 3.0 * kPascalPerBar);
}

TEST_CASE("non-positive pressure names the field") {
    const Error e = parse_error(replace_line(bundled_text("full8-randomized"), "p = 3.0", "p = -1.0"));
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(e.message().find("constants.p") != std::string::npos);
}

TEST_CASE("T_ref defaults to 773 and the default is recorded") {
    const Scenario sc = parse_scenario(replace_line(bundled_text("full8-randomized"), "T_ref = 773.0", ""));
    CHECK(sc.kinetics.T_ref == 773.0);
    bool noted = false;
    for (const auto& d : sc.defaults_applied) noted = noted || d.find("kinetics.T_ref") != std::string::npos;
    CHECK(noted);
}

TEST_CASE("missing section field is reported") {
    const Error e = parse_error(replace_line(bundled_text("full8-randomized"), "p = 3.0", ""));
    CHECK(e.code() == ErrorCode::MissingField);
    CHECK(e.message().find("constants.p") != std::string::npos);
}

TEST_CASE("syntax errors carry a line number") {
    const Error e = parse_error("schema = 1\n[constants\nR = 1\n");
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.message().find("case.toml:2") != std::string::npos);
}

TEST_CASE("unbalanced stoichiometry names the reaction") {
    std::string text = bundled_text("full8-randomized");
    text += "\n[stoichiometry]\nnu = [\n  [-1, 0, 0, 1, 0, 0, 1],\n  [-1, 0, 1, 1, 1, 0, 0],\n"
            "  [0, -1, 0, 1, -1, 2, 0],\n  [0, -3, 0, 5, 0, 2, -1],\n]\n";
    const Error e = parse_error(text);
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(e.message().find("1c") != std::string::npos);
}

TEST_CASE("profile sampling") {
    CHECK(sample_profile(ProfileSpec::constant(4.5), 123.0) == 4.5);
    const ProfileSpec ramp{0.0, {0.0, 1.0, 3.0}, {1.0, 3.0, 7.0}};
    CHECK(sample_profile(ramp, 0.5) == doctest::Approx(2.0));
    CHECK(sample_profile(ramp, 2.0) == doctest::Approx(5.0));
    CHECK(sample_profile(ramp, 3.0) == 7.0);
    try {
        (void)sample_profile(ramp, 3.5);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
}

TEST_CASE("load -> echo -> load round trip for every bundled scenario") {
    for (const char* name : kBundledNames) {
        CAPTURE(name);
        const Scenario a = load_scenario(resolve_scenario_path(name));
        const std::string echo = echo_scenario(a);
        const Scenario b = parse_scenario(echo, name);
        CHECK(a == b);
        // Defaults become explicit on the first echo; only their comment lines drop out.
        CHECK(without_comments(echo_scenario(b)) == without_comments(echo));
    }
}

TEST_CASE("bundled scenarios have admissible initial and inlet states") {
    for (const char* name : kBundledNames) {
        CAPTURE(name);
        const Scenario sc = load_scenario(resolve_scenario_path(name));
        for (double z : {0.0, 0.5 * sc.constants.l1, sc.constants.l1})
            CHECK_NOTHROW(statespace::require_admissible(initial_state_at(sc, z)));
        CHECK_NOTHROW(statespace::require_admissible(inlet_state_at(sc, 0.0)));
    }
}

TEST_CASE("mode and form names") {
    CHECK(char_mode_from_name("literal3") == CharMode::Literal3);
    CHECK(char_mode_from_name("full8") == CharMode::Full8);
    CHECK(mol_form_from_name("original") == MolForm::Original);
    CHECK(to_string(MolForm::Conservation) == "conservation");
    CHECK_THROWS_AS(char_mode_from_name("full9"), Error);
}
