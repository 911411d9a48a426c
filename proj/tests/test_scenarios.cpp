#include <doctest.h>

#include "isolattice/scenarios.hpp"

using namespace isolattice;

namespace {

ScenarioParams at(long l) {
    ScenarioParams p;
    p.l = Integer(l);
    return p;
}

void require_pass(const ScenarioReport& report) {
    for (const auto& step : report.steps) {
        INFO(report.name << ": " << step.description);
        CHECK(step.pass);
    }
    CHECK(report.pass());
    CHECK_FALSE(report.steps.empty());
}

}  // namespace

TEST_CASE("registry") {
    const auto all = list_scenarios();
    REQUIRE(all.size() == 3);
    CHECK(all[0].name == "cyclic-elliptic");
    CHECK(all[1].name == "elliptic-pol");
    CHECK(all[2].name == "surface-quotient");
    for (const auto& s : all) {
        CHECK_FALSE(s.description.empty());
        CHECK_FALSE(scenario_golden(s.name).empty());
    }
    CHECK_THROWS_AS(run_scenario("no-such-scenario"), UnknownScenario);
    CHECK_THROWS_AS(scenario_golden("no-such-scenario"), UnknownScenario);
}

TEST_CASE("elliptic scenarios across primes") {
    for (long l : {2, 3, 5, 7}) {
        CAPTURE(l);
        require_pass(run_scenario("cyclic-elliptic", at(l)));
        require_pass(run_scenario("elliptic-pol", at(l)));
    }
}

TEST_CASE("surface scenario") {
    require_pass(run_scenario("surface-quotient"));
    ScenarioParams two = at(2);
    require_pass(run_scenario("surface-quotient", two));
    ScenarioParams five = at(5);
    five.mode = SampleMode::sampled;
    five.count = 2000;
    five.seed = 11;
    require_pass(run_scenario("surface-quotient", five));
}

TEST_CASE("reports are deterministic and carry their parameters") {
    ScenarioParams p = at(5);
    p.mode = SampleMode::sampled;
    p.count = 500;
    p.seed = 3;
    const auto a = encode(run_scenario("surface-quotient", p));
    const auto b = encode(run_scenario("surface-quotient", p));
    CHECK(a == b);
    CHECK(a["parameters"]["l"] == 5);
    CHECK(a["parameters"]["seed"] == 3);
    CHECK(a["parameters"]["mode"] == "sampled");
    CHECK(a["pass"] == true);
    for (const auto& step : a["steps"]) {
        const std::string source = step["source"];
        CHECK((source == "worked example" || source == "derived" || source == "identity"));
    }
}

TEST_CASE("scenario prime must be prime") {
    CHECK_THROWS_AS(run_scenario("cyclic-elliptic", at(4)), InputError);
    CHECK_THROWS_AS(run_scenario("cyclic-elliptic", at(1)), InputError);
}

TEST_CASE("Laurent monomials in l") {
    const Integer l = 7;
    CHECK(evaluate_in_l("0", l) == 0);
    CHECK(evaluate_in_l("-1", l) == -1);
    CHECK(evaluate_in_l("3/2", l) == make_rational(3, 2));
    CHECK(evaluate_in_l("l", l) == 7);
    CHECK(evaluate_in_l("-l", l) == -7);
    CHECK(evaluate_in_l("l^2", l) == 49);
    CHECK(evaluate_in_l("-l^-1", l) == make_rational(-1, 7));
    CHECK(evaluate_in_l("2*l^2", l) == 98);
    CHECK(evaluate_in_l("1/2*l^-1", l) == make_rational(1, 14));
    CHECK_THROWS_AS(evaluate_in_l("x", l), InputError);
    const auto m = evaluate_matrix_in_l(wire::Json::parse(R"([["l^-1", "0"], ["0", "1"]])"), l);
    CHECK(m == RatMatrix{{make_rational(1, 7), 0}, {0, 1}});
}
