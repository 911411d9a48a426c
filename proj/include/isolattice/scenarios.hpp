#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isolattice/wire.hpp"

namespace isolattice {

struct ScenarioInfo {
    std::string name;
    std::string description;
};

/// Registered scenarios in a fixed order.
std::vector<ScenarioInfo> list_scenarios();

/// Unset fields fall back to the scenario's defaults.
struct ScenarioParams {
    std::optional<Integer> l;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> count;
    SampleMode mode = SampleMode::automatic;  // for the image-shape checks
};

/// One check: what was computed, what the golden data expects, and where the
/// expectation comes from ("worked example", "derived" or "identity").
struct ScenarioStep {
    std::string description;
    std::string source;
    wire::Json computed;
    wire::Json expected;
    bool pass = false;
};

struct ScenarioReport {
    std::string name;
    wire::Json parameters;
    std::vector<ScenarioStep> steps;

    bool pass() const;
};

/// Deterministic for fixed parameters. Throws UnknownScenario.
ScenarioReport run_scenario(std::string_view name, const ScenarioParams& params = {});

wire::Json encode(const ScenarioReport& report);

/// Raw golden JSON for a scenario, embedded at build time.
std::string_view scenario_golden(std::string_view name);

/// Golden matrices are written as Laurent monomials in l: "0", "-1", "3/2",
/// "l", "-l^-1", "2*l^2".
Rational evaluate_in_l(std::string_view entry, const Integer& l);
RatMatrix evaluate_matrix_in_l(const wire::Json& rows, const Integer& l);

}  // namespace isolattice
