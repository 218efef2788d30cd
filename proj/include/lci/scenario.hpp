#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lci/solver.hpp"

namespace lci {

// Flat, file-loadable description of a solve instance. Every field has a
// base-case default so an empty config reproduces the headline full-cycle
// scenario (entry age 25, HARA survivor needs, 18% loads on both contracts).
struct ScenarioConfig {
    std::string name = "custom";

    // [scenario]
    double initial_age = 25.0;
    double horizon = 85.0;  // years to the maximum age of 110
    double initial_wealth = 0.0;
    BequestMode bequest_mode = BequestMode::hara;

    // [preferences]
    double r = 0.032;
    double sigma = 2.0;
    double beta = 0.025317807984289897;  // -ln(0.975)
    double phi = 0.95;

    // [loads] — explicit kappas (> 0) take precedence over load fractions
    double load_ins = 0.18;
    double load_ann = 0.18;
    double kappa_ins = 0.0;
    double kappa_ann = 0.0;
    double pricing_rate = 0.02;
    double calibration_age = 65.0;

    // [mortality]
    double gompertz_m = 88.23;
    double gompertz_b = 9.38;

    // [profiles]
    double pension = 24360.0;
    double cb_join = -4897.43;        // survivor-needs level at t = 20 (age 45)
    double cb_retirement = 32900.0;   // survivor-needs level from age 65 on

    // [solver]
    SolverConfig solver;

    // [output] — not part of the solution identity (excluded from the hash)
    std::string output_dir = ".";
};

// Named preset configurations covering the reported exhibits. Unknown name
// throws ValidationError.
ScenarioConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Parse an INI-style config (sections, key = value, '#'/';' comments) on top
// of `base`. A `preset` key in [scenario] rebases onto that preset first.
// Unknown sections/keys and malformed values throw ParseError with a line
// number.
ScenarioConfig parse_config(std::istream& in, const ScenarioConfig& base = ScenarioConfig{});

// Resolve a config into solver inputs: derive kappas from loads where no
// explicit kappa is given, wire clocks and profiles. Validates preconditions.
Scenario build_scenario(const ScenarioConfig& config);

// Canonical text form of every semantic field (stable across runs); the FNV-1a
// hash of it keys the slice cache.
std::string canonical_serialization(const ScenarioConfig& config);
std::uint64_t config_hash(const ScenarioConfig& config);

// Binary round trip of solved slices for the warm cache.
void save_slices(const std::string& path, const std::vector<ValueSlice>& slices);
bool load_slices(const std::string& path, std::vector<ValueSlice>& slices);

}  // namespace lci
