#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "baoii/analytic.hpp"
#include "baoii/simulator.hpp"

namespace baoii {

struct SweepAxis {
    std::string param;  // m | p | d | k_m | k_lambda | eta
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    enum class Spacing { linear, log } spacing = Spacing::linear;

    std::vector<double> values() const;
};

// Everything the CLI commands need: rates, costs, stop rule, sweep axis and
// output location. Values come from defaults, then an optional preset, then
// the scenario file, then command-line overrides, in that order.
struct Scenario {
    RateParams params{1.0, 1.0, 1.0, 1.0};
    CostModel costs{5e-4, 1e-3};
    std::uint64_t seed = 1;
    StopRule stop{StopRule::Kind::cycles, 100000, 0.0};
    std::optional<double> warmup_s;
    EntityId viewer = EntityId::one;
    std::optional<SweepAxis> sweep;
    std::string preset;
    std::string out_dir;

    // raw inputs resolved by finalize_scenario
    std::optional<double> eta_pending;
    bool k_lambda_explicit = false;
};

// Illustrative operating points for three application families; the surveyed
// requirement ranges give rate/packet-size brackets, not operating points,
// so these are midpoint defaults meant for exploration.
//   high-immersion : m = 100 Hz, 500 B measurements, 1 kB transmissions
//   social-vr      : m = 60 Hz, 300 B measurements, cost ratio eta = 2
//   smart-city     : m = 0.1 Hz, 200 B telemetry, cost ratio eta = 2
Scenario preset_scenario(const std::string& name);

// Flat key = value file, '#' comments. Keys: preset, d, m1, m2, m (both),
// p, k_m, k_lambda, eta, seed, cycles, horizon, warmup, viewer, out_dir,
// sweep_param, sweep_from, sweep_to, sweep_points, sweep_spacing.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario(const std::map<std::string, std::string>& kv);

// Applies one key to an existing scenario (used for CLI overrides).
void apply_scenario_key(Scenario& sc, const std::string& key, const std::string& value);

// Finishes derived fields (k_lambda from eta, cost consistency) and checks
// the invariants. Call after all overrides.
void finalize_scenario(Scenario& sc);

} // namespace baoii
