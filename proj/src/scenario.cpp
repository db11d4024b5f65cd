#include "baoii/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "baoii/errors.hpp"

namespace baoii {

namespace {

double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw input_error("key '" + key + "': bad number '" + value + "'");
    }
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw input_error("key '" + key + "': bad integer '" + value + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

std::vector<double> SweepAxis::values() const {
    if (points < 1) throw input_error("sweep needs at least one point");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(from);
        return out;
    }
    if (spacing == Spacing::log) {
        if (!(from > 0.0) || !(to > 0.0)) {
            throw input_error("log-spaced sweep requires positive endpoints");
        }
        const double la = std::log10(from);
        const double lb = std::log10(to);
        for (int i = 0; i < points; ++i) {
            out.push_back(std::pow(10.0, la + (lb - la) * i / (points - 1)));
        }
    } else {
        for (int i = 0; i < points; ++i) {
            out.push_back(from + (to - from) * i / (points - 1));
        }
    }
    return out;
}

Scenario preset_scenario(const std::string& name) {
    Scenario sc;
    sc.preset = name;
    if (name == "high-immersion") {
        sc.params = {1.0, 100.0, 100.0, 1.0};
        sc.costs = {5e-4, 1e-3};
    } else if (name == "social-vr") {
        sc.params = {1.0, 60.0, 60.0, 1.0};
        sc.costs = CostModel::from_eta(3e-4, 2.0);
    } else if (name == "smart-city") {
        sc.params = {0.01, 0.1, 0.1, 1.0};
        sc.costs = CostModel::from_eta(2e-4, 2.0);
    } else {
        throw input_error("unknown preset '" + name +
                          "' (high-immersion | social-vr | smart-city)");
    }
    return sc;
}

void apply_scenario_key(Scenario& sc, const std::string& key, const std::string& value) {
    if (key == "preset") {
        const Scenario p = preset_scenario(value);
        sc.params = p.params;
        sc.costs = p.costs;
        sc.preset = value;
    } else if (key == "d") {
        sc.params.d = parse_number(key, value);
    } else if (key == "m1") {
        sc.params.m1 = parse_number(key, value);
    } else if (key == "m2") {
        sc.params.m2 = parse_number(key, value);
    } else if (key == "m") {
        sc.params.m1 = sc.params.m2 = parse_number(key, value);
    } else if (key == "p") {
        sc.params.p = parse_number(key, value);
    } else if (key == "k_m") {
        sc.costs.k_m = parse_number(key, value);
    } else if (key == "k_lambda") {
        sc.costs.k_lambda = parse_number(key, value);
        sc.k_lambda_explicit = true;
    } else if (key == "eta") {
        sc.eta_pending = parse_number(key, value);
    } else if (key == "seed") {
        char* end = nullptr;
        sc.seed = std::strtoull(value.c_str(), &end, 10);
        if (end == value.c_str() || *end != '\0') {
            throw input_error("key 'seed': bad integer '" + value + "'");
        }
    } else if (key == "cycles") {
        sc.stop.kind = StopRule::Kind::cycles;
        sc.stop.cycles = parse_long(key, value);
    } else if (key == "horizon") {
        sc.stop.kind = StopRule::Kind::horizon;
        sc.stop.horizon_s = parse_number(key, value);
    } else if (key == "warmup") {
        sc.warmup_s = parse_number(key, value);
    } else if (key == "viewer") {
        const long v = parse_long(key, value);
        if (v != 1 && v != 2) throw input_error("viewer must be 1 or 2");
        sc.viewer = v == 1 ? EntityId::one : EntityId::two;
    } else if (key == "out_dir") {
        sc.out_dir = value;
    } else if (key == "sweep_param") {
        if (!sc.sweep) sc.sweep.emplace();
        sc.sweep->param = value;
    } else if (key == "sweep_from") {
        if (!sc.sweep) sc.sweep.emplace();
        sc.sweep->from = parse_number(key, value);
    } else if (key == "sweep_to") {
        if (!sc.sweep) sc.sweep.emplace();
        sc.sweep->to = parse_number(key, value);
    } else if (key == "sweep_points") {
        if (!sc.sweep) sc.sweep.emplace();
        sc.sweep->points = static_cast<int>(parse_long(key, value));
    } else if (key == "sweep_spacing") {
        if (!sc.sweep) sc.sweep.emplace();
        if (value == "linear") {
            sc.sweep->spacing = SweepAxis::Spacing::linear;
        } else if (value == "log") {
            sc.sweep->spacing = SweepAxis::Spacing::log;
        } else {
            throw input_error("sweep_spacing must be linear or log");
        }
    } else {
        throw input_error("unknown scenario key '" + key + "'");
    }
}

Scenario parse_scenario(const std::map<std::string, std::string>& kv) {
    Scenario sc;
    // the preset provides the base the other keys override
    const auto preset_it = kv.find("preset");
    if (preset_it != kv.end()) apply_scenario_key(sc, "preset", preset_it->second);
    for (const auto& [key, value] : kv) {
        if (key == "preset") continue;
        apply_scenario_key(sc, key, value);
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open scenario file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw input_error(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw input_error(path + ":" + std::to_string(line_no) + ": empty key");
        }
        kv[key] = value;
    }
    return parse_scenario(kv);
}

void finalize_scenario(Scenario& sc) {
    if (sc.eta_pending) {
        if (sc.k_lambda_explicit) {
            const double implied = *sc.eta_pending * sc.costs.k_m;
            if (std::abs(implied - sc.costs.k_lambda) >
                1e-12 * std::max(1.0, std::abs(implied))) {
                throw input_error("eta and k_lambda are inconsistent: eta*k_m = " +
                                  std::to_string(implied));
            }
        } else {
            sc.costs.k_lambda = *sc.eta_pending * sc.costs.k_m;
        }
        sc.eta_pending.reset();
    }
    sc.params.check(/*allow_zero_p=*/true);
    sc.costs.check();
    if (sc.sweep) {
        const std::string& p = sc.sweep->param;
        if (p != "m" && p != "p" && p != "d" && p != "k_m" && p != "k_lambda" && p != "eta") {
            throw input_error("sweep_param must be one of m, p, d, k_m, k_lambda, eta");
        }
        sc.sweep->values();  // validates range and spacing
    }
}

} // namespace baoii
