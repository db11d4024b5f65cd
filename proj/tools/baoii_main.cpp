// Command-line front end: validation reports, figure-data sweeps, seeded
// simulation runs, and timeline evaluation. Outputs are plot-ready CSV/JSON;
// identical inputs (including seeds) give byte-identical files.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baoii/analytic.hpp"
#include "baoii/csv.hpp"
#include "baoii/ctmc_engine.hpp"
#include "baoii/errors.hpp"
#include "baoii/optimizer.hpp"
#include "baoii/scenario.hpp"
#include "baoii/simulator.hpp"
#include "baoii/trace_eval.hpp"
#include "baoii/validation.hpp"

namespace {

using namespace baoii;

constexpr int exit_ok = 0;
constexpr int exit_validation_failure = 1;
constexpr int exit_input_error = 2;
constexpr int exit_numeric_error = 3;

struct CommonOpts {
    std::string scenario_file;
    std::string out_dir;
    std::string preset;
    std::vector<std::string> sets;  // key=value overrides
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario_file, "scenario file (key = value lines)");
    cmd->add_option("--out-dir", opts.out_dir,
                    "output directory (default: $BAOII_OUT_DIR or '.')");
    cmd->add_option("--preset", opts.preset,
                    "parameter preset: high-immersion | social-vr | smart-city");
    cmd->add_option("--set", opts.sets, "override any scenario key, e.g. --set p=0.5");
    cmd->add_option("--seed", opts.seed, "random seed");
}

Scenario build_scenario(const CommonOpts& opts) {
    Scenario sc;
    if (!opts.scenario_file.empty()) sc = load_scenario_file(opts.scenario_file);
    if (!opts.preset.empty()) apply_scenario_key(sc, "preset", opts.preset);
    for (const std::string& kv : opts.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw input_error("--set expects key=value, got '" + kv + "'");
        }
        apply_scenario_key(sc, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.seed) sc.seed = *opts.seed;
    if (!opts.out_dir.empty()) {
        sc.out_dir = opts.out_dir;
    } else if (sc.out_dir.empty()) {
        const char* env = std::getenv("BAOII_OUT_DIR");
        sc.out_dir = env && *env ? env : ".";
    }
    finalize_scenario(sc);
    return sc;
}

std::string out_path(const Scenario& sc, const std::string& name) {
    return (std::filesystem::path(sc.out_dir) / name).string();
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Scenario& sc, std::optional<long> cycles_flag, bool dump_matrices) {
    sc.params.check();  // analytic path needs p > 0
    const long cycles = cycles_flag.value_or(
        sc.stop.kind == StopRule::Kind::cycles ? sc.stop.cycles : 100000);
    const validation::ValidationReport report = validation::validate(sc.params, sc.seed, cycles);
    atomic_write_file(out_path(sc, "validate_report.csv"), validation::report_csv(report));

    const validation::TauGridResult grid = validation::printed_tau_grid_comparison();
    atomic_write_file(out_path(sc, "tau_discrepancies.csv"), validation::tau_grid_csv(grid));

    const ClosedFormReport cf = closed_form_report(sc.params, sc.costs);
    atomic_write_file(out_path(sc, "closed_form_report.txt"), to_key_value_text(cf));
    atomic_write_file(out_path(sc, "closed_form_report.csv"),
                      closed_form_csv_header() + "\n" + closed_form_csv_row(cf) + "\n");

    if (dump_matrices) {
        std::vector<std::string> labels;
        for (int i = 0; i < state_count; ++i) {
            labels.emplace_back(to_string(static_cast<StateName>(i)));
        }
        const GeneratorMatrix gen = build_generator(sc.params);
        atomic_write_file(out_path(sc, "generator.csv"), matrix_csv(gen.q, labels));
        atomic_write_file(out_path(sc, "jump_probabilities.csv"),
                          matrix_csv(jump_probabilities(gen.q), labels));
        atomic_write_file(out_path(sc, "stationary.csv"),
                          vector_csv(stationary(gen.q), labels));
    }

    std::cout << validation::report_text(report);
    std::cout << "printed reset-time sweep: " << grid.comparisons << " comparisons over "
              << grid.grid_points << " grid points, " << grid.deviations.size()
              << " deviations recorded in tau_discrepancies.csv\n"
              << "printed-tau cycle-time assembly max relative deviation: "
              << format_double(grid.max_assembly_rel_diff) << "\n";
    return report.hard_pass ? exit_ok : exit_validation_failure;
}

// ------------------------------------------------------------------- sweep

double quantity_value(const std::string& quantity, const RateParams& rp,
                      const CostModel& costs) {
    if (quantity == "delta_baoii") return delta_baoii(rp.m1, rp.p);
    if (quantity == "total_cost") return total_cost(rp.m1, rp.p, costs);
    if (quantity == "cost_K") return cost_K(rp.m1, rp.p, costs);
    if (quantity == "T_closed") return T_closed(rp.m1, rp.m2, rp.p);
    if (quantity == "k_lambda_threshold") return k_lambda_threshold(rp.m1);
    if (quantity == "k_m_threshold") return k_m_threshold(rp.m1, costs.eta());
    if (quantity == "crossover_rate") return crossover_rate(costs.k_lambda);
    if (quantity == "optimal_p") return optimal_p(rp.m1, costs).argmin;
    if (quantity == "optimal_m") return optimal_m(rp.p, costs).argmin;
    if (quantity == "expected_error_period") return expected_error_period(rp);
    throw input_error("unknown quantity '" + quantity + "'");
}

void apply_axis(const std::string& param, double v, RateParams& rp, CostModel& costs) {
    if (param == "m") {
        rp.m1 = rp.m2 = v;
    } else if (param == "p") {
        rp.p = v;
    } else if (param == "d") {
        rp.d = v;
    } else if (param == "k_m") {
        costs.k_m = v;
    } else if (param == "k_lambda") {
        costs.k_lambda = v;
    } else if (param == "eta") {
        costs.k_lambda = v * costs.k_m;
    } else {
        throw input_error("unknown sweep parameter '" + param + "'");
    }
}

int cmd_sweep(const Scenario& sc, const std::string& figure, const std::string& quantity) {
    std::ostringstream csv;
    std::string filename;

    const std::vector<double> p_grid = {0.1, 0.4, 0.7, 1.0};

    if (figure == "fig4") {
        // mean penalty vs measurement rate, 100 log points on [0.1, 10]
        filename = "fig4.csv";
        csv << "m,p,delta_baoii\n";
        const SweepAxis axis{"m", 0.1, 10.0, 100, SweepAxis::Spacing::log};
        for (double p : p_grid) {
            for (double m : axis.values()) {
                csv << format_double(m) << ',' << format_double(p) << ','
                    << format_double(delta_baoii(m, p)) << "\n";
            }
        }
    } else if (figure == "fig5") {
        // total cost vs measurement rate at the 500 B / 1 kB cost point
        filename = "fig5.csv";
        const CostModel costs{5e-4, 1e-3};
        csv << "m,p,total_cost\n";
        for (double p : p_grid) {
            for (int mi = 1; mi <= 100; ++mi) {
                const double m = static_cast<double>(mi);
                csv << format_double(m) << ',' << format_double(p) << ','
                    << format_double(total_cost(m, p, costs)) << "\n";
            }
        }
    } else if (figure == "fig6") {
        // optimal transmit probability vs measurement cost, k_lambda = 2 k_m
        filename = "fig6.csv";
        csv << "m,k_m,k_lambda,p_star,objective\n";
        const SweepAxis axis{"k_m", 0.005, 1.0, 200, SweepAxis::Spacing::linear};
        for (double m : {0.1, 1.0, 10.0, 100.0}) {
            for (double k : axis.values()) {
                const CostModel costs = CostModel::from_eta(k, 2.0);
                const PolicyResult r = optimal_p(m, costs);
                csv << format_double(m) << ',' << format_double(k) << ','
                    << format_double(costs.k_lambda) << ',' << format_double(r.argmin)
                    << ',' << format_double(r.objective) << "\n";
            }
        }
    } else if (figure == "fig7") {
        // optimal measurement rate vs measurement cost, k_lambda = 2 k_m
        filename = "fig7.csv";
        csv << "p,k_m,k_lambda,m_star,objective\n";
        const SweepAxis axis{"k_m", 0.005, 1.0, 200, SweepAxis::Spacing::linear};
        for (double p : p_grid) {
            for (double k : axis.values()) {
                const CostModel costs = CostModel::from_eta(k, 2.0);
                const PolicyResult r = optimal_m(p, costs);
                csv << format_double(p) << ',' << format_double(k) << ','
                    << format_double(costs.k_lambda) << ',' << format_double(r.argmin)
                    << ',' << format_double(r.objective) << "\n";
            }
        }
    } else if (figure == "fig8") {
        // maximum sustainable measurement cost vs rate for several cost ratios
        filename = "fig8.csv";
        csv << "eta,m,k_m_max\n";
        const SweepAxis axis{"m", 0.01, 100.0, 100, SweepAxis::Spacing::log};
        for (double eta : {0.025, 0.25, 2.0, 25.0, 250.0}) {
            for (double m : axis.values()) {
                csv << format_double(eta) << ',' << format_double(m) << ','
                    << format_double(max_measurement_cost(m, eta)) << "\n";
            }
        }
    } else if (figure == "custom") {
        if (!sc.sweep) {
            throw input_error("custom sweep needs sweep_param/sweep_from/sweep_to/"
                              "sweep_points (file keys or --param/--from/--to/--points)");
        }
        if (quantity.empty()) throw input_error("custom sweep needs --quantity");
        filename = "sweep_" + quantity + "_vs_" + sc.sweep->param + ".csv";
        csv << sc.sweep->param << ',' << quantity << "\n";
        for (double v : sc.sweep->values()) {
            RateParams rp = sc.params;
            CostModel costs = sc.costs;
            apply_axis(sc.sweep->param, v, rp, costs);
            csv << format_double(v) << ','
                << format_double(quantity_value(quantity, rp, costs)) << "\n";
        }
    } else {
        throw input_error("unknown figure '" + figure +
                          "' (fig4 | fig5 | fig6 | fig7 | fig8 | custom)");
    }

    const std::string path = out_path(sc, filename);
    atomic_write_file(path, csv.str());
    std::cout << "wrote " << path << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Scenario& sc, bool log_events) {
    SimConfig cfg;
    cfg.params = sc.params;
    cfg.seed = sc.seed;
    cfg.stop = sc.stop;
    cfg.warmup_s = sc.warmup_s;
    cfg.viewer = sc.viewer;
    cfg.record_event_log = log_events;

    const SimReport report = run(cfg);
    atomic_write_file(out_path(sc, "sim_report.json"), sim_report_json(report));
    atomic_write_file(out_path(sc, "sim_report.csv"),
                      sim_report_csv_header() + "\n" + sim_report_csv_row(report) + "\n");
    if (log_events) {
        atomic_write_file(out_path(sc, "sim_events.csv"), event_log_csv(report));
    }

    std::cout << "seed " << report.seed << ", viewer " << static_cast<int>(report.viewer)
              << ", " << report.cycles_completed << " cycles in "
              << format_double(report.elapsed_s) << " s (warmup "
              << format_double(report.warmup_used_s) << " s)\n";
    if (report.zero_cycle_warning) {
        std::cout << "warning: no complete cycle observed\n";
    } else {
        std::cout << "mean error period  " << format_double(report.error_period.mean)
                  << " +- " << format_double(report.error_period.ci95_half_width)
                  << " (95% CI)\n"
                  << "mean cycle length  " << format_double(report.cycle_length.mean)
                  << "\npenalty (half mean period)  "
                  << format_double(report.baoii_half_mean_period)
                  << "\npenalty (time average)      "
                  << format_double(report.baoii_time_average) << "\n";
    }
    std::cout << "occupancy:";
    for (int s = 0; s < state_count; ++s) {
        std::cout << "  " << to_string(static_cast<StateName>(s)) << "="
                  << format_double(report.occupancy[static_cast<std::size_t>(s)]);
    }
    std::cout << "\n";
    return exit_ok;
}

// ------------------------------------------------------------------- trace

int cmd_trace(const Scenario& sc, const std::string& timeline_path,
              const std::string& rule_text) {
    const Timeline tl = load_timeline_csv(timeline_path);
    const AoiiRule rule = parse_aoii_rule(rule_text);
    const TraceResult result = evaluate(tl, sc.viewer, rule);

    atomic_write_file(out_path(sc, "trace_states.csv"), states_csv(tl, result.states));
    atomic_write_file(out_path(sc, "trace_baoii.csv"), curve_csv(result.baoii));
    atomic_write_file(out_path(sc, "trace_aoii.csv"), curve_csv(result.aoii));

    std::cout << "states:";
    for (StateName s : result.states) std::cout << ' ' << to_string(s);
    std::cout << "\nbidirectional penalty area over full trace: "
              << format_double(area(result.baoii, 0.0, result.baoii.end_time)) << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bidirectional information-freshness toolkit: cross-validated "
                 "closed forms, chain solvers, simulation and policy optimization"};
    app.require_subcommand(1);

    CommonOpts validate_opts, sweep_opts, sim_opts, trace_opts;

    auto* validate = app.add_subcommand(
        "validate", "cross-check closed forms, linear solves and simulation");
    add_common(validate, validate_opts);
    std::optional<long> validate_cycles;
    bool dump_matrices = false;
    validate->add_option("--cycles", validate_cycles, "simulated cycles for the checks");
    validate->add_flag("--dump-matrices", dump_matrices,
                       "also write generator/stationary/jump-probability CSVs");

    auto* sweep = app.add_subcommand("sweep", "write figure-ready sweep data");
    add_common(sweep, sweep_opts);
    std::string figure = "custom";
    std::string quantity;
    std::string axis_param;
    double axis_from = 0.0, axis_to = 0.0;
    int axis_points = 0;
    std::string axis_spacing;
    sweep->add_option("--figure", figure, "fig4 | fig5 | fig6 | fig7 | fig8 | custom");
    sweep->add_option("--quantity", quantity, "quantity for custom sweeps");
    sweep->add_option("--param", axis_param, "custom sweep parameter");
    sweep->add_option("--from", axis_from, "custom sweep start");
    sweep->add_option("--to", axis_to, "custom sweep end");
    sweep->add_option("--points", axis_points, "custom sweep resolution");
    sweep->add_option("--spacing", axis_spacing, "linear | log");

    auto* simulate = app.add_subcommand("simulate", "run the seeded chain simulation");
    add_common(simulate, sim_opts);
    bool log_events = false;
    simulate->add_flag("--log-events", log_events, "also write the full event log CSV");

    auto* trace = app.add_subcommand("trace", "evaluate a timeline into penalty curves");
    add_common(trace, trace_opts);
    std::string timeline_path;
    std::string aoii_rule = "own-measurement";
    int trace_viewer = 0;
    trace->add_option("--timeline", timeline_path, "timeline CSV (time,event,actor)")
        ->required();
    trace->add_option("--viewer", trace_viewer, "viewer entity: 1 | 2");
    trace->add_option("--aoii-rule", aoii_rule, "own-measurement | self-knowledge");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(build_scenario(validate_opts), validate_cycles, dump_matrices);
        }
        if (sweep->parsed()) {
            Scenario sc = build_scenario(sweep_opts);
            if (!axis_param.empty()) {
                if (!sc.sweep) sc.sweep.emplace();
                sc.sweep->param = axis_param;
            }
            if (axis_points > 0) {
                if (!sc.sweep) sc.sweep.emplace();
                sc.sweep->from = axis_from;
                sc.sweep->to = axis_to;
                sc.sweep->points = axis_points;
                sc.sweep->spacing = axis_spacing == "log" ? SweepAxis::Spacing::log
                                                          : SweepAxis::Spacing::linear;
            }
            return cmd_sweep(sc, figure, quantity);
        }
        if (simulate->parsed()) {
            return cmd_simulate(build_scenario(sim_opts), log_events);
        }
        if (trace->parsed()) {
            Scenario sc = build_scenario(trace_opts);
            if (trace_viewer == 1) sc.viewer = EntityId::one;
            if (trace_viewer == 2) sc.viewer = EntityId::two;
            return cmd_trace(sc, timeline_path, aoii_rule);
        }
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric_error;
    }
    return exit_input_error;
}
