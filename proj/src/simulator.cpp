#include "baoii/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "baoii/analytic.hpp"
#include "baoii/csv.hpp"
#include "baoii/errors.hpp"
#include "baoii/rng.hpp"

namespace baoii {

namespace {

constexpr double k_nan = std::numeric_limits<double>::quiet_NaN();
constexpr double k_inf = std::numeric_limits<double>::infinity();

struct RunningStat {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    Statistic finalize() const {
        Statistic s;
        s.n = n;
        s.mean = n > 0 ? mean : k_nan;
        if (n >= 2) {
            const double var = m2 / static_cast<double>(n - 1);
            s.std_error = std::sqrt(var / static_cast<double>(n));
            s.ci95_half_width = 1.96 * s.std_error;
        }
        return s;
    }
};

double default_warmup(const RateParams& p) {
    if (p.d <= 0.0 || p.p <= 0.0) return 0.0;
    // roughly 100 cycles: reset-set sojourn plus closed-form cycle time
    return 100.0 * (1.0 / (2.0 * p.d) + T_closed(p.m1, p.m2, p.p));
}

} // namespace

SimReport run(const SimConfig& config) {
    config.params.check(/*allow_zero_p=*/true);
    const bool horizon_mode = config.stop.kind == StopRule::Kind::horizon;
    if (horizon_mode) {
        if (!(config.stop.horizon_s > 0.0)) throw input_error("horizon must be > 0");
    } else {
        if (config.stop.cycles < 1) throw input_error("cycle count must be >= 1");
        if (config.params.p == 0.0) {
            throw input_error("p = 0 never resets; use a time-horizon stop rule");
        }
    }
    const double warmup = config.warmup_s.value_or(default_warmup(config.params));
    if (!(warmup >= 0.0)) throw input_error("warmup must be >= 0");

    const GeneratorMatrix gen = build_generator(config.params);

    struct Exit {
        double total = 0.0;
        std::vector<std::pair<int, double>> targets;  // (state, rate), ascending
    };
    std::array<Exit, state_count> exits;
    std::array<bool, state_count> in_reset{};
    for (int i = 0; i < state_count; ++i) {
        in_reset[static_cast<std::size_t>(i)] =
            is_reset_state(enumerate_states()[static_cast<std::size_t>(i)], config.viewer);
        for (int j = 0; j < state_count; ++j) {
            if (j == i) continue;
            const double r = gen.q(i, j);
            if (r > 0.0) {
                exits[static_cast<std::size_t>(i)].targets.emplace_back(j, r);
                exits[static_cast<std::size_t>(i)].total += r;
            }
        }
    }

    SimReport report;
    report.seed = config.seed;
    report.params = config.params;
    report.viewer = config.viewer;
    report.warmup_used_s = warmup;

    Rng rng(config.seed, 0);

    double t = 0.0;
    int state = static_cast<int>(StateName::O);
    double sojourn_start = 0.0;

    bool stats_on = false;
    double window_start = 0.0;
    double window_end = k_inf;
    bool cycle_clock_running = false;
    double last_reset_entry = 0.0;

    std::array<double, state_count> time_in_state{};
    std::array<double, state_count> holding_sum{};
    double penalty_area = 0.0;   // integral of the penalty over the window
    double penalty_value = 0.0;  // current penalty, tracked from t = 0

    // per-cycle scratch feeding the occupancy ratio estimator
    std::array<double, state_count> cycle_time_in_state{};
    std::array<double, state_count> occ_sum_a{}, occ_sum_a2{}, occ_sum_al{};
    double occ_sum_l = 0.0, occ_sum_l2 = 0.0;
    long occ_n = 0;

    RunningStat error_stat;
    RunningStat cycle_stat;
    std::array<RunningStat, state_count> entry_stat;

    bool in_excursion = false;
    double excursion_start = 0.0;
    int excursion_entry = -1;

    double final_time = 0.0;
    bool finished = false;

    // Statistics for a cycle stop rule are anchored at a reset-set moment so
    // every recorded quantity covers whole renewal cycles; a horizon window
    // is anchored at the warmup end.
    const auto start_stats_horizon = [&] {
        stats_on = true;
        window_start = warmup;
        window_end = warmup + config.stop.horizon_s;
        if (in_reset[static_cast<std::size_t>(state)]) {
            cycle_clock_running = true;
            last_reset_entry = std::max(t, warmup);
        }
    };
    const auto start_stats_cycles = [&](double anchor) {
        stats_on = true;
        window_start = anchor;
        cycle_clock_running = true;
        last_reset_entry = anchor;
    };

    // time [a, b) spent in state s whose sojourn began at time t0
    const auto accrue_window = [&](int s, double t0, double a, double b) {
        if (b <= a) return;
        const double dt = b - a;
        time_in_state[static_cast<std::size_t>(s)] += dt;
        cycle_time_in_state[static_cast<std::size_t>(s)] += dt;
        if (!in_reset[static_cast<std::size_t>(s)]) {
            const double v_at_a = penalty_value + (a - t0);
            penalty_area += (v_at_a + 0.5 * dt) * dt;
        }
    };

    const auto commit_cycle = [&](double boundary) {
        double len = 0.0;
        for (double v : cycle_time_in_state) len += v;
        for (int s = 0; s < state_count; ++s) {
            const double a = cycle_time_in_state[static_cast<std::size_t>(s)];
            occ_sum_a[static_cast<std::size_t>(s)] += a;
            occ_sum_a2[static_cast<std::size_t>(s)] += a * a;
            occ_sum_al[static_cast<std::size_t>(s)] += a * len;
            cycle_time_in_state[static_cast<std::size_t>(s)] = 0.0;
        }
        occ_sum_l += len;
        occ_sum_l2 += len * len;
        ++occ_n;
        cycle_stat.add(boundary - last_reset_entry);
    };

    while (!finished) {
        const Exit& ex = exits[static_cast<std::size_t>(state)];

        if (!stats_on) {
            if (horizon_mode) {
                if (t >= warmup || ex.total == 0.0) start_stats_horizon();
            } else if (in_reset[static_cast<std::size_t>(state)] && t >= warmup) {
                start_stats_cycles(t);
            } else if (ex.total == 0.0) {
                throw numeric_error(
                    "absorbing state reached; a cycle stop rule cannot complete");
            }
        }

        if (ex.total == 0.0) {
            // absorbing: only a horizon run can finish
            if (!horizon_mode) {
                throw numeric_error(
                    "absorbing state reached; a cycle stop rule cannot complete");
            }
            accrue_window(state, sojourn_start, std::max(t, window_start), window_end);
            final_time = window_end;
            break;
        }

        const double holding = rng.next_exponential(ex.total);
        double u = rng.next_unit() * ex.total;
        int next = ex.targets.back().first;
        for (const auto& [target, rate] : ex.targets) {
            if (u < rate) {
                next = target;
                break;
            }
            u -= rate;
        }
        const double t_next = t + holding;

        // the warmup boundary may fall inside this sojourn
        if (!stats_on && t_next >= warmup) {
            if (horizon_mode) {
                start_stats_horizon();
            } else if (in_reset[static_cast<std::size_t>(state)]) {
                // in the reset set as warmup ends: memorylessness makes this
                // a legitimate cycle boundary
                start_stats_cycles(warmup);
            }
        }

        if (stats_on) {
            if (t_next >= window_end) {
                accrue_window(state, sojourn_start, std::max(t, window_start), window_end);
                final_time = window_end;
                break;
            }
            accrue_window(state, sojourn_start, std::max(t, window_start), t_next);
        }

        // penalty evolves over the whole trajectory, not just the window
        if (!in_reset[static_cast<std::size_t>(state)]) penalty_value += t_next - t;

        if (config.record_event_log) {
            report.event_log.push_back(
                {t_next, static_cast<StateName>(state), static_cast<StateName>(next)});
        }

        const bool from_reset = in_reset[static_cast<std::size_t>(state)];
        const bool to_reset = in_reset[static_cast<std::size_t>(next)];
        if (!from_reset && to_reset) penalty_value = 0.0;

        const bool counted = stats_on && t_next > window_start && t_next < window_end;
        if (counted) {
            ++report.jump_counts[static_cast<std::size_t>(state)][static_cast<std::size_t>(next)];
            ++report.total_jumps;
            if (sojourn_start >= window_start) {
                holding_sum[static_cast<std::size_t>(state)] += t_next - sojourn_start;
                ++report.holding_count[static_cast<std::size_t>(state)];
            }

            if (from_reset && !to_reset && cycle_clock_running) {
                in_excursion = true;
                excursion_start = t_next;
                excursion_entry = next;
            } else if (!from_reset && to_reset) {
                if (cycle_clock_running) {
                    if (in_excursion) {
                        const double period = t_next - excursion_start;
                        error_stat.add(period);
                        entry_stat[static_cast<std::size_t>(excursion_entry)].add(period);
                        in_excursion = false;
                    }
                    commit_cycle(t_next);
                    last_reset_entry = t_next;
                    if (!horizon_mode && error_stat.n >= config.stop.cycles) {
                        final_time = t_next;
                        finished = true;
                    }
                } else {
                    // first boundary inside a horizon window: discard the
                    // partial pre-boundary scratch so the ratio estimator
                    // sees whole cycles only
                    cycle_clock_running = true;
                    last_reset_entry = t_next;
                    cycle_time_in_state.fill(0.0);
                }
            }
        }

        t = t_next;
        state = next;
        sojourn_start = t_next;
    }

    report.cycles_completed = error_stat.n;
    report.zero_cycle_warning = report.cycles_completed == 0;
    report.error_period = error_stat.finalize();
    report.cycle_length = cycle_stat.finalize();
    for (int s = 0; s < state_count; ++s) {
        if (entry_stat[static_cast<std::size_t>(s)].n > 0) {
            report.entry_period[static_cast<StateName>(s)] =
                entry_stat[static_cast<std::size_t>(s)].finalize();
        }
    }

    report.elapsed_s = std::max(0.0, final_time - window_start);
    double total_time = 0.0;
    for (double v : time_in_state) total_time += v;
    for (int s = 0; s < state_count; ++s) {
        report.occupancy[static_cast<std::size_t>(s)] =
            total_time > 0.0 ? time_in_state[static_cast<std::size_t>(s)] / total_time : 0.0;
        report.holding_mean[static_cast<std::size_t>(s)] =
            report.holding_count[static_cast<std::size_t>(s)] > 0
                ? holding_sum[static_cast<std::size_t>(s)] /
                      static_cast<double>(report.holding_count[static_cast<std::size_t>(s)])
                : k_nan;
    }

    // occupancy standard errors from the per-cycle ratio estimator
    if (occ_n >= 2 && occ_sum_l > 0.0) {
        const double lbar = occ_sum_l / static_cast<double>(occ_n);
        for (int s = 0; s < state_count; ++s) {
            const double r = occ_sum_a[static_cast<std::size_t>(s)] / occ_sum_l;
            const double ss = occ_sum_a2[static_cast<std::size_t>(s)] -
                              2.0 * r * occ_sum_al[static_cast<std::size_t>(s)] +
                              r * r * occ_sum_l2;
            const double var = std::max(0.0, ss / static_cast<double>(occ_n - 1));
            report.occupancy_std_error[static_cast<std::size_t>(s)] =
                std::sqrt(var / static_cast<double>(occ_n)) / lbar;
        }
    } else {
        report.occupancy_std_error.fill(k_nan);
    }

    if (report.cycles_completed > 0) {
        report.baoii_half_mean_period = 0.5 * report.error_period.mean;
    } else {
        // no complete cycle: zero if the penalty never accrued at all
        // (e.g. zero drift), otherwise undefined
        report.baoii_half_mean_period = penalty_area == 0.0 ? 0.0 : k_nan;
    }
    report.baoii_time_average = report.elapsed_s > 0.0 ? penalty_area / report.elapsed_s : k_nan;
    return report;
}

std::map<StateName, Statistic> estimate_error_period(
    const SimConfig& config, const std::vector<StateName>& entry_filter) {
    const SimReport r = run(config);
    std::vector<StateName> filter = entry_filter;
    if (filter.empty()) {
        for (const InfoState& s : first_error_states(config.viewer)) {
            filter.push_back(name_of(s));
        }
    }
    std::map<StateName, Statistic> out;
    for (StateName n : filter) {
        const auto it = r.entry_period.find(n);
        out[n] = it != r.entry_period.end() ? it->second : Statistic{k_nan, 0.0, 0.0, 0};
    }
    return out;
}

BaoiiEstimate estimate_baoii(const SimConfig& config) {
    const SimReport r = run(config);
    BaoiiEstimate e;
    e.half_mean_period = r.baoii_half_mean_period;
    e.time_average = r.baoii_time_average;
    e.ratio = (r.baoii_half_mean_period > 0.0) ? r.baoii_time_average / r.baoii_half_mean_period
                                               : k_nan;
    return e;
}

namespace {

nlohmann::json stat_json(const Statistic& s) {
    return nlohmann::json{{"mean", s.mean},
                          {"std_error", s.std_error},
                          {"ci95_half_width", s.ci95_half_width},
                          {"n", s.n}};
}

} // namespace

std::string sim_report_json(const SimReport& r) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["params"] = {{"d", r.params.d}, {"m1", r.params.m1}, {"m2", r.params.m2}, {"p", r.params.p}};
    j["viewer"] = static_cast<int>(r.viewer);
    j["cycles_completed"] = r.cycles_completed;
    j["zero_cycle_warning"] = r.zero_cycle_warning;
    j["error_period"] = stat_json(r.error_period);
    j["cycle_length"] = stat_json(r.cycle_length);
    j["baoii"] = {{"half_mean_period", r.baoii_half_mean_period},
                  {"time_average", r.baoii_time_average}};
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [name, stat] : r.entry_period) {
        entry[std::string(to_string(name))] = stat_json(stat);
    }
    j["entry_period"] = entry;
    nlohmann::json occ, occ_se, holding;
    for (int s = 0; s < state_count; ++s) {
        const std::string name(to_string(static_cast<StateName>(s)));
        occ[name] = r.occupancy[static_cast<std::size_t>(s)];
        occ_se[name] = r.occupancy_std_error[static_cast<std::size_t>(s)];
        holding[name] = {{"mean", r.holding_mean[static_cast<std::size_t>(s)]},
                         {"count", r.holding_count[static_cast<std::size_t>(s)]}};
    }
    j["occupancy"] = occ;
    j["occupancy_std_error"] = occ_se;
    j["holding"] = holding;
    nlohmann::json jumps = nlohmann::json::object();
    for (int a = 0; a < state_count; ++a) {
        for (int b = 0; b < state_count; ++b) {
            const long n = r.jump_counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (n > 0) {
                jumps[std::string(to_string(static_cast<StateName>(a))) + "->" +
                      std::string(to_string(static_cast<StateName>(b)))] = n;
            }
        }
    }
    j["jumps"] = jumps;
    j["total_jumps"] = r.total_jumps;
    j["elapsed_s"] = r.elapsed_s;
    j["warmup_s"] = r.warmup_used_s;
    return j.dump(2) + "\n";
}

std::string sim_report_csv_header() {
    std::string h = "seed,d,m1,m2,p,viewer,cycles,error_period_mean,error_period_se,"
                    "error_period_ci95,cycle_length_mean,cycle_length_se,"
                    "baoii_half_mean_period,baoii_time_average";
    for (int s = 0; s < state_count; ++s) {
        h += ",occ_" + std::string(to_string(static_cast<StateName>(s)));
    }
    h += ",elapsed_s,warmup_s,total_jumps,zero_cycle_warning";
    return h;
}

std::string sim_report_csv_row(const SimReport& r) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(r.seed));
    cells.push_back(format_double(r.params.d));
    cells.push_back(format_double(r.params.m1));
    cells.push_back(format_double(r.params.m2));
    cells.push_back(format_double(r.params.p));
    cells.push_back(std::to_string(static_cast<int>(r.viewer)));
    cells.push_back(std::to_string(r.cycles_completed));
    cells.push_back(format_double(r.error_period.mean));
    cells.push_back(format_double(r.error_period.std_error));
    cells.push_back(format_double(r.error_period.ci95_half_width));
    cells.push_back(format_double(r.cycle_length.mean));
    cells.push_back(format_double(r.cycle_length.std_error));
    cells.push_back(format_double(r.baoii_half_mean_period));
    cells.push_back(format_double(r.baoii_time_average));
    for (int s = 0; s < state_count; ++s) {
        cells.push_back(format_double(r.occupancy[static_cast<std::size_t>(s)]));
    }
    cells.push_back(format_double(r.elapsed_s));
    cells.push_back(format_double(r.warmup_used_s));
    cells.push_back(std::to_string(r.total_jumps));
    cells.push_back(r.zero_cycle_warning ? "1" : "0");
    return csv_row(cells);
}

std::string event_log_csv(const SimReport& r) {
    std::ostringstream out;
    out << "time,from,to\n";
    for (const EventLogRow& row : r.event_log) {
        out << format_double(row.t) << ',' << to_string(row.from) << ','
            << to_string(row.to) << '\n';
    }
    return out.str();
}

} // namespace baoii
