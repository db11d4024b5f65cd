#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "baoii/ctmc_engine.hpp"
#include "baoii/state_model.hpp"

namespace baoii {

struct StopRule {
    enum class Kind { cycles, horizon } kind = Kind::cycles;
    long cycles = 100000;     // complete error periods to observe
    double horizon_s = 0.0;   // measurement window length after warmup
};

struct SimConfig {
    RateParams params;
    std::uint64_t seed = 1;
    StopRule stop;
    // Time discarded before statistics accrue. Defaults to 100 expected
    // cycles estimated from the closed-form cycle time.
    std::optional<double> warmup_s;
    EntityId viewer = EntityId::one;
    bool record_event_log = false;
};

struct Statistic {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_half_width = 0.0;
    long n = 0;
};

struct EventLogRow {
    double t = 0.0;
    StateName from = StateName::O;
    StateName to = StateName::O;
};

// Renewal-cycle statistics of one seeded run. A cycle runs from one entry
// into the viewer's reset set to the next; the error period is the excursion
// outside the reset set within it.
struct SimReport {
    std::uint64_t seed = 0;
    RateParams params;
    EntityId viewer = EntityId::one;

    long cycles_completed = 0;
    bool zero_cycle_warning = false;

    Statistic error_period;
    Statistic cycle_length;

    // entry-state-conditioned error periods (empirical hitting times)
    std::map<StateName, Statistic> entry_period;

    // two penalty estimates: half the mean error period (the renewal peak
    // convention) and the trajectory time average of the penalty itself
    double baoii_half_mean_period = 0.0;
    double baoii_time_average = 0.0;

    std::array<double, state_count> occupancy{};
    std::array<double, state_count> occupancy_std_error{};

    std::array<double, state_count> holding_mean{};
    std::array<long, state_count> holding_count{};

    // jump counts over the measurement window, [from][to]
    std::array<std::array<long, state_count>, state_count> jump_counts{};

    double elapsed_s = 0.0;       // measurement window actually used
    double warmup_used_s = 0.0;
    long total_jumps = 0;

    std::vector<EventLogRow> event_log;  // filled only when requested
};

// Competing-exponential-clocks simulation: exponential holding time with the
// state's total exit rate, next state by the embedded jump probabilities.
// Deterministic for a fixed config.
SimReport run(const SimConfig& config);

// Entry-state-conditioned error period statistics, restricted to the given
// entry states (default: the viewer's first-error states).
std::map<StateName, Statistic> estimate_error_period(
    const SimConfig& config, const std::vector<StateName>& entry_filter);

struct BaoiiEstimate {
    double half_mean_period = 0.0;  // E[T_err]/2
    double time_average = 0.0;      // integral of the penalty over elapsed time
    double ratio = 0.0;             // time_average / half_mean_period
};

BaoiiEstimate estimate_baoii(const SimConfig& config);

// JSON document (deterministic key order) and single CSV row.
std::string sim_report_json(const SimReport& r);
std::string sim_report_csv_header();
std::string sim_report_csv_row(const SimReport& r);
std::string event_log_csv(const SimReport& r);

} // namespace baoii
