#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "baoii/state_model.hpp"

namespace baoii {

struct TimelineEvent {
    double t = 0.0;
    Event event;
};

// User-supplied deterministic event sequence; times strictly increasing.
struct Timeline {
    std::vector<TimelineEvent> events;
    InfoState start = state_of(StateName::O);
};

// Piecewise-linear penalty with slope 0 or 1. Consecutive knots bound linear
// segments; an instantaneous reset appears as two knots at the same time.
// Each knot is labeled with the state holding immediately after its time.
struct PenaltyCurve {
    struct Knot {
        double t = 0.0;
        double value = 0.0;
        StateName state = StateName::O;
    };
    std::vector<Knot> knots;
    double end_time = 0.0;

    double value_at(double t) const;  // throws input_error outside the domain
};

// How the comparison (single-entity) penalty resets:
//  - own_measurement_resets: any measurement by the viewer zeroes the
//    penalty and pauses it until the next drift;
//  - self_knowledge_resets: the penalty tracks the viewer's own-state bit,
//    accruing only while it is wrong.
enum class AoiiRule { own_measurement_resets, self_knowledge_resets };

struct TraceResult {
    std::vector<StateName> states;  // start state, then one per event
    PenaltyCurve baoii;
    PenaltyCurve aoii;
};

// Replays the timeline from the start state. The bidirectional penalty rises
// while the viewer's gate is open and resets on entering the viewer's reset
// set; the comparison penalty follows the chosen rule.
TraceResult evaluate(const Timeline& tl, EntityId viewer, AoiiRule rule);

// Exact integral of the curve over [from, to].
double area(const PenaltyCurve& curve, double from, double to);

// CSV: "time,event,actor" rows, events named drift | measure |
// measure_transmit. Throws input_error with a line number on bad rows.
Timeline parse_timeline_csv(std::istream& in);
Timeline load_timeline_csv(const std::string& path);

std::string curve_csv(const PenaltyCurve& curve);
std::string states_csv(const Timeline& tl, const std::vector<StateName>& states);

AoiiRule parse_aoii_rule(const std::string& text);  // "own-measurement" | "self-knowledge"

} // namespace baoii
