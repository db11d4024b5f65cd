#include "baoii/trace_eval.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "baoii/csv.hpp"
#include "baoii/errors.hpp"

namespace baoii {

namespace {

// curve under construction: appends knots, carries the running value
struct CurveBuilder {
    PenaltyCurve curve;
    double value = 0.0;
    int slope = 0;
    double last_t = 0.0;

    void begin(InfoState start_state) {
        curve.knots.push_back({0.0, 0.0, name_of(start_state)});
    }

    // advance to time t and record a knot labeled with the post-event state
    void mark(double t, StateName post_state) {
        value += slope * (t - last_t);
        last_t = t;
        curve.knots.push_back({t, value, post_state});
    }

    void reset(double t, StateName post_state) {
        if (value != 0.0) curve.knots.push_back({t, 0.0, post_state});
        value = 0.0;
    }

    void finish(double t_end) {
        value += slope * (t_end - last_t);
        last_t = t_end;
        curve.end_time = t_end;
        if (curve.knots.empty() || curve.knots.back().t != t_end) {
            curve.knots.push_back({t_end, value, curve.knots.back().state});
        }
    }
};

} // namespace

double PenaltyCurve::value_at(double t) const {
    if (knots.empty() || t < knots.front().t || t > end_time) {
        throw input_error("curve query outside domain");
    }
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (t >= knots[i].t && t <= knots[i + 1].t) {
            // at a reset the later knot wins (right-continuous)
            if (knots[i + 1].t == knots[i].t) continue;
            if (t == knots[i + 1].t && i + 2 < knots.size() && knots[i + 2].t == t) {
                return knots[i + 2].value;
            }
            const double frac = (t - knots[i].t) / (knots[i + 1].t - knots[i].t);
            return knots[i].value + frac * (knots[i + 1].value - knots[i].value);
        }
    }
    return knots.back().value;
}

TraceResult evaluate(const Timeline& tl, EntityId viewer, AoiiRule rule) {
    if (!is_valid(tl.start)) {
        throw input_error("timeline start state is not representable: " +
                          pattern_string(tl.start));
    }
    double prev_t = -1.0;
    for (const TimelineEvent& ev : tl.events) {
        if (!(ev.t >= 0.0) || !std::isfinite(ev.t)) {
            throw input_error("timeline times must be finite and >= 0");
        }
        if (ev.t == prev_t) {
            throw input_error("simultaneous timeline events at t = " +
                              format_double(ev.t) + " are not allowed");
        }
        if (ev.t < prev_t) throw input_error("timeline times must be strictly increasing");
        prev_t = ev.t;
    }

    TraceResult out;
    InfoState state = tl.start;
    out.states.push_back(name_of(state));

    CurveBuilder baoii;
    CurveBuilder aoii;
    baoii.begin(state);
    aoii.begin(state);
    baoii.slope = penalty_gate(state, viewer);
    switch (rule) {
    case AoiiRule::own_measurement_resets:
        aoii.slope = 0;  // accrual starts at the first drift
        break;
    case AoiiRule::self_knowledge_resets:
        aoii.slope = (viewer == EntityId::one ? state.y1_self : state.y2_self) ? 1 : 0;
        break;
    }

    for (const TimelineEvent& ev : tl.events) {
        const InfoState next = apply_event(state, ev.event);
        const StateName next_name = name_of(next);
        out.states.push_back(next_name);

        baoii.mark(ev.t, next_name);
        if (is_reset_state(next, viewer)) {
            baoii.reset(ev.t, next_name);
            baoii.slope = 0;
        } else {
            baoii.slope = 1;
        }

        aoii.mark(ev.t, next_name);
        if (rule == AoiiRule::own_measurement_resets) {
            const bool own_measurement =
                ev.event.actor == viewer && ev.event.kind != EventKind::drift;
            if (own_measurement) {
                aoii.reset(ev.t, next_name);
                aoii.slope = 0;
            } else if (ev.event.kind == EventKind::drift) {
                aoii.slope = 1;
            }
        } else {
            const bool self_wrong =
                viewer == EntityId::one ? next.y1_self : next.y2_self;
            if (!self_wrong) {
                aoii.reset(ev.t, next_name);
                aoii.slope = 0;
            } else {
                aoii.slope = 1;
            }
        }

        state = next;
    }

    const double t_end = tl.events.empty() ? 0.0 : tl.events.back().t;
    baoii.finish(t_end);
    aoii.finish(t_end);
    out.baoii = std::move(baoii.curve);
    out.aoii = std::move(aoii.curve);
    return out;
}

double area(const PenaltyCurve& curve, double from, double to) {
    if (curve.knots.empty()) throw input_error("area of an empty curve");
    if (from > to || from < curve.knots.front().t || to > curve.end_time) {
        throw input_error("area range outside curve domain");
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < curve.knots.size(); ++i) {
        const auto& a = curve.knots[i];
        const auto& b = curve.knots[i + 1];
        if (b.t <= a.t) continue;  // reset drop, zero width
        const double lo = std::max(from, a.t);
        const double hi = std::min(to, b.t);
        if (hi <= lo) continue;
        const double slope = (b.value - a.value) / (b.t - a.t);
        const double v_lo = a.value + slope * (lo - a.t);
        const double v_hi = a.value + slope * (hi - a.t);
        total += 0.5 * (v_lo + v_hi) * (hi - lo);
    }
    return total;
}

Timeline parse_timeline_csv(std::istream& in) {
    Timeline tl;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("time", 0) == 0) continue;  // header
        if (line[0] == '#') continue;

        std::istringstream row(line);
        std::string time_s, event_s, actor_s;
        if (!std::getline(row, time_s, ',') || !std::getline(row, event_s, ',') ||
            !std::getline(row, actor_s)) {
            throw input_error("timeline line " + std::to_string(line_no) +
                              ": expected time,event,actor");
        }
        char* end = nullptr;
        const double t = std::strtod(time_s.c_str(), &end);
        if (end == time_s.c_str() || *end != '\0') {
            throw input_error("timeline line " + std::to_string(line_no) +
                              ": bad time '" + time_s + "'");
        }
        EventKind kind;
        if (event_s == "drift") {
            kind = EventKind::drift;
        } else if (event_s == "measure") {
            kind = EventKind::measure_only;
        } else if (event_s == "measure_transmit") {
            kind = EventKind::measure_and_transmit;
        } else {
            throw input_error("timeline line " + std::to_string(line_no) + ": unknown event '" +
                              event_s + "' (drift | measure | measure_transmit)");
        }
        EntityId actor;
        if (actor_s == "1") {
            actor = EntityId::one;
        } else if (actor_s == "2") {
            actor = EntityId::two;
        } else {
            throw input_error("timeline line " + std::to_string(line_no) + ": bad actor '" +
                              actor_s + "' (1 | 2)");
        }
        tl.events.push_back({t, Event{kind, actor}});
    }
    return tl;
}

Timeline load_timeline_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open timeline: " + path);
    return parse_timeline_csv(in);
}

std::string curve_csv(const PenaltyCurve& curve) {
    std::ostringstream out;
    out << "time,value,state\n";
    for (const auto& k : curve.knots) {
        out << format_double(k.t) << ',' << format_double(k.value) << ','
            << to_string(k.state) << '\n';
    }
    return out.str();
}

std::string states_csv(const Timeline& tl, const std::vector<StateName>& states) {
    std::ostringstream out;
    out << "index,time,event,actor,state\n";
    for (std::size_t i = 0; i < states.size(); ++i) {
        out << i << ',';
        if (i == 0) {
            out << "0,start,,";
        } else {
            const TimelineEvent& ev = tl.events[i - 1];
            const char* kind = ev.event.kind == EventKind::drift ? "drift"
                               : ev.event.kind == EventKind::measure_only
                                   ? "measure"
                                   : "measure_transmit";
            out << format_double(ev.t) << ',' << kind << ','
                << static_cast<int>(ev.event.actor) << ',';
        }
        out << to_string(states[i]) << '\n';
    }
    return out.str();
}

AoiiRule parse_aoii_rule(const std::string& text) {
    if (text == "own-measurement" || text == "own_measurement") {
        return AoiiRule::own_measurement_resets;
    }
    if (text == "self-knowledge" || text == "self_knowledge") {
        return AoiiRule::self_knowledge_resets;
    }
    throw input_error("unknown reset rule '" + text +
                      "' (own-measurement | self-knowledge)");
}

} // namespace baoii
