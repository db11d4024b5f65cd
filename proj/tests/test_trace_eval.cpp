#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "baoii/errors.hpp"
#include "baoii/trace_eval.hpp"

using namespace baoii;

namespace {

Timeline comparison_timeline() {
    // drift(1), measure+transmit(1), drift(2), drift(1), measure(1),
    // measure+transmit(2) -- the walk through O,A,O,B,E,Gamma,Phi
    Timeline tl;
    tl.events = {
        {1.5, {EventKind::drift, EntityId::one}},
        {3.0, {EventKind::measure_and_transmit, EntityId::one}},
        {4.0, {EventKind::drift, EntityId::two}},
        {5.5, {EventKind::drift, EntityId::one}},
        {6.5, {EventKind::measure_only, EntityId::one}},
        {8.0, {EventKind::measure_and_transmit, EntityId::two}},
    };
    return tl;
}

bool has_knot(const PenaltyCurve& c, double t, double v) {
    for (const auto& k : c.knots) {
        if (k.t == t && k.value == v) return true;
    }
    return false;
}

} // namespace

TEST_CASE("comparison timeline: states and bidirectional penalty") {
    const TraceResult r = evaluate(comparison_timeline(), EntityId::one,
                                   AoiiRule::own_measurement_resets);

    const std::vector<StateName> expected = {StateName::O, StateName::A, StateName::O,
                                             StateName::B, StateName::E, StateName::Gamma,
                                             StateName::Phi};
    CHECK(r.states == expected);

    // first excursion peaks at 1.5 and resets, second at 4.0
    CHECK(has_knot(r.baoii, 3.0, 1.5));
    CHECK(has_knot(r.baoii, 3.0, 0.0));
    CHECK(has_knot(r.baoii, 8.0, 4.0));
    CHECK(has_knot(r.baoii, 8.0, 0.0));

    CHECK(area(r.baoii, 4.0, 8.0) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(area(r.baoii, 0.0, 4.0) == doctest::Approx(0.5 * 1.5 * 1.5).epsilon(1e-13));
}

TEST_CASE("penalty value equals time since the last reset moment while gated") {
    const TraceResult r = evaluate(comparison_timeline(), EntityId::one,
                                   AoiiRule::own_measurement_resets);
    // sigma(t): last instant the viewer's reset predicate held
    const auto sigma = [](double t) {
        if (t < 3.0) return std::min(t, 1.5);
        return std::min(t, 4.0);
    };
    for (double t : {0.5, 1.5, 2.0, 2.9, 3.5, 4.0, 5.0, 6.4, 7.9}) {
        CHECK(r.baoii.value_at(t) == doctest::Approx(t - sigma(t)).epsilon(1e-12));
    }
}

TEST_CASE("own-measurement rule: viewer measurements reset, drifts restart accrual") {
    const TraceResult r = evaluate(comparison_timeline(), EntityId::one,
                                   AoiiRule::own_measurement_resets);
    CHECK(has_knot(r.aoii, 3.0, 1.5));
    CHECK(has_knot(r.aoii, 3.0, 0.0));
    CHECK(has_knot(r.aoii, 6.5, 2.5));
    CHECK(has_knot(r.aoii, 6.5, 0.0));
    // flat at zero after the measurement at 6.5, despite the stale view of
    // the peer in Gamma
    CHECK(r.aoii.value_at(7.0) == 0.0);
    CHECK(r.aoii.value_at(8.0) == 0.0);

    // on this timeline the one-sided penalty never exceeds the bidirectional
    for (double t = 0.0; t <= 8.0; t += 0.125) {
        CHECK(r.aoii.value_at(t) <= r.baoii.value_at(t) + 1e-12);
    }
}

TEST_CASE("self-knowledge rule accrues only while the own-state bit is wrong") {
    const TraceResult r = evaluate(comparison_timeline(), EntityId::one,
                                   AoiiRule::self_knowledge_resets);
    // wrong on [1.5, 3) in A and on [5.5, 6.5) in E
    CHECK(r.aoii.value_at(2.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(has_knot(r.aoii, 3.0, 1.5));
    CHECK(r.aoii.value_at(4.5) == 0.0);  // B: own state correct, peer view stale
    CHECK(has_knot(r.aoii, 6.5, 1.0));
    CHECK(r.aoii.value_at(7.5) == 0.0);
}

TEST_CASE("empty timeline gives two zero curves") {
    Timeline tl;
    const TraceResult r = evaluate(tl, EntityId::one, AoiiRule::own_measurement_resets);
    CHECK(r.states == std::vector<StateName>{StateName::O});
    CHECK(r.baoii.end_time == 0.0);
    CHECK(area(r.baoii, 0.0, 0.0) == 0.0);
    CHECK(area(r.aoii, 0.0, 0.0) == 0.0);
}

TEST_CASE("area is additive and guards its domain") {
    const TraceResult r = evaluate(comparison_timeline(), EntityId::one,
                                   AoiiRule::own_measurement_resets);
    const double whole = area(r.baoii, 0.0, 8.0);
    CHECK(whole == doctest::Approx(area(r.baoii, 0.0, 5.0) + area(r.baoii, 5.0, 8.0))
                       .epsilon(1e-12));
    CHECK_THROWS_AS(area(r.baoii, -1.0, 2.0), input_error);
    CHECK_THROWS_AS(area(r.baoii, 0.0, 9.0), input_error);
    CHECK_THROWS_AS(area(r.baoii, 5.0, 4.0), input_error);
}

TEST_CASE("viewer symmetry on a mirrored excursion") {
    // entity 1 drifts and repairs; entity 2 sees the mirror
    Timeline tl;
    tl.events = {
        {1.0, {EventKind::drift, EntityId::one}},
        {2.0, {EventKind::measure_and_transmit, EntityId::one}},
    };
    const TraceResult v1 = evaluate(tl, EntityId::one, AoiiRule::own_measurement_resets);

    Timeline mirrored;
    mirrored.events = {
        {1.0, {EventKind::drift, EntityId::two}},
        {2.0, {EventKind::measure_and_transmit, EntityId::two}},
    };
    const TraceResult v2 = evaluate(mirrored, EntityId::two,
                                    AoiiRule::own_measurement_resets);
    for (double t : {0.5, 1.0, 1.5, 2.0}) {
        CHECK(v1.baoii.value_at(t) == doctest::Approx(v2.baoii.value_at(t)));
    }
}

TEST_CASE("timeline validation") {
    Timeline tl;
    tl.events = {{1.0, {EventKind::drift, EntityId::one}},
                 {1.0, {EventKind::drift, EntityId::two}}};
    CHECK_THROWS_AS(evaluate(tl, EntityId::one, AoiiRule::own_measurement_resets),
                    input_error);

    Timeline decreasing;
    decreasing.events = {{2.0, {EventKind::drift, EntityId::one}},
                         {1.0, {EventKind::drift, EntityId::two}}};
    CHECK_THROWS_AS(evaluate(decreasing, EntityId::one, AoiiRule::own_measurement_resets),
                    input_error);

    Timeline bad_start;
    bad_start.start = InfoState{true, false, false, false};
    CHECK_THROWS_AS(evaluate(bad_start, EntityId::one, AoiiRule::own_measurement_resets),
                    input_error);
}

TEST_CASE("timeline CSV parsing") {
    std::istringstream good("time,event,actor\n"
                            "1.5,drift,1\n"
                            "3,measure_transmit,1\n"
                            "# comment\n"
                            "4,measure,2\n");
    const Timeline tl = parse_timeline_csv(good);
    REQUIRE(tl.events.size() == 3);
    CHECK(tl.events[0].t == 1.5);
    CHECK(tl.events[0].event.kind == EventKind::drift);
    CHECK(tl.events[2].event.kind == EventKind::measure_only);
    CHECK(tl.events[2].event.actor == EntityId::two);

    std::istringstream bad_event("1.5,teleport,1\n");
    CHECK_THROWS_WITH_AS(parse_timeline_csv(bad_event),
                         doctest::Contains("line 1"), input_error);

    std::istringstream bad_actor("1.5,drift,3\n");
    CHECK_THROWS_AS(parse_timeline_csv(bad_actor), input_error);

    std::istringstream bad_time("soon,drift,1\n");
    CHECK_THROWS_AS(parse_timeline_csv(bad_time), input_error);
}

TEST_CASE("bundled comparison timeline file parses to the same walk") {
    const char* data_dir = std::getenv("BAOII_DATA");
    REQUIRE(data_dir != nullptr);
    const Timeline tl = load_timeline_csv(std::string(data_dir) + "/fig3.csv");
    const TraceResult r = evaluate(tl, EntityId::one, AoiiRule::own_measurement_resets);
    const std::vector<StateName> expected = {StateName::O, StateName::A, StateName::O,
                                             StateName::B, StateName::E, StateName::Gamma,
                                             StateName::Phi};
    CHECK(r.states == expected);
    const std::string csv = curve_csv(r.baoii);
    CHECK(csv.find("8,4,Phi") != std::string::npos);
}
