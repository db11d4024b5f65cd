#include <doctest.h>

#include <cmath>
#include <map>

#include "baoii/ctmc_engine.hpp"
#include "baoii/errors.hpp"
#include "baoii/rng.hpp"
#include "baoii/state_model.hpp"

using namespace baoii;

namespace {

int at(StateName n) { return static_cast<int>(n); }
std::size_t idx(StateName n) { return static_cast<std::size_t>(n); }

RateParams random_params(Rng& rng, bool open_unit_p) {
    RateParams rp;
    rp.d = 0.05 + 10.0 * rng.next_unit();
    rp.m1 = 0.05 + 10.0 * rng.next_unit();
    rp.m2 = 0.05 + 10.0 * rng.next_unit();
    rp.p = open_unit_p ? 0.01 + 0.98 * rng.next_unit() : rng.next_unit_positive();
    return rp;
}

} // namespace

TEST_CASE("generator: named edge rates") {
    const RateParams rp{1.0, 2.0, 3.0, 0.25};
    const GeneratorMatrix g = build_generator(rp);
    CHECK(g.rate(StateName::O, StateName::A) == doctest::Approx(rp.d));
    CHECK(g.rate(StateName::O, StateName::B) == doctest::Approx(rp.d));
    CHECK(g.rate(StateName::E, StateName::B) == doctest::Approx(rp.p * rp.m1));
    CHECK(g.rate(StateName::A, StateName::Phi) == doctest::Approx((1 - rp.p) * rp.m1));
    CHECK(g.rate(StateName::Gamma, StateName::Phi) == doctest::Approx(rp.p * rp.m2));
    CHECK(g.rate(StateName::O, StateName::E) == 0.0);
}

TEST_CASE("generator: 30 edges in the expected rate classes for p < 1") {
    // rate values chosen pairwise distinct so the class of an edge can be
    // recovered from its numeric rate
    const RateParams rp{0.11, 0.73, 1.91, 0.37};
    const GeneratorMatrix g = build_generator(rp);
    std::map<std::string, int> class_counts;
    const std::map<double, std::string> classes = {
        {rp.d, "d"},
        {(1 - rp.p) * rp.m1, "measure1"},
        {rp.p * rp.m1, "transmit1"},
        {(1 - rp.p) * rp.m2, "measure2"},
        {rp.p * rp.m2, "transmit2"},
    };
    int edges = 0;
    for (int i = 0; i < state_count; ++i) {
        for (int j = 0; j < state_count; ++j) {
            if (i == j || g.q(i, j) == 0.0) continue;
            ++edges;
            bool matched = false;
            for (const auto& [rate, name] : classes) {
                if (std::abs(g.q(i, j) - rate) < 1e-15) {
                    ++class_counts[name];
                    matched = true;
                }
            }
            CHECK(matched);
        }
    }
    CHECK(edges == 30);
    CHECK(class_counts["d"] == 12);
    CHECK(class_counts["measure1"] == 3);
    CHECK(class_counts["transmit1"] == 6);
    CHECK(class_counts["measure2"] == 3);
    CHECK(class_counts["transmit2"] == 6);
}

TEST_CASE("generator rows sum to zero for random parameters") {
    Rng rng(7001);
    for (int rep = 0; rep < 100; ++rep) {
        const GeneratorMatrix g = build_generator(random_params(rng, false));
        double scale = 1.0;
        for (int i = 0; i < state_count; ++i) scale = std::max(scale, -g.q(i, i));
        for (int i = 0; i < state_count; ++i) {
            double row = 0.0;
            for (int j = 0; j < state_count; ++j) {
                if (i != j) CHECK(g.q(i, j) >= 0.0);
                row += g.q(i, j);
            }
            CHECK(std::abs(row) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("stationary: two-state symmetric chain") {
    Matrix q(2, 2);
    q(0, 0) = -3.0; q(0, 1) = 3.0;
    q(1, 0) = 3.0;  q(1, 1) = -3.0;
    const auto pi = stationary(q);
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stationary distribution at the symmetric half-transmit point") {
    // exact masses from a rational null-space solve of the same chain
    const auto pi = stationary(build_generator({1, 1, 1, 0.5}).q);
    CHECK(pi[idx(StateName::O)] == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(pi[idx(StateName::Phi)] == doctest::Approx(1.0 / 18).epsilon(1e-12));
    CHECK(pi[idx(StateName::A)] == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(pi[idx(StateName::B)] == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(pi[idx(StateName::Gamma)] == doctest::Approx(1.0 / 12).epsilon(1e-12));
    CHECK(pi[idx(StateName::F)] == doctest::Approx(1.0 / 36).epsilon(1e-12));
    CHECK(pi[idx(StateName::Psi)] == doctest::Approx(1.0 / 12).epsilon(1e-12));
    CHECK(pi[idx(StateName::Theta)] == doctest::Approx(1.0 / 18).epsilon(1e-12));
    CHECK(pi[idx(StateName::E)] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("stationary: transient states carry no mass at p = 1") {
    const auto pi = stationary(build_generator({1, 1, 1, 1}).q);
    CHECK(pi[idx(StateName::F)] == 0.0);
    CHECK(pi[idx(StateName::Psi)] == 0.0);
    CHECK(pi[idx(StateName::Theta)] == 0.0);
    CHECK(pi[idx(StateName::Phi)] == 0.0);
    CHECK(pi[idx(StateName::Gamma)] == 0.0);
    CHECK(pi[idx(StateName::O)] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pi[idx(StateName::E)] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("stationary residual and normalization on a random grid") {
    Rng rng(7002);
    for (int rep = 0; rep < 100; ++rep) {
        const GeneratorMatrix g = build_generator(random_params(rng, false));
        const auto pi = stationary(g.q);
        double sum = 0.0, worst = 0.0;
        for (int j = 0; j < state_count; ++j) {
            double s = 0.0;
            for (int i = 0; i < state_count; ++i) s += pi[static_cast<std::size_t>(i)] * g.q(i, j);
            worst = std::max(worst, std::abs(s));
            sum += pi[static_cast<std::size_t>(j)];
            CHECK(pi[static_cast<std::size_t>(j)] >= 0.0);
        }
        CHECK(worst <= 1e-10);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("entity symmetry: swapping rates relabels the stationary masses") {
    Rng rng(7003);
    for (int rep = 0; rep < 20; ++rep) {
        const RateParams rp = random_params(rng, true);
        const RateParams swapped{rp.d, rp.m2, rp.m1, rp.p};
        const auto pi = stationary(build_generator(rp).q);
        const auto pi_swapped = stationary(build_generator(swapped).q);
        for (const InfoState& s : enumerate_states()) {
            const int i = index_of(s);
            const int j = index_of(swap_entities(s));
            CHECK(pi[static_cast<std::size_t>(i)] ==
                  doctest::Approx(pi_swapped[static_cast<std::size_t>(j)]).epsilon(1e-9));
        }
    }
}

TEST_CASE("jump probabilities") {
    const GeneratorMatrix g = build_generator({1.5, 1.0, 2.0, 0.5});
    const Matrix s = jump_probabilities(g.q);
    CHECK(s(at(StateName::O), at(StateName::A)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s(at(StateName::O), at(StateName::B)) == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 0; i < state_count; ++i) {
        double row = 0.0;
        for (int j = 0; j < state_count; ++j) row += s(i, j);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s(i, i) == 0.0);
    }

    const RateParams p1{2.0, 3.0, 1.0, 1.0};
    const Matrix s1 = jump_probabilities(build_generator(p1).q);
    CHECK(s1(at(StateName::A), at(StateName::O)) ==
          doctest::Approx(p1.m1 / (p1.m1 + p1.d)).epsilon(1e-12));
    CHECK(s1(at(StateName::A), at(StateName::E)) ==
          doctest::Approx(p1.d / (p1.m1 + p1.d)).epsilon(1e-12));

    // d = 0 leaves O with no exits
    CHECK_THROWS_AS(jump_probabilities(build_generator({0.0, 1.0, 1.0, 0.5}).q),
                    numeric_error);
}

TEST_CASE("mean first passage: trivial and hand-solved points") {
    const GeneratorMatrix g = build_generator({1, 1, 1, 1});
    std::vector<int> all;
    for (int i = 0; i < state_count; ++i) all.push_back(i);
    const auto trivial = mean_first_passage(g.q, all);
    for (double t : trivial.tau) CHECK(t == 0.0);

    // reachable subchain {A, B, E} solves by hand to 3/2, 3/2, 2
    const auto fp = mean_first_passage(g.q, {at(StateName::O), at(StateName::Phi)});
    CHECK(fp.tau[idx(StateName::A)] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::B)] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::E)] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::Gamma)] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::O)] == 0.0);
    CHECK(fp.tau[idx(StateName::Phi)] == 0.0);

    // exact rational solve at p = 1/2: A -> 15/7, B, Gamma -> 20/7, E -> 23/7
    const auto fp_half = mean_first_passage(build_generator({1, 1, 1, 0.5}).q,
                                            {at(StateName::O), at(StateName::Phi)});
    CHECK(fp_half.tau[idx(StateName::A)] == doctest::Approx(15.0 / 7).epsilon(1e-12));
    CHECK(fp_half.tau[idx(StateName::B)] == doctest::Approx(20.0 / 7).epsilon(1e-12));
    CHECK(fp_half.tau[idx(StateName::Gamma)] == doctest::Approx(20.0 / 7).epsilon(1e-12));
    CHECK(fp_half.tau[idx(StateName::E)] == doctest::Approx(23.0 / 7).epsilon(1e-12));
}

TEST_CASE("mean first passage: unreachable targets diverge") {
    // at p = 1 nothing flows into F, so F is unreachable from O
    const GeneratorMatrix g = build_generator({1, 1, 1, 1});
    CHECK_THROWS_AS(mean_first_passage(g.q, {at(StateName::F)}), numeric_error);
}

TEST_CASE("mean first passage is monotone when the target set grows") {
    Rng rng(7004);
    for (int rep = 0; rep < 20; ++rep) {
        const RateParams rp = random_params(rng, true);
        const GeneratorMatrix g = build_generator(rp);
        const std::vector<int> base = {at(StateName::O), at(StateName::Phi)};
        std::vector<int> larger = base;
        larger.push_back(static_cast<int>(rng.next_u64() % state_count));
        const auto tau_base = mean_first_passage(g.q, base);
        const auto tau_larger = mean_first_passage(g.q, larger);
        for (int i = 0; i < state_count; ++i) {
            CHECK(tau_larger.tau[static_cast<std::size_t>(i)] <=
                  tau_base.tau[static_cast<std::size_t>(i)] + 1e-12);
        }
    }
}

TEST_CASE("viewer symmetry of hitting times") {
    Rng rng(7005);
    for (int rep = 0; rep < 10; ++rep) {
        const RateParams rp = random_params(rng, true);
        const RateParams swapped{rp.d, rp.m2, rp.m1, rp.p};
        // viewer 2's reset set on the original chain
        const auto tau_v2 = mean_first_passage(build_generator(rp).q,
                                               {at(StateName::O), at(StateName::Theta)});
        // viewer 1's reset set on the rate-swapped chain
        const auto tau_v1s = mean_first_passage(build_generator(swapped).q,
                                                {at(StateName::O), at(StateName::Phi)});
        for (const InfoState& s : enumerate_states()) {
            CHECK(tau_v2.tau[static_cast<std::size_t>(index_of(s))] ==
                  doctest::Approx(
                      tau_v1s.tau[static_cast<std::size_t>(index_of(swap_entities(s)))])
                      .epsilon(1e-9));
        }
    }
}

TEST_CASE("expected error period") {
    CHECK(expected_error_period({1, 1, 1, 1}) == doctest::Approx(1.5).epsilon(1e-12));
    // drift-dependent, unlike the closed form: (2m + d) / (2 m^2)
    CHECK(expected_error_period({2, 1, 1, 1}) == doctest::Approx(2.0).epsilon(1e-12));
    // exact rational value 7/3 at the half-transmit point
    CHECK(expected_error_period({1, 1, 1, 0.5}) == doctest::Approx(7.0 / 3).epsilon(1e-12));
    CHECK_THROWS_AS(expected_error_period({1, 1, 1, 0}), input_error);
}

TEST_CASE("regression against an exact rational solve at an asymmetric point") {
    const RateParams rp{0.3, 0.7, 1.3, 0.6};
    const auto pi = stationary(build_generator(rp).q);
    CHECK(pi[idx(StateName::O)] == doctest::Approx(91.0 / 216).epsilon(1e-12));
    CHECK(pi[idx(StateName::Phi)] == doctest::Approx(91.0 / 1080).epsilon(1e-12));
    CHECK(pi[idx(StateName::A)] == doctest::Approx(13.0 / 60).epsilon(1e-12));
    CHECK(pi[idx(StateName::B)] == doctest::Approx(7.0 / 64).epsilon(1e-12));
    CHECK(pi[idx(StateName::Gamma)] == doctest::Approx(7.0 / 320).epsilon(1e-12));
    CHECK(pi[idx(StateName::F)] == doctest::Approx(91.0 / 8640).epsilon(1e-12));
    CHECK(pi[idx(StateName::Psi)] == doctest::Approx(13.0 / 480).epsilon(1e-12));
    CHECK(pi[idx(StateName::Theta)] == doctest::Approx(91.0 / 1728).epsilon(1e-12));
    CHECK(pi[idx(StateName::E)] == doctest::Approx(9.0 / 160).epsilon(1e-12));

    const auto fp = mean_first_passage(build_generator(rp).q,
                                       {at(StateName::O), at(StateName::Phi)});
    CHECK(fp.tau[idx(StateName::A)] == doctest::Approx(4005.0 / 2366).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::B)] == doctest::Approx(11125.0 / 7098).epsilon(1e-12));
    CHECK(fp.tau[idx(StateName::Psi)] == doctest::Approx(8195.0 / 3549).epsilon(1e-12));

    CHECK(expected_error_period(rp) == doctest::Approx(42275.0 / 27846).epsilon(1e-12));
}
