#include <doctest.h>

#include <cmath>
#include <string>

#include "baoii/analytic.hpp"
#include "baoii/errors.hpp"
#include "baoii/rng.hpp"

using namespace baoii;

TEST_CASE("mean penalty closed form") {
    CHECK(delta_baoii(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(delta_baoii(1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(delta_baoii(2.0, 1.0) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(std::isinf(delta_baoii(1.0, 0.0)));
    CHECK_THROWS_AS(delta_baoii(0.0, 0.5), input_error);
}

TEST_CASE("mean penalty equals half the cycle time, and is decreasing in m and p") {
    Rng rng(9001);
    for (int rep = 0; rep < 200; ++rep) {
        const double m = 0.05 + 20.0 * rng.next_unit();
        const double p = 0.01 + 0.99 * rng.next_unit();
        CHECK(delta_baoii(m, p) ==
              doctest::Approx(T_closed(m, m, p) / 2.0).epsilon(1e-12));
        CHECK(delta_baoii(m * 1.05, p) < delta_baoii(m, p));
        CHECK(delta_baoii(m, std::min(1.0, p * 1.05)) < delta_baoii(m, p));
    }
}

TEST_CASE("cycle time closed form") {
    CHECK(T_closed(1, 1, 1) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(T_closed(2, 4, 0.5) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(std::isinf(T_closed(1, 1, 0.0)));
}

TEST_CASE("printed stationary masses") {
    const StationaryClosedForm s = stationary_closed_form({1, 1, 1, 0.5});
    CHECK(s.pi_o == doctest::Approx(0.04).epsilon(1e-13));
    CHECK(s.pi_phi == doctest::Approx(0.125 / 2.734375).epsilon(1e-13));
    CHECK(s.p_o == doctest::Approx(7.0 / 15).epsilon(1e-12));
    CHECK(s.p_o + s.p_phi == doctest::Approx(1.0).epsilon(1e-13));

    // the printed numerators carry (1-p)^2, so both masses vanish at p = 1
    double pi_o = -1.0, pi_phi = -1.0;
    stationary_pi_printed({1, 1, 1, 1}, pi_o, pi_phi);
    CHECK(pi_o == 0.0);
    CHECK(pi_phi == 0.0);
    CHECK_THROWS_AS(stationary_closed_form({1, 1, 1, 1}), numeric_error);
}

TEST_CASE("printed reset-time closed forms at the symmetric unit point") {
    const TauSet t = tau_closed_forms({1, 1, 1, 1});
    CHECK(t.a == doctest::Approx(1.75).epsilon(1e-13));
    CHECK(t.b == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(t.gamma == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(t.theta == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(t.f == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(t.e == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(t.psi == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("typeset reset-time system, solved verbatim") {
    // at p = 1 the A, B, Gamma, E components match the printed solutions ...
    const TauSet sys = solve_printed_tau_system({1, 1, 1, 1});
    CHECK(sys.a == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(sys.b == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(sys.gamma == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(sys.e == doctest::Approx(1.5).epsilon(1e-12));
    // ... while Theta, Psi, F do not (exact rational solve of the same
    // typeset system: 147/128, 153/128, 147/128)
    CHECK(sys.theta == doctest::Approx(147.0 / 128).epsilon(1e-12));
    CHECK(sys.psi == doctest::Approx(153.0 / 128).epsilon(1e-12));
    CHECK(sys.f == doctest::Approx(147.0 / 128).epsilon(1e-12));

    // the p = 1 identities that hold for any d and m:
    //   tau_E = 3/(2m), tau_A = (2m + 1.5 d)/(m (m + d)), and agreement with
    //   the printed solutions on the A, B, Gamma, E components
    for (double d : {0.5, 2.0, 7.0}) {
        for (double m : {0.5, 1.0, 3.0}) {
            const TauSet s = solve_printed_tau_system({d, m, m, 1.0});
            CHECK(s.e == doctest::Approx(1.5 / m).epsilon(1e-12));
            CHECK(s.a == doctest::Approx((2 * m + 1.5 * d) / (m * (m + d))).epsilon(1e-12));
            const TauSet closed = tau_closed_forms({d, m, m, 1.0});
            CHECK(s.a == doctest::Approx(closed.a).epsilon(1e-12));
            CHECK(s.b == doctest::Approx(closed.b).epsilon(1e-12));
            CHECK(s.gamma == doctest::Approx(closed.gamma).epsilon(1e-12));
            CHECK(s.e == doctest::Approx(closed.e).epsilon(1e-12));
        }
    }

    // exact rational solve at the half-transmit point (all over 751)
    const TauSet half = solve_printed_tau_system({1, 1, 1, 0.5});
    CHECK(half.a == doctest::Approx(1414.0 / 751).epsilon(1e-12));
    CHECK(half.b == doctest::Approx(1366.0 / 751).epsilon(1e-12));
    CHECK(half.gamma == doctest::Approx(1366.0 / 751).epsilon(1e-12));
    CHECK(half.e == doctest::Approx(1326.0 / 751).epsilon(1e-12));
    CHECK(half.f == doctest::Approx(1310.0 / 751).epsilon(1e-12));
    CHECK(half.theta == doctest::Approx(1310.0 / 751).epsilon(1e-12));
    CHECK(half.psi == doctest::Approx(1158.0 / 751).epsilon(1e-12));
}

TEST_CASE("cycle time assembled from printed reset times reproduces the closed form") {
    for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (double d : {0.1, 1.0, 10.0}) {
            for (double m : {0.5, 1.0, 2.0}) {
                const RateParams rp{d, m, m, p};
                const double assembled = assemble_cycle_time_printed(rp);
                const double closed = T_closed(m, m, p);
                CHECK(std::abs(assembled - closed) <= 1e-9 * closed);
            }
        }
    }
    // the identity even holds with asymmetric rates, because the printed
    // tau_B and tau_Gamma coincide
    CHECK(assemble_cycle_time_printed({0.3, 0.7, 1.3, 0.6}) ==
          doctest::Approx(T_closed(0.7, 1.3, 0.6)).epsilon(1e-12));
}

TEST_CASE("action cost rate") {
    CHECK(cost_K(10, 0.5, {1.0, 1.0}) == doctest::Approx(15.0).epsilon(1e-13));
    CHECK(cost_K(3.7, 0.9, {0.0, 0.0}) == 0.0);
    CHECK(cost_K(1, 1, {5e-4, 1e-3}) == doctest::Approx(1.5e-3).epsilon(1e-13));
}

TEST_CASE("total objective") {
    CHECK(total_cost(1, 1, {0.0, 0.0}) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(total_cost(10, 1, {5e-4, 1e-3}) == doctest::Approx(0.09).epsilon(1e-13));
    CHECK(std::isinf(total_cost(1, 0, {1.0, 1.0})));

    Rng rng(9002);
    for (int rep = 0; rep < 1000; ++rep) {
        const double m = 0.05 + 30.0 * rng.next_unit();
        const double p = 0.01 + 0.99 * rng.next_unit();
        const CostModel costs{rng.next_unit(), rng.next_unit()};
        CHECK(total_cost(m, p, costs) ==
              doctest::Approx(delta_baoii(m, p) + cost_K(m, p, costs)).epsilon(1e-12));
    }
}

TEST_CASE("cost thresholds") {
    CHECK(k_lambda_threshold(1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(k_lambda_threshold(10) == doctest::Approx(2.5e-3).epsilon(1e-13));
    CHECK(k_m_threshold(1, 2) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(k_m_threshold(10, 2) == doctest::Approx(1.25e-3).epsilon(1e-13));

    double prev = k_lambda_threshold(0.1);
    for (double m : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double cur = k_lambda_threshold(m);
        CHECK(cur < prev);
        prev = cur;
        CHECK(k_m_threshold(m, 1.0) == doctest::Approx(k_lambda_threshold(m)).epsilon(1e-13));
    }
}

TEST_CASE("closed-form report serialization") {
    const ClosedFormReport r = closed_form_report({1, 1, 1, 0.5}, {5e-4, 1e-3});
    const std::string text = to_key_value_text(r);
    CHECK(text.find("delta_baoii = 1\n") != std::string::npos);
    CHECK(text.find("pi_O = 0.04\n") != std::string::npos);
    CHECK(text.find("cycle_time = 2\n") != std::string::npos);

    const std::string header = closed_form_csv_header();
    const std::string row = closed_form_csv_row(r);
    const auto count_commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(count_commas(header) == count_commas(row));

    // at p = 1 the conditioned masses are undefined and serialize as blanks
    const ClosedFormReport r1 = closed_form_report({1, 1, 1, 1}, {5e-4, 1e-3});
    CHECK_FALSE(r1.conditioned_defined);
    CHECK(to_key_value_text(r1).find("P_O = undefined") != std::string::npos);
}
