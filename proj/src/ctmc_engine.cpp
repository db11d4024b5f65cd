#include "baoii/ctmc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "baoii/errors.hpp"

namespace baoii {

namespace {

constexpr double k_residual_tol = 1e-10;

double event_rate(const Event& e, const RateParams& rp) {
    const double m = e.actor == EntityId::one ? rp.m1 : rp.m2;
    switch (e.kind) {
    case EventKind::drift: return rp.d;
    case EventKind::measure_only: return (1.0 - rp.p) * m;
    case EventKind::measure_and_transmit: return rp.p * m;
    }
    return 0.0;
}

// reach(i,j): j can be reached from i along positive-rate edges
std::vector<std::vector<bool>> reachability(const Matrix& q) {
    const int n = q.rows();
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) {
        reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
        for (int j = 0; j < n; ++j) {
            if (i != j && q(i, j) > 0.0) reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) continue;
            for (int j = 0; j < n; ++j) {
                if (reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]) {
                    reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                }
            }
        }
    }
    return reach;
}

} // namespace

void RateParams::check(bool allow_zero_p) const {
    if (!(d >= 0.0) || !std::isfinite(d)) throw input_error("rate d must be finite and >= 0");
    if (!(m1 > 0.0) || !std::isfinite(m1)) throw input_error("rate m1 must be finite and > 0");
    if (!(m2 > 0.0) || !std::isfinite(m2)) throw input_error("rate m2 must be finite and > 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw input_error("probability p must lie in [0, 1]");
    if (!allow_zero_p && p == 0.0) {
        throw input_error("p = 0 is admitted only by the simulator (never resets)");
    }
}

GeneratorMatrix build_generator(const RateParams& params) {
    params.check(/*allow_zero_p=*/true);
    Matrix q(state_count, state_count, 0.0);
    const auto& states = enumerate_states();
    for (int i = 0; i < state_count; ++i) {
        for (const Event& e : all_events()) {
            const InfoState next = apply_event(states[static_cast<std::size_t>(i)], e);
            if (next == states[static_cast<std::size_t>(i)]) continue;  // no-op, no self-loop
            q(i, index_of(next)) += event_rate(e, params);
        }
    }
    for (int i = 0; i < state_count; ++i) {
        double row = 0.0;
        for (int j = 0; j < state_count; ++j) {
            if (j != i) row += q(i, j);
        }
        q(i, i) = -row;
    }
    return GeneratorMatrix{q};
}

std::vector<double> stationary(const Matrix& q) {
    const int n = q.rows();
    if (q.cols() != n || n == 0) throw numeric_error("stationary: matrix must be square");

    const auto reach = reachability(q);
    // recurrent <=> every reachable state reaches back
    std::vector<int> recurrent;
    for (int i = 0; i < n; ++i) {
        bool closed = true;
        for (int j = 0; j < n; ++j) {
            if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
                !reach[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
                closed = false;
            }
        }
        if (closed) recurrent.push_back(i);
    }
    if (recurrent.empty()) throw numeric_error("stationary: no recurrent class found");
    for (std::size_t a = 0; a + 1 < recurrent.size(); ++a) {
        if (!reach[static_cast<std::size_t>(recurrent[a])][static_cast<std::size_t>(recurrent[a + 1])]) {
            throw numeric_error("stationary: more than one recurrent class");
        }
    }

    // pi Q = 0 restricted to the recurrent class, one balance equation
    // replaced by the normalization row.
    const int m = static_cast<int>(recurrent.size());
    Matrix a(m, m, 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            a(r, c) = q(recurrent[static_cast<std::size_t>(c)], recurrent[static_cast<std::size_t>(r)]);
        }
    }
    for (int c = 0; c < m; ++c) a(m - 1, c) = 1.0;
    b[static_cast<std::size_t>(m - 1)] = 1.0;

    const std::vector<double> x = solve_linear(a, b);

    std::vector<double> pi(static_cast<std::size_t>(n), 0.0);
    for (int c = 0; c < m; ++c) {
        pi[static_cast<std::size_t>(recurrent[static_cast<std::size_t>(c)])] =
            std::max(0.0, x[static_cast<std::size_t>(c)]);
    }

    // residual check over the full matrix: || pi Q ||_inf
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += pi[static_cast<std::size_t>(i)] * q(i, j);
        worst = std::max(worst, std::abs(s));
    }
    if (worst > k_residual_tol) {
        throw numeric_error("stationary: residual " + std::to_string(worst) +
                            " exceeds tolerance");
    }
    return pi;
}

Matrix jump_probabilities(const Matrix& q) {
    const int n = q.rows();
    Matrix s(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double exit = -q(i, i);
        if (exit <= 0.0) {
            throw numeric_error("jump_probabilities: state " + std::to_string(i) +
                                " has zero exit rate");
        }
        for (int j = 0; j < n; ++j) {
            if (j != i) s(i, j) = q(i, j) / exit;
        }
    }
    return s;
}

FirstPassageResult mean_first_passage(const Matrix& q, std::vector<int> targets) {
    const int n = q.rows();
    if (targets.empty()) throw numeric_error("mean_first_passage: empty target set");
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int t : targets) {
        if (t < 0 || t >= n) throw numeric_error("mean_first_passage: target out of range");
    }

    std::vector<bool> is_target(static_cast<std::size_t>(n), false);
    for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;

    const auto reach = reachability(q);
    std::vector<int> free_states;
    for (int i = 0; i < n; ++i) {
        if (is_target[static_cast<std::size_t>(i)]) continue;
        bool ok = false;
        for (int t : targets) ok = ok || reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        if (!ok) {
            throw numeric_error("mean_first_passage: targets unreachable from state " +
                                std::to_string(i) + ", hitting time diverges");
        }
        free_states.push_back(i);
    }

    FirstPassageResult out;
    out.targets = targets;
    out.tau.assign(static_cast<std::size_t>(n), 0.0);
    if (free_states.empty()) return out;

    // Row h of Q restricted to non-targets, right-hand side -1:
    //   sum_n q(h,n) tau_n = -1  with tau = 0 on targets.
    const int m = static_cast<int>(free_states.size());
    Matrix a(m, m, 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), -1.0);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            a(r, c) = q(free_states[static_cast<std::size_t>(r)], free_states[static_cast<std::size_t>(c)]);
        }
    }
    const std::vector<double> x = solve_linear(a, b);
    if (residual_inf_norm(a, x, b) > k_residual_tol) {
        throw numeric_error("mean_first_passage: residual exceeds tolerance");
    }
    for (int r = 0; r < m; ++r) {
        const double v = x[static_cast<std::size_t>(r)];
        if (!(v >= -k_residual_tol)) {
            throw numeric_error("mean_first_passage: negative hitting time");
        }
        out.tau[static_cast<std::size_t>(free_states[static_cast<std::size_t>(r)])] = std::max(0.0, v);
    }
    return out;
}

double expected_error_period(const RateParams& params) {
    params.check(/*allow_zero_p=*/false);
    const GeneratorMatrix gen = build_generator(params);
    const std::vector<double> pi = stationary(gen.q);
    const Matrix s = jump_probabilities(gen.q);
    const FirstPassageResult fp = mean_first_passage(
        gen.q, {static_cast<int>(StateName::O), static_cast<int>(StateName::Phi)});

    const auto at = [&](StateName n) { return static_cast<int>(n); };
    const double mass = pi[static_cast<std::size_t>(at(StateName::O))] +
                        pi[static_cast<std::size_t>(at(StateName::Phi))];
    if (!(mass > 0.0)) {
        throw numeric_error("expected_error_period: reset states carry no stationary mass");
    }
    const double p_o = pi[static_cast<std::size_t>(at(StateName::O))] / mass;
    const double p_phi = 1.0 - p_o;
    const auto tau = [&](StateName n) { return fp.tau[static_cast<std::size_t>(at(n))]; };

    return p_o * (s(at(StateName::O), at(StateName::A)) * tau(StateName::A) +
                  s(at(StateName::O), at(StateName::B)) * tau(StateName::B)) +
           p_phi * (s(at(StateName::Phi), at(StateName::A)) * tau(StateName::A) +
                    s(at(StateName::Phi), at(StateName::Gamma)) * tau(StateName::Gamma));
}

} // namespace baoii
