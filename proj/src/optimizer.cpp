#include "baoii/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "baoii/errors.hpp"

namespace baoii {

namespace {

constexpr double k_tie_tol = 1e-12;
constexpr double k_p_step = 1e-3;
constexpr int k_m_points = 400;
constexpr double k_m_lo = 0.01;
constexpr double k_m_hi = 100.0;

} // namespace

PolicyResult optimal_p_grid(double m, const CostModel& costs) {
    if (!(m > 0.0)) throw input_error("optimal_p_grid: m must be > 0");
    costs.check();
    PolicyResult r;
    r.method = PolicyResult::Method::grid;
    r.grid_resolution = k_p_step;
    double best_p = 0.0;
    double best_c = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 1000; ++i) {
        const double p = static_cast<double>(i) * k_p_step;
        const double c = total_cost(m, p, costs);
        if (c < best_c - k_tie_tol) {
            best_c = c;
            best_p = p;
        }
    }
    r.argmin = best_p;
    r.objective = best_c;
    return r;
}

PolicyResult optimal_m_grid(double p, const CostModel& costs) {
    if (!(p > 0.0) || !(p <= 1.0)) throw input_error("optimal_m_grid: p must be in (0, 1]");
    costs.check();
    PolicyResult r;
    r.method = PolicyResult::Method::grid;
    const double log_lo = std::log10(k_m_lo);
    const double log_hi = std::log10(k_m_hi);
    const double step = (log_hi - log_lo) / (k_m_points - 1);
    int best_i = 0;
    double best_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k_m_points; ++i) {
        const double m = std::pow(10.0, log_lo + step * i);
        const double c = total_cost(m, p, costs);
        if (c < best_c - k_tie_tol) {
            best_c = c;
            best_i = i;
        }
    }
    // the coarse log step is ~2.3%, too wide for a 1% answer: refine once
    // around the winning point
    const double lo = std::pow(10.0, log_lo + step * std::max(0, best_i - 1));
    const double hi = std::pow(10.0, log_lo + step * std::min(k_m_points - 1, best_i + 1));
    const int fine_points = 400;
    double best_m = lo;
    best_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < fine_points; ++i) {
        const double m = lo + (hi - lo) * i / (fine_points - 1);
        const double c = total_cost(m, p, costs);
        if (c < best_c - k_tie_tol) {
            best_c = c;
            best_m = m;
        }
    }
    r.grid_resolution = (hi - lo) / (fine_points - 1);
    r.argmin = best_m;
    r.objective = best_c;
    return r;
}

PolicyResult optimal_p(double m, const CostModel& costs) {
    if (!(m > 0.0)) throw input_error("optimal_p: m must be > 0");
    costs.check();
    double p_star = 1.0;
    if (costs.k_lambda > 0.0) {
        p_star = std::min(1.0, 1.0 / (2.0 * m * std::sqrt(costs.k_lambda)));
    }
    PolicyResult r;
    r.method = PolicyResult::Method::closed_form;
    r.grid_resolution = k_p_step;
    r.argmin = p_star;
    r.objective = total_cost(m, p_star, costs);

    const PolicyResult grid = optimal_p_grid(m, costs);
    if (std::abs(grid.argmin - p_star) > k_p_step + 1e-9) {
        throw numeric_error("optimal_p: closed form " + std::to_string(p_star) +
                            " disagrees with grid search " + std::to_string(grid.argmin));
    }
    return r;
}

PolicyResult optimal_m(double p, const CostModel& costs) {
    if (!(p > 0.0) || !(p <= 1.0)) throw input_error("optimal_m: p must be in (0, 1]");
    costs.check();
    const double total_rate_cost = costs.k_m + p * costs.k_lambda;
    if (total_rate_cost <= 0.0) {
        throw numeric_error("optimal_m: zero action cost, objective is unbounded (m* -> inf)");
    }
    const double m_star = std::sqrt((2.0 * p + 1.0) / (4.0 * p * total_rate_cost));

    PolicyResult r;
    r.method = PolicyResult::Method::closed_form;
    r.argmin = m_star;
    r.objective = total_cost(m_star, p, costs);

    const PolicyResult grid = optimal_m_grid(p, costs);
    r.grid_resolution = grid.grid_resolution;
    if (m_star >= k_m_lo && m_star <= k_m_hi) {
        if (std::abs(grid.argmin - m_star) / m_star > 0.01) {
            throw numeric_error("optimal_m: closed form " + std::to_string(m_star) +
                                " disagrees with grid search " + std::to_string(grid.argmin));
        }
    }
    return r;
}

double crossover_rate(double k_lambda) {
    if (!(k_lambda > 0.0)) throw input_error("crossover_rate: k_lambda must be > 0");
    return 1.0 / (2.0 * std::sqrt(k_lambda));
}

double max_measurement_cost(double m, double eta) {
    return k_m_threshold(m, eta);
}

} // namespace baoii
