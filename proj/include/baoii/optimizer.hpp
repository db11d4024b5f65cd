#pragma once

#include "baoii/analytic.hpp"

namespace baoii {

struct PolicyResult {
    double argmin = 0.0;
    double objective = 0.0;
    enum class Method { closed_form, grid } method = Method::closed_form;
    double grid_resolution = 0.0;
};

// Brute-force searches. These are the oracle of record for the closed forms
// below; ties within 1e-12 of the running minimum break toward the cheaper
// (smaller) argument.
PolicyResult optimal_p_grid(double m, const CostModel& costs);   // p in [0.001, 1], step 1e-3
PolicyResult optimal_m_grid(double p, const CostModel& costs);   // 400 log points in [0.01, 100]

// Transmit probability minimizing C at fixed m:
//   p* = min(1, 1 / (2 m sqrt(k_lambda))),  p* = 1 when k_lambda == 0.
// Cross-checked against the grid search on every call; disagreement beyond
// one grid step raises numeric_error.
PolicyResult optimal_p(double m, const CostModel& costs);

// Measurement rate minimizing C at fixed p:
//   m* = sqrt((2p+1) / (4 p (k_m + p k_lambda))).
// Cross-checked against the log grid within 1%.
PolicyResult optimal_m(double p, const CostModel& costs);

// Largest m at which always-transmit is still optimal: 1 / (2 sqrt(k_lambda)).
double crossover_rate(double k_lambda);

// Largest measurement cost sustaining p = 1 at rate m when k_lambda = eta k_m.
double max_measurement_cost(double m, double eta);

} // namespace baoii
