#pragma once

#include <string>

#include "baoii/ctmc_engine.hpp"

namespace baoii {

// Action costs, in Mbytes: k_m per measurement, k_lambda per transmission.
struct CostModel {
    double k_m = 0.0;
    double k_lambda = 0.0;

    double eta() const;  // k_lambda / k_m; throws input_error when k_m == 0
    static CostModel from_eta(double k_m, double eta);
    void check() const;
};

// Reset times per transient state, in the fixed order used by the closed
// forms. Both the closed-form evaluation and the verbatim equation-system
// solve fill this.
struct TauSet {
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double e = 0.0;
    double f = 0.0;
    double psi = 0.0;
    double theta = 0.0;

    double by_name(StateName n) const;  // throws input_error for O and Phi
};

struct StationaryClosedForm {
    double pi_o = 0.0;
    double pi_phi = 0.0;
    double p_o = 0.0;    // pi_o / (pi_o + pi_phi)
    double p_phi = 0.0;
};

// Everything below evaluates the published closed forms as printed; the
// event-derived numeric path in ctmc_engine is the independent cross-check.
// Division guards return infinities instead of throwing so sweeps can plot
// asymptotes.

// Mean long-run penalty (2p+1)/(4pm); +inf at p == 0.
double delta_baoii(double m, double p);

// Mean cycle duration 1/m1 + 1/(2 p m2); +inf at p == 0.
double T_closed(double m1, double m2, double p);

// The two printed stationary masses and their conditioned pair. Throws
// numeric_error when pi_o + pi_phi == 0 (happens at p = 1, where the printed
// numerators carry a (1-p)^2 factor) -- see stationary_pi_printed for the
// raw masses without the conditioning step.
StationaryClosedForm stationary_closed_form(const RateParams& params);

// Raw printed pi_O and pi_Phi, no conditioning, never throws on p = 1.
void stationary_pi_printed(const RateParams& params, double& pi_o, double& pi_phi);

// The seven printed reset-time expressions, evaluated by substitution.
TauSet tau_closed_forms(const RateParams& params);

// Solves the printed reset-time equation system exactly as typeset,
// idiosyncrasies included: the tau_A row has constant 2/(d+m1), the tau_E
// row has no constant term, and three tau_Psi coefficients carry the
// denominator of the tau_F row. This is deliberately *not* the standard
// hitting-time system (ctmc_engine::mean_first_passage is).
TauSet solve_printed_tau_system(const RateParams& params);

// Cycle time assembled from the printed reset times with equal-split jump
// weights out of O and Phi and the printed conditioned masses. Where those
// masses both vanish (p = 1) the split is immaterial because the printed
// tau_B and tau_Gamma coincide, and the assembly falls back to it.
double assemble_cycle_time_printed(const RateParams& params);

// Average action cost rate K = k_m m + k_lambda p m.
double cost_K(double m, double p, const CostModel& costs);

// Total objective C = (2p+1)/(4pm) + (k_m + p k_lambda) m; +inf at p == 0.
double total_cost(double m, double p, const CostModel& costs);

// Transmission-cost threshold 1/(4 m^2) below which always-transmit is optimal.
double k_lambda_threshold(double m);

// Measurement-cost threshold 1/(4 eta m^2) under k_lambda = eta k_m.
double k_m_threshold(double m, double eta);

// One-stop evaluation of all closed forms at a parameter point.
struct ClosedFormReport {
    RateParams params;
    CostModel costs;
    double delta = 0.0;
    double cycle_time = 0.0;       // T_closed(m1, m2, p)
    double pi_o = 0.0, pi_phi = 0.0;
    bool conditioned_defined = false;
    double p_o = 0.0, p_phi = 0.0; // valid only when conditioned_defined
    TauSet tau;                    // printed closed forms
    double cost_rate = 0.0;        // K at (m1, p)
    double total = 0.0;            // C at (m1, p)
};

ClosedFormReport closed_form_report(const RateParams& params, const CostModel& costs);

std::string to_key_value_text(const ClosedFormReport& r);
std::string closed_form_csv_header();
std::string closed_form_csv_row(const ClosedFormReport& r);

} // namespace baoii
