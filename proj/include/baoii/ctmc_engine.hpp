#pragma once

#include <string>
#include <vector>

#include "baoii/linalg.hpp"
#include "baoii/state_model.hpp"

namespace baoii {

// Continuous-time rates of the mutual-knowledge chain. Each entity drifts at
// rate d, measures at rate m_i, and transmits a fraction p of measurements
// instantaneously (transmit rate p*m_i, measure-only rate (1-p)*m_i).
struct RateParams {
    double d = 1.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double p = 1.0;

    // Throws input_error when outside the admissible domain. The analytic
    // and first-passage paths need p > 0; the simulator admits p = 0.
    void check(bool allow_zero_p = false) const;
};

// 9x9 transition-rate matrix over the canonical state order. Off-diagonals
// are non-negative, rows sum to zero.
struct GeneratorMatrix {
    Matrix q;

    double rate(StateName from, StateName to) const {
        return q(static_cast<int>(from), static_cast<int>(to));
    }
};

struct FirstPassageResult {
    std::vector<double> tau;      // expected hitting time per state, 0 on targets
    std::vector<int> targets;     // sorted state indices
    std::string target_label;
};

// Derives Q by applying every event to every state, discarding no-ops and
// summing rates of coincident (source, target) pairs.
GeneratorMatrix build_generator(const RateParams& params);

// Unique stationary distribution of a rate matrix with a single recurrent
// class; transient states get probability zero. Works on any small square
// rate matrix, not just the 9-state chain.
std::vector<double> stationary(const Matrix& q);

// Embedded jump chain: s(h,n) = q(h,n) / sum_{l != h} q(h,l).
// Throws numeric_error if some row has zero exit rate.
Matrix jump_probabilities(const Matrix& q);

// Expected time to enter the target set from each state, by direct linear
// solve of the hitting-time system. Throws numeric_error if some state
// cannot reach the targets.
FirstPassageResult mean_first_passage(const Matrix& q, std::vector<int> targets);

// Mean duration of an error period for entity 1, assembled from the numeric
// stationary distribution, embedded jump probabilities out of O and Phi, and
// hitting times of {O, Phi}:
//   P_O (s_OA tau_A + s_OB tau_B) + P_Phi (s_PhiA tau_A + s_PhiGamma tau_Gamma)
// with P_O, P_Phi the stationary masses of O and Phi conditioned on their sum.
// The Phi row keeps its embedded-chain mass on the Phi->O jump, which this
// assembly therefore counts as a zero-length excursion.
double expected_error_period(const RateParams& params);

} // namespace baoii
