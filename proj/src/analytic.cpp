#include "baoii/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "baoii/csv.hpp"
#include "baoii/errors.hpp"

namespace baoii {

namespace {
constexpr double k_inf = std::numeric_limits<double>::infinity();
}

double CostModel::eta() const {
    if (k_m == 0.0) throw input_error("cost ratio undefined: k_m is zero");
    return k_lambda / k_m;
}

CostModel CostModel::from_eta(double k_m, double eta) {
    if (!(k_m >= 0.0) || !(eta >= 0.0)) throw input_error("costs must be >= 0");
    return CostModel{k_m, eta * k_m};
}

void CostModel::check() const {
    if (!(k_m >= 0.0) || !std::isfinite(k_m)) throw input_error("k_m must be finite and >= 0");
    if (!(k_lambda >= 0.0) || !std::isfinite(k_lambda)) {
        throw input_error("k_lambda must be finite and >= 0");
    }
}

double TauSet::by_name(StateName n) const {
    switch (n) {
    case StateName::A: return a;
    case StateName::B: return b;
    case StateName::Gamma: return gamma;
    case StateName::E: return e;
    case StateName::F: return f;
    case StateName::Psi: return psi;
    case StateName::Theta: return theta;
    default:
        throw input_error("no reset time is defined for a reset state");
    }
}

double delta_baoii(double m, double p) {
    if (!(m > 0.0)) throw input_error("delta_baoii: m must be > 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw input_error("delta_baoii: p must lie in [0, 1]");
    if (p == 0.0) return k_inf;
    return (2.0 * p + 1.0) / (4.0 * p * m);
}

double T_closed(double m1, double m2, double p) {
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw input_error("T_closed: rates must be > 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw input_error("T_closed: p must lie in [0, 1]");
    if (p == 0.0) return k_inf;
    return 1.0 / m1 + 1.0 / (2.0 * p * m2);
}

void stationary_pi_printed(const RateParams& rp, double& pi_o, double& pi_phi) {
    const double d = rp.d, m1 = rp.m1, m2 = rp.m2, p = rp.p;
    const double g1 = d + m1 * (1.0 - p) * p;
    const double g2 = d + m2 * (1.0 - p) * p;
    const double g3 = d + m1 - m1 * p * p;
    pi_phi = (g1 == 0.0 || g2 == 0.0 || g3 == 0.0)
                 ? k_inf
                 : d * m1 * m2 * (1.0 - p) * (1.0 - p) * p / (g1 * g2 * g3);
    pi_o = (g1 == 0.0 || g2 == 0.0)
               ? k_inf
               : m1 * m2 * (1.0 - p) * (1.0 - p) * p * p / (g1 * g2);
}

StationaryClosedForm stationary_closed_form(const RateParams& rp) {
    rp.check();
    StationaryClosedForm out;
    stationary_pi_printed(rp, out.pi_o, out.pi_phi);
    const double mass = out.pi_o + out.pi_phi;
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        std::ostringstream msg;
        msg << "conditioning failed: printed pi_O + pi_Phi = " << mass
            << " at d=" << rp.d << " m1=" << rp.m1 << " m2=" << rp.m2 << " p=" << rp.p
            << " (the printed numerators vanish at p = 1)";
        throw numeric_error(msg.str());
    }
    out.p_o = out.pi_o / mass;
    out.p_phi = 1.0 - out.p_o;
    return out;
}

TauSet tau_closed_forms(const RateParams& rp) {
    rp.check();
    const double d = rp.d, m1 = rp.m1, m2 = rp.m2, p = rp.p;
    const double den = p * m1 * m2 * (p * m2 + 2.0 * d + m1);
    TauSet t;
    const double shared = (2.0 * p * d * m2 + p * m1 * m2 + d * m1 + m1 * m1) / den;
    t.theta = shared;
    t.f = shared;
    t.b = shared;
    t.gamma = shared;
    t.a = (2.0 * p * p * m2 * m2 + 2.0 * p * d * m2 + 2.0 * p * m1 * m2 + d * m1) / den;
    t.psi = (2.0 * p * p * m2 * m2 + 2.0 * p * d * m2 + d * m1 + m1 * m1) / den;
    t.e = t.psi;
    return t;
}

TauSet solve_printed_tau_system(const RateParams& rp) {
    rp.check();
    const double d = rp.d, m1 = rp.m1, m2 = rp.m2, p = rp.p;

    // unknown order: A, Gamma, E, F, Psi, B, Theta
    enum { A = 0, G, E, F, PSI, B, TH, N };
    Matrix a(N, N, 0.0);
    std::vector<double> rhs(N, 0.0);
    const auto row = [&](int r, double constant, std::initializer_list<std::pair<int, double>> terms) {
        a(r, r) = 1.0;
        rhs[static_cast<std::size_t>(r)] = constant;
        for (const auto& [col, coeff] : terms) a(r, col) -= coeff;
    };

    row(A, 2.0 / (d + m1), {{E, d / (d + m1)}});
    {
        const double q = m2 + d + p * m1;
        row(G, 1.0 / q, {{F, (1.0 - p) * m2 / q}, {E, d / q}, {B, p * m1 / q}});
    }
    {
        const double q = m1 + m2;
        row(E, 0.0, {{B, p * m1 / q}, {G, (1.0 - p) * m1 / q}, {A, p * m2 / q}, {PSI, (1.0 - p) * m2 / q}});
    }
    {
        const double q = p * m1 + p * m2 + 2.0 * d;
        row(F, 1.0 / q, {{TH, p * m1 / q}, {G, d / q}, {PSI, d / q}});
    }
    {
        // first coefficient uses the row's true exit rate, the others repeat
        // the previous row's denominator -- kept exactly as typeset
        const double q_first = m1 + d + p * m2;
        const double q_rest = p * m1 + p * m2 + 2.0 * d;
        row(PSI, 0.0, {{TH, p * m1 / q_first},
                       {F, (1.0 - p) * m1 / q_rest},
                       {E, d / q_rest},
                       {A, p * m2 / q_rest}});
    }
    {
        const double q = m2 + d;
        row(B, 1.0 / q, {{TH, (1.0 - p) * m2 / q}, {E, d / q}});
    }
    {
        const double q = p * m2 + 2.0 * d;
        row(TH, 1.0 / q, {{B, d / q}, {PSI, d / q}});
    }

    const std::vector<double> x = solve_linear(a, rhs);
    TauSet t;
    t.a = x[A];
    t.gamma = x[G];
    t.e = x[E];
    t.f = x[F];
    t.psi = x[PSI];
    t.b = x[B];
    t.theta = x[TH];
    return t;
}

double assemble_cycle_time_printed(const RateParams& rp) {
    const TauSet t = tau_closed_forms(rp);
    double pi_o = 0.0, pi_phi = 0.0;
    stationary_pi_printed(rp, pi_o, pi_phi);
    const double mass = pi_o + pi_phi;
    if (mass > 0.0 && std::isfinite(mass)) {
        const double p_o = pi_o / mass;
        return p_o * 0.5 * (t.a + t.b) + (1.0 - p_o) * 0.5 * (t.a + t.gamma);
    }
    // p = 1: the printed masses vanish, but tau_B == tau_Gamma makes the
    // split irrelevant.
    return 0.5 * (t.a + t.b);
}

double cost_K(double m, double p, const CostModel& costs) {
    if (!(m > 0.0)) throw input_error("cost_K: m must be > 0");
    costs.check();
    return costs.k_m * m + costs.k_lambda * p * m;
}

double total_cost(double m, double p, const CostModel& costs) {
    if (!(m > 0.0)) throw input_error("total_cost: m must be > 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw input_error("total_cost: p must lie in [0, 1]");
    costs.check();
    if (p == 0.0) return k_inf;
    return (2.0 * p + 1.0) / (4.0 * p * m) + (costs.k_m + p * costs.k_lambda) * m;
}

double k_lambda_threshold(double m) {
    if (!(m > 0.0)) throw input_error("k_lambda_threshold: m must be > 0");
    return 1.0 / (4.0 * m * m);
}

double k_m_threshold(double m, double eta) {
    if (!(m > 0.0)) throw input_error("k_m_threshold: m must be > 0");
    if (!(eta > 0.0)) throw input_error("k_m_threshold: eta must be > 0");
    return 1.0 / (4.0 * eta * m * m);
}

ClosedFormReport closed_form_report(const RateParams& params, const CostModel& costs) {
    params.check();
    costs.check();
    ClosedFormReport r;
    r.params = params;
    r.costs = costs;
    r.delta = delta_baoii(params.m1, params.p);
    r.cycle_time = T_closed(params.m1, params.m2, params.p);
    stationary_pi_printed(params, r.pi_o, r.pi_phi);
    const double mass = r.pi_o + r.pi_phi;
    if (mass > 0.0 && std::isfinite(mass)) {
        r.conditioned_defined = true;
        r.p_o = r.pi_o / mass;
        r.p_phi = 1.0 - r.p_o;
    }
    r.tau = tau_closed_forms(params);
    r.cost_rate = cost_K(params.m1, params.p, costs);
    r.total = total_cost(params.m1, params.p, costs);
    return r;
}

std::string to_key_value_text(const ClosedFormReport& r) {
    std::ostringstream out;
    const auto put = [&](const char* key, double v) {
        out << key << " = " << format_double(v) << "\n";
    };
    put("d", r.params.d);
    put("m1", r.params.m1);
    put("m2", r.params.m2);
    put("p", r.params.p);
    put("k_m", r.costs.k_m);
    put("k_lambda", r.costs.k_lambda);
    put("delta_baoii", r.delta);
    put("cycle_time", r.cycle_time);
    put("pi_O", r.pi_o);
    put("pi_Phi", r.pi_phi);
    if (r.conditioned_defined) {
        put("P_O", r.p_o);
        put("P_Phi", r.p_phi);
    } else {
        out << "P_O = undefined\nP_Phi = undefined\n";
    }
    put("tau_A", r.tau.a);
    put("tau_B", r.tau.b);
    put("tau_Gamma", r.tau.gamma);
    put("tau_E", r.tau.e);
    put("tau_F", r.tau.f);
    put("tau_Psi", r.tau.psi);
    put("tau_Theta", r.tau.theta);
    put("K", r.cost_rate);
    put("C", r.total);
    return out.str();
}

std::string closed_form_csv_header() {
    return "d,m1,m2,p,k_m,k_lambda,delta_baoii,cycle_time,pi_O,pi_Phi,P_O,P_Phi,"
           "tau_A,tau_B,tau_Gamma,tau_E,tau_F,tau_Psi,tau_Theta,K,C";
}

std::string closed_form_csv_row(const ClosedFormReport& r) {
    std::vector<std::string> cells;
    const auto add = [&](double v) { cells.push_back(format_double(v)); };
    add(r.params.d);
    add(r.params.m1);
    add(r.params.m2);
    add(r.params.p);
    add(r.costs.k_m);
    add(r.costs.k_lambda);
    add(r.delta);
    add(r.cycle_time);
    add(r.pi_o);
    add(r.pi_phi);
    if (r.conditioned_defined) {
        add(r.p_o);
        add(r.p_phi);
    } else {
        cells.emplace_back("");
        cells.emplace_back("");
    }
    add(r.tau.a);
    add(r.tau.b);
    add(r.tau.gamma);
    add(r.tau.e);
    add(r.tau.f);
    add(r.tau.psi);
    add(r.tau.theta);
    add(r.cost_rate);
    add(r.total);
    return csv_row(cells);
}

} // namespace baoii
