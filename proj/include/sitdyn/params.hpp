#pragma once

#include <utility>

namespace sitdyn {

// Biological and diffusion rate constants. Units: rates in 1/day, eta in km^2,
// diffusion coefficients in km^2/day; nu and gamma dimensionless.
// Defaults are the reference parameter set used by the bundled presets.
struct BioParams {
    double beta_E = 8.0;    // oviposition rate
    double nu_E = 0.05;     // hatching rate
    double delta_E = 0.03;  // aquatic-phase death rate
    double delta_F = 0.04;  // adult female death rate
    double delta_M = 0.1;   // wild male death rate
    double delta_s = 0.12;  // sterile male death rate
    double nu = 0.49;       // emergence probability, in (0,1)
    double eta = 0.7;       // mating search efficiency
    double gamma = 1.0;     // female preference for sterile males
    double d1 = 0.1;        // female diffusion
    double d2 = 0.1;        // wild male diffusion
    double d3 = 0.05;       // sterile male diffusion

    // Throws std::invalid_argument on any violated range.
    void validate() const;

    bool operator==(const BioParams&) const = default;
};

// Feedback-law tuning: target sterile-to-wild ratio and penalty weight.
struct ControlParams {
    double theta = 75.0;
    double alpha = 0.25;

    void validate() const;

    bool operator==(const ControlParams&) const = default;
};

// Advisory report on the stabilization hypotheses. Violations are expected
// for aggressive tunings and are surfaced as warnings, never as errors.
struct ConditionReport {
    double R_theta = 0.0;
    bool r_theta_ok = false;   // R_theta < 1
    double sigma = 0.0;        // 1 - 3*alpha*theta*(1-nu)*nu_E/(nu*nu_E+delta_E)
    double sigma_half = 0.0;   // variant with an extra factor 2 in the denominator
    bool sigma_ok = false;     // sigma > 0
    bool deltas_ok = false;    // delta_s >= delta_M
};

// Every derived scalar in one bundle; entries whose precondition fails
// (e.g. c0 when R >= 1) are NaN.
struct DerivedRates {
    double R = 0.0;
    double r_minus = 0.0;
    double r_plus = 0.0;
    double R_theta = 0.0;
    double kappa = 0.0;
    double psi = 0.0;
    double sigma = 0.0;
    double c0 = 0.0;
    double c_theta = 0.0;
};

double basic_offspring_number(const BioParams& p);

// Persistence thresholds for the scalar-capacity model; r_minus * r_plus = 1.
std::pair<double, double> threshold_rates(const BioParams& p, double K);

double scaled_offspring(const BioParams& p, const ControlParams& c);

// Gain of the feedback law; requires scaled_offspring(p, c) < 1.
double control_gain_psi(const BioParams& p, const ControlParams& c);

ConditionReport check_stabilization_conditions(const BioParams& p, const ControlParams& c);

// Exponential decay rate of the uncontrolled Lyapunov functional; requires R < 1.
double ode_decay_rate_c0(const BioParams& p);

// Decay rate of the ratio-locked reduced system; requires R_theta < 1.
double theta_decay_rate(const BioParams& p, const ControlParams& c);

DerivedRates derived_rates(const BioParams& p, const ControlParams& c, double K);

}  // namespace sitdyn
