#include "sitdyn/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sitdyn {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

void BioParams::validate() const {
    require(std::isfinite(beta_E) && beta_E > 0, "beta_E must be > 0");
    require(std::isfinite(nu_E) && nu_E > 0, "nu_E must be > 0");
    require(std::isfinite(delta_E) && delta_E > 0, "delta_E must be > 0");
    require(std::isfinite(delta_F) && delta_F > 0, "delta_F must be > 0");
    require(std::isfinite(delta_M) && delta_M > 0, "delta_M must be > 0");
    require(std::isfinite(delta_s) && delta_s > 0, "delta_s must be > 0");
    require(std::isfinite(nu) && nu > 0 && nu < 1, "nu must be in (0,1)");
    require(std::isfinite(eta) && eta > 0, "eta must be > 0");
    require(std::isfinite(gamma) && gamma > 0, "gamma must be > 0");
    require(std::isfinite(d1) && d1 >= 0, "d1 must be >= 0");
    require(std::isfinite(d2) && d2 >= 0, "d2 must be >= 0");
    require(std::isfinite(d3) && d3 >= 0, "d3 must be >= 0");
}

void ControlParams::validate() const {
    require(std::isfinite(theta) && theta >= 0, "theta must be >= 0");
    require(std::isfinite(alpha) && alpha > 0, "alpha must be > 0");
}

double basic_offspring_number(const BioParams& p) {
    return p.beta_E * p.nu * p.nu_E / (p.delta_F * (p.nu_E + p.delta_E));
}

std::pair<double, double> threshold_rates(const BioParams& p, double K) {
    require(std::isfinite(K) && K > 0, "carrying capacity K must be > 0");
    const double q = p.eta * K * (1.0 - p.nu) * p.nu_E / p.delta_M;
    const double root = std::sqrt(1.0 + q);
    const double r_plus = 1.0 + (2.0 / q) * (1.0 + root);
    // Rationalized form of 1 + (2/q)(1 - sqrt(1+q)); avoids the cancellation
    // that would wreck the r_minus*r_plus = 1 identity for small q.
    const double r_minus = 1.0 - 2.0 / (1.0 + root);
    return {r_minus, r_plus};
}

double scaled_offspring(const BioParams& p, const ControlParams& c) {
    return basic_offspring_number(p) / (1.0 + p.gamma * c.theta);
}

double control_gain_psi(const BioParams& p, const ControlParams& c) {
    const double R_theta = scaled_offspring(p, c);
    require(R_theta < 1.0, "control gain requires scaled offspring number < 1");
    return p.gamma * p.beta_E * (1.0 + R_theta * (1.0 + c.theta * p.gamma)) / (1.0 - R_theta);
}

ConditionReport check_stabilization_conditions(const BioParams& p, const ControlParams& c) {
    ConditionReport rep;
    rep.R_theta = scaled_offspring(p, c);
    rep.r_theta_ok = rep.R_theta < 1.0;
    const double excess = 3.0 * c.alpha * c.theta * (1.0 - p.nu) * p.nu_E / (p.nu * p.nu_E + p.delta_E);
    rep.sigma = 1.0 - excess;
    rep.sigma_half = 1.0 - 0.5 * excess;
    rep.sigma_ok = rep.sigma > 0.0;
    rep.deltas_ok = p.delta_s >= p.delta_M;
    return rep;
}

double ode_decay_rate_c0(const BioParams& p) {
    const double R = basic_offspring_number(p);
    require(R < 1.0, "decay rate c0 requires R < 1");
    const double t1 = (p.nu * p.nu_E + p.delta_E) * (1.0 - R) / (1.0 + R);
    const double t2 = p.delta_F * (1.0 - R) / 2.0;
    return std::min({t1, t2, p.delta_M});
}

double theta_decay_rate(const BioParams& p, const ControlParams& c) {
    const double R_theta = scaled_offspring(p, c);
    require(R_theta < 1.0, "theta decay rate requires scaled offspring number < 1");
    const double tg = c.theta * p.gamma;
    const double t1 = (p.nu * p.nu_E + p.delta_E) * (1.0 - R_theta) / (1.0 + (1.0 + tg) * R_theta);
    const double t2 = p.delta_F * (1.0 + tg) * (1.0 - R_theta) / (2.0 + tg);
    return std::min({t1, t2, p.delta_M});
}

DerivedRates derived_rates(const BioParams& p, const ControlParams& c, double K) {
    DerivedRates d;
    d.R = basic_offspring_number(p);
    const auto [rm, rp] = threshold_rates(p, K);
    d.r_minus = rm;
    d.r_plus = rp;
    d.R_theta = scaled_offspring(p, c);
    d.kappa = 1.0 / p.eta;
    d.psi = d.R_theta < 1.0 ? control_gain_psi(p, c) : quiet_nan();
    d.sigma = check_stabilization_conditions(p, c).sigma;
    d.c0 = d.R < 1.0 ? ode_decay_rate_c0(p) : quiet_nan();
    d.c_theta = d.R_theta < 1.0 ? theta_decay_rate(p, c) : quiet_nan();
    return d;
}

}  // namespace sitdyn
