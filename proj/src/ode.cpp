#include "sitdyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sitdyn/error.hpp"

namespace sitdyn {

namespace {

constexpr double kCriticalRelTol = 1e-9;
constexpr int kMaxHalvings = 40;

bool finite_nonneg(const SitOdeState& s) {
    return std::isfinite(s.E) && std::isfinite(s.F) && std::isfinite(s.M) &&
           std::isfinite(s.Ms) && s.E >= 0 && s.F >= 0 && s.M >= 0 && s.Ms >= 0;
}

SitOdeState axpy(const SitOdeState& s, double h, const SitOdeState& d) {
    return {s.E + h * d.E, s.F + h * d.F, s.M + h * d.M, s.Ms + h * d.Ms};
}

SitOdeState rk4_step(const std::function<SitOdeState(const SitOdeState&)>& rhs,
                     const SitOdeState& s, double h) {
    const SitOdeState k1 = rhs(s);
    const SitOdeState k2 = rhs(axpy(s, h / 2, k1));
    const SitOdeState k3 = rhs(axpy(s, h / 2, k2));
    const SitOdeState k4 = rhs(axpy(s, h, k3));
    return {s.E + h / 6 * (k1.E + 2 * k2.E + 2 * k3.E + k4.E),
            s.F + h / 6 * (k1.F + 2 * k2.F + 2 * k3.F + k4.F),
            s.M + h / 6 * (k1.M + 2 * k2.M + 2 * k3.M + k4.M),
            s.Ms + h / 6 * (k1.Ms + 2 * k2.Ms + 2 * k3.Ms + k4.Ms)};
}

}  // namespace

const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Extinction: return "extinction";
        case EquilibriumKind::E0Critical: return "critical";
        case EquilibriumKind::E1Low: return "low";
        case EquilibriumKind::E2High: return "high";
    }
    return "?";
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::LocallyAsymptoticallyStable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Degenerate: return "degenerate";
    }
    return "?";
}

OdeState life_cycle_rhs(const OdeState& s, const BioParams& p, double K) {
    const double mating = p.eta * s.M / (1.0 + p.eta * s.M);
    return {p.beta_E * s.F * (1.0 - s.E / K) * mating - (p.nu_E + p.delta_E) * s.E,
            p.nu * p.nu_E * s.E - p.delta_F * s.F,
            (1.0 - p.nu) * p.nu_E * s.E - p.delta_M * s.M};
}

SitOdeState sit_rhs(const SitOdeState& s, const BioParams& p, double K, double u) {
    const double mating = p.eta * s.M / (1.0 + p.eta * (s.M + p.gamma * s.Ms));
    return {p.beta_E * s.F * (1.0 - s.E / K) * mating - (p.nu_E + p.delta_E) * s.E,
            p.nu * p.nu_E * s.E - p.delta_F * s.F,
            (1.0 - p.nu) * p.nu_E * s.E - p.delta_M * s.M,
            u - p.delta_s * s.Ms};
}

OdeState interior_state(double E, const BioParams& p) {
    return {E, p.nu * p.nu_E * E / p.delta_F, (1.0 - p.nu) * p.nu_E * E / p.delta_M};
}

std::vector<Equilibrium> equilibria(const BioParams& p, double K) {
    if (!(std::isfinite(K) && K > 0)) throw std::invalid_argument("carrying capacity K must be > 0");
    const double R = basic_offspring_number(p);
    const auto [r_minus, r_plus] = threshold_rates(p, K);

    std::vector<Equilibrium> out;
    out.push_back({{0.0, 0.0, 0.0}, EquilibriumKind::Extinction, Stability::LocallyAsymptoticallyStable});

    if (std::abs(R - r_plus) <= kCriticalRelTol * r_plus) {
        const double E0 = K / 2.0 * (1.0 - 1.0 / R);
        out.push_back({interior_state(E0, p), EquilibriumKind::E0Critical, Stability::Unstable});
    } else if (R > r_plus) {
        const double disc = (R - r_minus) * (R - r_plus);
        const double root = std::sqrt(disc);
        const double E2 = K / (2.0 * R) * (R - 1.0 + root);
        // Rationalized small root: exactly (K/2R)(R-1-sqrt(disc)) but immune to
        // the cancellation that form suffers when disc approaches (R-1)^2.
        const double E1 = 2.0 * p.delta_M / (p.eta * (1.0 - p.nu) * p.nu_E * (R - 1.0 + root));
        out.push_back({interior_state(E1, p), EquilibriumKind::E1Low, Stability::Unstable});
        out.push_back({interior_state(E2, p), EquilibriumKind::E2High,
                       Stability::LocallyAsymptoticallyStable});
    }
    return out;
}

Mat3 jacobian_at(const OdeState& s, const BioParams& p, double K) {
    const double denom = 1.0 + p.eta * s.M;
    const double mating = p.eta * s.M / denom;
    const double logistic = 1.0 - s.E / K;
    return {{{-p.beta_E * s.F * mating / K - (p.nu_E + p.delta_E),
              p.beta_E * logistic * mating,
              p.beta_E * s.F * logistic * p.eta / (denom * denom)},
             {p.nu * p.nu_E, -p.delta_F, 0.0},
             {(1.0 - p.nu) * p.nu_E, 0.0, -p.delta_M}}};
}

Mat4 sit_jacobian_at(const SitOdeState& s, const BioParams& p, double K) {
    const double denom = 1.0 + p.eta * (s.M + p.gamma * s.Ms);
    const double mating = p.eta * s.M / denom;
    const double logistic = 1.0 - s.E / K;
    const double dmating_dM = p.eta * (1.0 + p.eta * p.gamma * s.Ms) / (denom * denom);
    const double dmating_dMs = -p.eta * s.M * p.eta * p.gamma / (denom * denom);
    return {{{-p.beta_E * s.F * mating / K - (p.nu_E + p.delta_E),
              p.beta_E * logistic * mating,
              p.beta_E * s.F * logistic * dmating_dM,
              p.beta_E * s.F * logistic * dmating_dMs},
             {p.nu * p.nu_E, -p.delta_F, 0.0, 0.0},
             {(1.0 - p.nu) * p.nu_E, 0.0, -p.delta_M, 0.0},
             {0.0, 0.0, 0.0, -p.delta_s}}};
}

std::array<double, 3> routh_coefficients(double E, const BioParams& p, double K) {
    if (!(E > 0 && E < K)) throw std::invalid_argument("Routh coefficients need 0 < E < K");
    const double R = basic_offspring_number(p);
    const double g = p.eta * R * (1.0 - p.nu) * p.nu_E;
    const double logistic = 1.0 - E / K;
    const double q1 = p.delta_M + p.delta_F + (p.nu_E + p.delta_E) / logistic;
    const double q2 = (p.nu_E + p.delta_E) *
                          (g * (p.delta_M * E + p.delta_F * E * E / K) - p.delta_M * p.delta_M) /
                          (g * E * logistic) +
                      p.delta_M * p.delta_F;
    const double q3 = (p.nu_E + p.delta_E) * p.delta_M * p.delta_F *
                      (g * E * E / K - p.delta_M) / (g * E * logistic);
    return {q1, q2, q3};
}

Stability classify_stability(const Equilibrium& eq, const BioParams& p, double K) {
    (void)p;
    (void)K;
    switch (eq.kind) {
        case EquilibriumKind::Extinction: return Stability::LocallyAsymptoticallyStable;
        case EquilibriumKind::E0Critical: return Stability::Unstable;
        case EquilibriumKind::E1Low: return Stability::Unstable;
        case EquilibriumKind::E2High: return Stability::LocallyAsymptoticallyStable;
    }
    return Stability::Degenerate;
}

std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0) {
    // Depressed form: x = y - a2/3, y^3 + p y + q = 0.
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double shift = -a2 / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::array<std::complex<double>, 3> roots;
    if (disc > 0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        roots[0] = shift + u + v;
        const double re = shift - (u + v) / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        roots[1] = {re, im};
        roots[2] = {re, -im};
    } else if (p == 0.0) {
        roots.fill(shift);
    } else {
        const double r = std::sqrt(-p / 3.0);
        const double arg = std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            roots[k] = shift + 2.0 * r * std::cos((phi - 2.0 * M_PI * k) / 3.0);
    }
    return roots;
}

std::array<std::complex<double>, 3> eigenvalues(const Mat3& m) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] +
                          m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                          m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return cubic_roots(-tr, minors, -det);
}

double lyapunov_V_ode(const OdeState& s, const BioParams& p) {
    const double R = basic_offspring_number(p);
    if (!(R < 1.0)) throw std::invalid_argument("Lyapunov V requires R < 1");
    return (1.0 + R) / (1.0 - R) * s.E + 2.0 * p.beta_E / (p.delta_F * (1.0 - R)) * s.F + s.M;
}

OdeTrajectory integrate(const std::function<SitOdeState(const SitOdeState&)>& rhs,
                        const SitOdeState& s0, double dt, double T) {
    if (!(dt > 0)) throw std::invalid_argument("integrate requires dt > 0");
    if (!(T >= 0)) throw std::invalid_argument("integrate requires T >= 0");

    OdeTrajectory traj;
    traj.t.push_back(0.0);
    traj.states.push_back(s0);

    SitOdeState s = s0;
    double t = 0.0;
    while (t < T - 1e-12 * std::max(1.0, T)) {
        const double macro = std::min(dt, T - t);
        double remaining = macro;
        double h = macro;
        int halvings = 0;
        while (remaining > 1e-15 * macro) {
            const double step = std::min(h, remaining);
            const SitOdeState next = rk4_step(rhs, s, step);
            if (finite_nonneg(next)) {
                s = next;
                remaining -= step;
            } else {
                if (++halvings > kMaxHalvings)
                    throw SimulationError("step size underflow: 40 halvings without an admissible step");
                h /= 2.0;
            }
        }
        t += macro;
        traj.t.push_back(t);
        traj.states.push_back(s);
    }
    return traj;
}

OdeTrajectory integrate_life_cycle(const BioParams& p, double K, const OdeState& s0,
                                   double dt, double T) {
    const SitOdeState start{s0.E, s0.F, s0.M, 0.0};
    return integrate([&p, K](const SitOdeState& s) { return sit_rhs(s, p, K, 0.0); }, start, dt, T);
}

OdeTrajectory integrate_sit(const BioParams& p, double K, const SitOdeState& s0,
                            double u, double dt, double T) {
    return integrate([&p, K, u](const SitOdeState& s) { return sit_rhs(s, p, K, u); }, s0, dt, T);
}

}  // namespace sitdyn
