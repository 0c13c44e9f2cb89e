#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "sitdyn/params.hpp"

namespace sitdyn {

struct OdeState {
    double E = 0.0;
    double F = 0.0;
    double M = 0.0;
};

struct SitOdeState {
    double E = 0.0;
    double F = 0.0;
    double M = 0.0;
    double Ms = 0.0;
};

enum class EquilibriumKind { Extinction, E0Critical, E1Low, E2High };

enum class Stability { LocallyAsymptoticallyStable, Unstable, Degenerate };

struct Equilibrium {
    OdeState state;
    EquilibriumKind kind = EquilibriumKind::Extinction;
    Stability stability = Stability::LocallyAsymptoticallyStable;
};

const char* to_string(EquilibriumKind k);
const char* to_string(Stability s);

// Right-hand side of the wild-population model with scalar capacity K.
OdeState life_cycle_rhs(const OdeState& s, const BioParams& p, double K);

// Right-hand side of the sterile-release extension; u is the release rate.
SitOdeState sit_rhs(const SitOdeState& s, const BioParams& p, double K, double u);

// Interior steady state with aquatic density E: other components follow from
// the linear balance of their equations.
OdeState interior_state(double E, const BioParams& p);

// All nonnegative steady states with stability tags, ordered by E.
std::vector<Equilibrium> equilibria(const BioParams& p, double K);

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat4 = std::array<std::array<double, 4>, 4>;

Mat3 jacobian_at(const OdeState& s, const BioParams& p, double K);

// Jacobian of the sterile-release system (u held fixed).
Mat4 sit_jacobian_at(const SitOdeState& s, const BioParams& p, double K);

// Routh coefficients (Q1, Q2, Q3) of the characteristic polynomial at an
// interior equilibrium with aquatic density E in (0, K).
std::array<double, 3> routh_coefficients(double E, const BioParams& p, double K);

Stability classify_stability(const Equilibrium& eq, const BioParams& p, double K);

// Roots of the monic cubic x^3 + a2 x^2 + a1 x + a0.
std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0);

std::array<std::complex<double>, 3> eigenvalues(const Mat3& m);

// Linear Lyapunov functional of the wild model; requires R < 1.
double lyapunov_V_ode(const OdeState& s, const BioParams& p);

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<SitOdeState> states;
};

// Fixed-step RK4 over [0, T] sampled every dt. A step whose result leaves the
// nonnegative orthant (or is non-finite) is retried with a halved substep,
// up to 40 halvings; exhaustion throws SimulationError.
OdeTrajectory integrate(const std::function<SitOdeState(const SitOdeState&)>& rhs,
                        const SitOdeState& s0, double dt, double T);

// Convenience wrapper for the wild model (Ms stays 0).
OdeTrajectory integrate_life_cycle(const BioParams& p, double K, const OdeState& s0,
                                   double dt, double T);

// Sterile-release model with constant release rate u.
OdeTrajectory integrate_sit(const BioParams& p, double K, const SitOdeState& s0,
                            double u, double dt, double T);

}  // namespace sitdyn
