#pragma once

#include <vector>

#include "sitdyn/ode.hpp"
#include "sitdyn/params.hpp"

namespace sitdyn {

// Precomputed per-run context for evaluating the release feedback; kappa and
// psi depend only on parameters, never on state.
struct ControlEvalContext {
    BioParams p;
    ControlParams c;
    double kappa = 0.0;  // 1/eta
    double psi = 0.0;

    static ControlEvalContext make(const BioParams& p, const ControlParams& c);
};

// Backstepping release-rate feedback. Nonnegative whenever delta_s >= delta_M;
// when delta_s < delta_M the raw value may dip negative and is clamped at 0
// (clamping is reported through the clamped flag of feedback_u_raw).
double feedback_u(double F, double M, double Ms, const ControlEvalContext& ctx);

struct FeedbackValue {
    double u = 0.0;
    bool clamped = false;
};
FeedbackValue feedback_u_raw(double F, double M, double Ms, const ControlEvalContext& ctx);

// True iff 0 <= u_val <= C_u * (1 + E + F + M + Ms).
bool growth_bound_check(double u_val, double E, double F, double M, double Ms, double C_u);

struct StatePair {
    SitOdeState a;
    SitOdeState b;
};

// Worst observed ratio |u(a)-u(b)| / (|Ea-Eb| + |Fa-Fb| + (1+Fa+Fb)(|Ma-Mb|+|Msa-Msb|))
// over the sample; identical pairs contribute 0.
double local_lipschitz_probe(const std::vector<StatePair>& pairs, const ControlEvalContext& ctx);

}  // namespace sitdyn
