#include "sitdyn/control.hpp"

#include <algorithm>
#include <cmath>

namespace sitdyn {

ControlEvalContext ControlEvalContext::make(const BioParams& p, const ControlParams& c) {
    p.validate();
    c.validate();
    ControlEvalContext ctx;
    ctx.p = p;
    ctx.c = c;
    ctx.kappa = 1.0 / p.eta;
    ctx.psi = control_gain_psi(p, c);
    return ctx;
}

FeedbackValue feedback_u_raw(double F, double M, double Ms, const ControlEvalContext& ctx) {
    const double theta = ctx.c.theta;
    const double gamma = ctx.p.gamma;
    const double mix = theta * M + Ms;
    const double den_shared = 3.0 * theta * M + Ms;

    double first = 0.0;
    const double den1 = ctx.c.alpha * (M + gamma * Ms + ctx.kappa) *
                        (ctx.kappa + (1.0 + gamma * theta) * M) * den_shared;
    if (den1 > 0.0) first = F * ctx.psi * M * mix * mix / den1;

    double second = 0.0;
    if (den_shared > 0.0)
        second = theta * (ctx.p.delta_s - ctx.p.delta_M) * M * (theta * M + 3.0 * Ms) / den_shared;

    const double u = first + second;
    if (u < 0.0) return {0.0, true};
    return {u, false};
}

double feedback_u(double F, double M, double Ms, const ControlEvalContext& ctx) {
    return feedback_u_raw(F, M, Ms, ctx).u;
}

bool growth_bound_check(double u_val, double E, double F, double M, double Ms, double C_u) {
    return u_val >= 0.0 && u_val <= C_u * (1.0 + E + F + M + Ms);
}

double local_lipschitz_probe(const std::vector<StatePair>& pairs, const ControlEvalContext& ctx) {
    double worst = 0.0;
    for (const auto& [a, b] : pairs) {
        const double du = std::abs(feedback_u(a.F, a.M, a.Ms, ctx) - feedback_u(b.F, b.M, b.Ms, ctx));
        const double denom = std::abs(a.E - b.E) + std::abs(a.F - b.F) +
                             (1.0 + a.F + b.F) * (std::abs(a.M - b.M) + std::abs(a.Ms - b.Ms));
        if (denom == 0.0) continue;
        worst = std::max(worst, du / denom);
    }
    return worst;
}

}  // namespace sitdyn
