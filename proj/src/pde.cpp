#include "sitdyn/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "sitdyn/diagnostics.hpp"
#include "sitdyn/error.hpp"

namespace sitdyn {

namespace {

constexpr double kConvergenceThreshold = 1.0;

struct Stepper {
    const BioParams& p;
    const GridSpec& g;
    const Field& K;
    const ControlSetup* ctrl;
    Field lapF, lapM, lapMs;

    Stepper(const BioParams& p_, const GridSpec& g_, const Field& K_, const ControlSetup* ctrl_)
        : p(p_), g(g_), K(K_), ctrl(ctrl_), lapF(g_.nx, g_.ny), lapM(g_.nx, g_.ny),
          lapMs(g_.nx, g_.ny) {}

    [[noreturn]] void fail(const char* field, int i, int j, double value, double t) const {
        std::ostringstream msg;
        msg << "field " << field << " became " << value << " at cell (" << i << "," << j
            << "), t=" << t << "; the time step violates positivity";
        throw SimulationError(msg.str());
    }

    void check(const char* field, int i, int j, double value, double t) const {
        if (!(value >= 0.0) || !std::isfinite(value)) fail(field, i, j, value, t);
    }

    // Advances s by dt into out and returns the total release rate of the
    // pre-step state (the left endpoint of the cost rectangle).
    double advance(const PdeState& s, double dt, PdeState& out) {
        if (p.d1 > 0) laplacian_into(s.F, lapF); else lapF.v.assign(lapF.v.size(), 0.0);
        if (p.d2 > 0) laplacian_into(s.M, lapM); else lapM.v.assign(lapM.v.size(), 0.0);
        if (p.d3 > 0) laplacian_into(s.Ms, lapMs); else lapMs.v.assign(lapMs.v.size(), 0.0);

        double release_sum = 0.0;
        const double loss_E = p.nu_E + p.delta_E;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const size_t k = size_t(j) * g.nx + i;
                const double E = s.E.v[k], F = s.F.v[k], M = s.M.v[k], Ms = s.Ms.v[k];
                const double mating = p.eta * M / (1.0 + p.eta * (M + p.gamma * Ms));
                const double births = p.beta_E * F * (1.0 - E / K.v[k]) * mating;

                double u = 0.0;
                if (ctrl && ctrl->mask.v[k] != 0.0)
                    u = feedback_u(F, M, Ms, ctrl->ctx) * ctrl->mask.v[k];
                release_sum += u;

                const double En = E + dt * (births - loss_E * E);
                const double Fn = F + dt * (p.d1 * lapF.v[k] + p.nu * p.nu_E * E - p.delta_F * F);
                const double Mn =
                    M + dt * (p.d2 * lapM.v[k] + (1.0 - p.nu) * p.nu_E * E - p.delta_M * M);
                const double Msn = Ms + dt * (p.d3 * lapMs.v[k] + u - p.delta_s * Ms);

                check("E", i, j, En, s.t);
                check("F", i, j, Fn, s.t);
                check("M", i, j, Mn, s.t);
                check("Ms", i, j, Msn, s.t);

                out.E.v[k] = En;
                out.F.v[k] = Fn;
                out.M.v[k] = Mn;
                out.Ms.v[k] = Msn;
            }
        }
        out.t = s.t + dt;
        return release_sum * g.cell_area();
    }

    void laplacian_into(const Field& f, Field& out) const {
        const double ix2 = 1.0 / (g.dx * g.dx);
        const double iy2 = 1.0 / (g.dy * g.dy);
        for (int j = 0; j < g.ny; ++j) {
            const int jm = j > 0 ? j - 1 : 0;
            const int jp = j < g.ny - 1 ? j + 1 : g.ny - 1;
            for (int i = 0; i < g.nx; ++i) {
                const int im = i > 0 ? i - 1 : 0;
                const int ip = i < g.nx - 1 ? i + 1 : g.nx - 1;
                const double c = f.at(i, j);
                out.at(i, j) = (f.at(ip, j) - 2.0 * c + f.at(im, j)) * ix2 +
                               (f.at(i, jp) - 2.0 * c + f.at(i, jm)) * iy2;
            }
        }
    }

    double instantaneous_release(const PdeState& s) const {
        if (!ctrl) return 0.0;
        double sum = 0.0;
        for (size_t k = 0; k < s.F.v.size(); ++k)
            if (ctrl->mask.v[k] != 0.0)
                sum += feedback_u(s.F.v[k], s.M.v[k], s.Ms.v[k], ctrl->ctx) * ctrl->mask.v[k];
        return sum * g.cell_area();
    }
};

}  // namespace

double reaction_bound(const PdeState& s, const BioParams& p, const Field& K) {
    double worst = 0.0;
    for (size_t k = 0; k < s.E.v.size(); ++k) {
        const double M = s.M.v[k], Ms = s.Ms.v[k];
        const double loss = p.nu_E + p.delta_E +
                            p.beta_E * s.F.v[k] * p.eta * M /
                                (K.v[k] * (1.0 + p.eta * (M + p.gamma * Ms)));
        worst = std::max(worst, loss);
    }
    return std::max({worst, p.delta_F, p.delta_M, p.delta_s});
}

double cfl_dt(const BioParams& p, const GridSpec& g, double reaction_bound, double safety) {
    const double d_max = std::max({p.d1, p.d2, p.d3});
    const double inf = std::numeric_limits<double>::infinity();
    const double diffusive =
        d_max > 0 ? 1.0 / (2.0 * d_max * (1.0 / (g.dx * g.dx) + 1.0 / (g.dy * g.dy))) : inf;
    const double reactive = reaction_bound > 0 ? 1.0 / reaction_bound : inf;
    return safety * std::min(diffusive, reactive);
}

Field mask_field(const GridSpec& g, const MaskSpec& m) {
    Field mask(g, 0.0);
    switch (m.kind) {
        case MaskKind::Off: break;
        case MaskKind::Whole: mask.v.assign(mask.v.size(), 1.0); break;
        case MaskKind::Square:
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    if (std::abs(g.x_center(i) - m.cx) <= m.rho &&
                        std::abs(g.y_center(j) - m.cy) <= m.rho)
                        mask.at(i, j) = 1.0;
            break;
    }
    return mask;
}

PdeState step(const PdeState& s, const BioParams& p, const Field& K,
              const ControlSetup* ctrl, const GridSpec& g, double dt) {
    Stepper stepper(p, g, K, ctrl);
    PdeState out{Field(g), Field(g), Field(g), Field(g), s.t};
    stepper.advance(s, dt, out);
    return out;
}

RunReport run(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.mode != "pde")
        throw ConfigError("run() drives pde configs; mode '" + cfg.mode + "' is handled elsewhere");

    const BioParams& p = cfg.params;
    const GridSpec& g = cfg.grid;
    const Field K = carrying_capacity_field(g, cfg.kfield);
    const double R = basic_offspring_number(p);

    PdeState s{Field(g), Field(g), Field(g), Field(g), 0.0};
    if (cfg.initial == "equilibrium") {
        if (!(R > 1.0))
            throw ConfigError("initial = equilibrium needs R > 1; use initial = capacity");
        InitialFields init = equilibrium_initial_condition(p, K);
        s.E = std::move(init.E);
        s.F = std::move(init.F);
        s.M = std::move(init.M);
    } else {  // capacity
        const double f_ratio = p.nu * p.nu_E / p.delta_F;
        const double m_ratio = (1.0 - p.nu) * p.nu_E / p.delta_M;
        s.E = K;
        s.F = Field(g);
        s.M = Field(g);
        for (size_t k = 0; k < K.v.size(); ++k) {
            s.F.v[k] = f_ratio * K.v[k];
            s.M.v[k] = m_ratio * K.v[k];
        }
    }

    std::optional<ControlSetup> ctrl_setup;
    RunReport report;
    if (cfg.ctrl) {
        report.conditions = check_stabilization_conditions(p, *cfg.ctrl);
        if (cfg.mask.kind != MaskKind::Off) {
            if (!report.conditions->r_theta_ok)
                throw ConfigError("feedback gain undefined: scaled offspring number >= 1 "
                                  "(raise theta)");
            ctrl_setup = ControlSetup{ControlEvalContext::make(p, *cfg.ctrl), mask_field(g, cfg.mask)};
        }
    }

    // Functional selection: the plain variant applies when the uncontrolled
    // model is subcritical, the theta-scaled one when only the controlled
    // ratio system is; otherwise the columns are NaN.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::optional<LyapunovWeights> weights_L;
    if (R < 1.0)
        weights_L = LyapunovWeights::plain(p);
    else if (cfg.ctrl && scaled_offspring(p, *cfg.ctrl) < 1.0)
        weights_L = LyapunovWeights::theta_scaled(p, *cfg.ctrl);
    const bool has_U = cfg.ctrl && scaled_offspring(p, *cfg.ctrl) < 1.0;

    Stepper stepper(p, g, K, ctrl_setup ? &*ctrl_setup : nullptr);
    PdeState next{Field(g), Field(g), Field(g), Field(g), 0.0};

    double cost = 0.0;
    std::vector<double> pending_snapshots = cfg.snapshot_times;
    std::sort(pending_snapshots.begin(), pending_snapshots.end());
    size_t next_snapshot = 0;

    auto emit_snapshots = [&](double t) {
        while (next_snapshot < pending_snapshots.size() &&
               pending_snapshots[next_snapshot] <= t + 1e-9) {
            const std::pair<const char*, const Field*> fields[] = {
                {"E", &s.E}, {"F", &s.F}, {"M", &s.M}, {"Ms", &s.Ms}};
            for (const auto& [name, field] : fields)
                report.snapshots.push_back({name, t, *field});
            ++next_snapshot;
        }
    };

    auto record = [&](double t) {
        TimePoint tp;
        tp.t = t;
        tp.mass_E = l1_mass(s.E, g);
        tp.mass_F = l1_mass(s.F, g);
        tp.mass_M = l1_mass(s.M, g);
        tp.mass_Ms = l1_mass(s.Ms, g);
        tp.lyapunov_U = has_U ? functional_U(s.E, s.F, s.M, s.Ms, g, p, *cfg.ctrl) : nan;
        tp.lyapunov_L = weights_L ? functional_L(s.E, s.F, s.M, g, *weights_L) : nan;
        tp.release_rate_total = stepper.instantaneous_release(s);
        tp.cumulative_cost = cost;
        tp.max_E = max_value(s.E);
        report.series.push_back(tp);
        if (!report.convergence_time && tp.max_E <= kConvergenceThreshold)
            report.convergence_time = t;
    };

    record(0.0);
    emit_snapshots(0.0);

    double t = 0.0;
    while (t < cfg.t_max - 1e-9 &&
           !(cfg.stop_on_convergence && report.convergence_time)) {
        const double interval = std::min(cfg.output_interval, cfg.t_max - t);
        const double dt_bound = cfl_dt(p, g, reaction_bound(s, p, K));
        const int n = std::max(1, int(std::ceil(interval / dt_bound - 1e-12)));
        const double h = interval / n;
        for (int k = 0; k < n; ++k) {
            const double release = stepper.advance(s, h, next);
            cost += h * release;
            std::swap(s, next);
        }
        t += interval;
        s.t = t;
        record(t);
        emit_snapshots(t);
    }

    report.control_cost = cost;

    // Fitted decay of U over the latter half of the series, transient trimmed.
    if (has_U && report.series.size() >= 6) {
        std::vector<double> ts, us;
        for (size_t k = report.series.size() / 2; k < report.series.size(); ++k) {
            if (!(report.series[k].lyapunov_U > 0)) { ts.clear(); break; }
            ts.push_back(report.series[k].t);
            us.push_back(report.series[k].lyapunov_U);
        }
        if (ts.size() >= 3) report.fitted_decay_U = fit_decay_rate(ts, us);
    }

    report.config_echo = write_config(cfg);
    return report;
}

}  // namespace sitdyn
