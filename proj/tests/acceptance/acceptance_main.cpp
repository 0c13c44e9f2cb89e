// Acceptance gate: each criterion prints one [PASS]/[FAIL] line with the
// measured quantities; the exit code is 0 only if every requested criterion
// passes. Criterion numbers may be given as arguments to run a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sitdyn/config.hpp"
#include "sitdyn/control.hpp"
#include "sitdyn/diagnostics.hpp"
#include "sitdyn/error.hpp"
#include "sitdyn/grid.hpp"
#include "sitdyn/ode.hpp"
#include "sitdyn/params.hpp"
#include "sitdyn/pde.hpp"

using namespace sitdyn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, const char* format = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

bool within(double measured, double target, double rel) {
    return std::abs(measured - target) <= rel * std::abs(target);
}

// --- 1. carrying-capacity mass -------------------------------------------

Outcome criterion_1() {
    const GridSpec g = GridSpec::regular(50, 50, 5.0, 5.0);
    const Field K = carrying_capacity_field(g, KFieldParams{});
    const double mass = l1_mass(K, g);
    const double target = 1.33e6;
    return {within(mass, target, 0.10),
            "L1(K) = " + fmt(mass) + ", target " + fmt(target) + " +/-10%"};
}

// --- 2. initial masses -----------------------------------------------------

Outcome criterion_2() {
    const GridSpec g = GridSpec::regular(50, 50, 5.0, 5.0);
    const Field K = carrying_capacity_field(g, KFieldParams{});
    const InitialFields init = equilibrium_initial_condition(BioParams{}, K);
    const double mE = l1_mass(init.E, g);
    const double mM = l1_mass(init.M, g);
    const double mF = l1_mass(init.F, g);
    const bool ok = within(mE, 1.30e6, 0.05) && within(mM, 3.3e5, 0.05) &&
                    within(mF, 8.03e5, 0.05);
    return {ok, "masses (E, M, F) = (" + fmt(mE) + ", " + fmt(mM) + ", " + fmt(mF) +
                    "), targets (1.30e6, 3.3e5, 8.03e5) +/-5%"};
}

// --- 3. suppression time and cost targets ----------------------------------

struct TableRow {
    double time = 0.0;
    double cost = 0.0;
    bool converged = false;
};

TableRow table_row(double d3, double alpha) {
    SimConfig cfg = preset("paper-global");
    cfg.snapshot_times.clear();
    apply_set(cfg, "d3=" + fmt(d3, "%.17g"));
    apply_set(cfg, "alpha=" + fmt(alpha, "%.17g"));
    const RunReport rep = run(cfg);
    TableRow row;
    row.converged = rep.convergence_time.has_value();
    row.time = row.converged ? *rep.convergence_time : -1.0;
    row.cost = rep.control_cost;
    return row;
}

Outcome criterion_3() {
    const TableRow a = table_row(0.05, 0.25);   // reference tuning
    const TableRow b = table_row(0.05, 0.025);  // cheaper penalty
    const TableRow c = table_row(0.0, 0.25);    // immobile sterile males

    bool ok = a.converged && b.converged && c.converged;
    std::ostringstream msg;
    msg << "(d3, alpha) -> (days, cost): (0.05, 0.25) -> (" << fmt(a.time) << ", " << fmt(a.cost)
        << ") vs (357, 1.68e8); (0.05, 0.025) -> (" << fmt(b.time) << ", " << fmt(b.cost)
        << ") vs (167, 9.4e8); (0, 0.25) -> (" << fmt(c.time) << ", " << fmt(c.cost)
        << ") vs (355, 1.62e8)";
    if (ok) {
        ok = within(a.time, 357.0, 0.15) && within(a.cost, 1.68e8, 0.20) &&
             within(b.time, 167.0, 0.15) && within(b.cost, 9.4e8, 0.20) &&
             within(c.time, 355.0, 0.15) && within(c.cost, 1.62e8, 0.20) &&
             b.time < a.time && b.cost > a.cost;
    }
    return {ok, msg.str()};
}

// --- 4. equilibrium algebra ------------------------------------------------

double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> unif(std::log(lo), std::log(hi));
    return std::exp(unif(rng));
}

Outcome criterion_4() {
    std::mt19937 rng(20240915);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    int checked = 0, residual_bad = 0, count_bad = 0, identity_bad = 0, root_bad = 0;

    while (checked < 1000) {
        BioParams p;
        p.beta_E = log_uniform(rng, 0.05, 20.0);
        p.nu_E = log_uniform(rng, 0.005, 0.5);
        p.delta_E = log_uniform(rng, 0.005, 0.5);
        p.delta_F = log_uniform(rng, 0.005, 0.5);
        p.delta_M = log_uniform(rng, 0.005, 0.5);
        p.nu = 0.05 + 0.9 * unif01(rng);
        p.eta = log_uniform(rng, 0.01, 10.0);
        const double K = log_uniform(rng, 10.0, 1e4);

        const double R = basic_offspring_number(p);
        const double m = (1.0 - p.nu) * p.nu_E / p.delta_M;
        auto phi = [&](double E) {
            return R * (1.0 - E / K) * p.eta * m * E / (1.0 + p.eta * m * E) - 1.0;
        };

        // Independent count oracle: the response phi is negative at both ends
        // of (0, K); interior roots exist iff it peaks above zero.
        int expect = 0;
        if (R > 1.0) {
            const double vertex = K * (R - 1.0) / (2.0 * R);
            const double peak = phi(vertex);
            if (std::abs(peak) < 1e-9) continue;  // knife-edge draw, resample
            expect = peak > 0.0 ? 2 : 0;
        }
        ++checked;

        const auto eqs = equilibria(p, K);
        const int interior = int(eqs.size()) - 1;
        if (interior != expect) {
            ++count_bad;
            continue;
        }

        for (const auto& eq : eqs) {
            const auto d = life_cycle_rhs(eq.state, p, K);
            const double resid = std::max({std::abs(d.E), std::abs(d.F), std::abs(d.M)});
            const double scale =
                std::max({1.0, eq.state.E, eq.state.F, eq.state.M});
            if (resid > 1e-9 * scale) ++residual_bad;
        }

        const auto [rm, rp] = threshold_rates(p, K);
        if (std::abs(rm * rp - 1.0) > 1e-10) ++identity_bad;

        if (interior == 2) {
            const double E1 = eqs[1].state.E, E2 = eqs[2].state.E;
            const double product_target = p.delta_M * K / (p.eta * R * (1.0 - p.nu) * p.nu_E);
            if (std::abs(E1 * E2 / product_target - 1.0) > 1e-10) ++identity_bad;

            // Bisection against the (independent) response function.
            const double vertex = K * (R - 1.0) / (2.0 * R);
            auto bisect = [&](double lo, double hi) {
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (phi(mid) > 0.0 ? (phi(lo) > 0.0) : (phi(lo) <= 0.0))
                        lo = mid;
                    else
                        hi = mid;
                }
                return 0.5 * (lo + hi);
            };
            const double b1 = bisect(K * 1e-300, vertex);
            const double b2 = bisect(vertex, K * (1.0 - 1e-16));
            if (std::abs(b1 - E1) > 1e-6 * std::max(1.0, E1)) ++root_bad;
            if (std::abs(b2 - E2) > 1e-6 * std::max(1.0, E2)) ++root_bad;
        }
    }

    const bool ok = residual_bad == 0 && count_bad == 0 && identity_bad == 0 && root_bad == 0;
    return {ok, "1000 draws: " + std::to_string(count_bad) + " count mismatches, " +
                    std::to_string(residual_bad) + " residuals > 1e-9*scale, " +
                    std::to_string(identity_bad) + " identity violations > 1e-10, " +
                    std::to_string(root_bad) + " bisection mismatches"};
}

// --- 5. ODE Lyapunov decay --------------------------------------------------

Outcome criterion_5() {
    BioParams p;
    p.beta_E = 0.1;
    const double R = basic_offspring_number(p);
    const double c0 = ode_decay_rate_c0(p);
    if (!within(R, 0.765625, 1e-12) || !within(c0, 0.0046875, 1e-12))
        return {false, "fixture mismatch: R = " + fmt(R, "%.17g") + ", c0 = " + fmt(c0, "%.17g")};

    const double K = 500.0, dt = 0.1, T = 30.0;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    const double shrink = std::exp(-c0 * dt) * (1.0 + 1e-6);

    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const OdeState s0{unif01(rng) * 0.98 * K, unif01(rng) * 1000.0, unif01(rng) * 1000.0};
        const auto traj = integrate_life_cycle(p, K, s0, dt, T);
        double prev = lyapunov_V_ode(s0, p);
        for (size_t k = 1; k < traj.states.size(); ++k) {
            const auto& s = traj.states[k];
            const double v = lyapunov_V_ode({s.E, s.F, s.M}, p);
            if (prev > 0.0) {
                const double ratio = v / (prev * shrink);
                worst = std::max(worst, ratio);
                if (v > prev * shrink) ++violations;
            }
            prev = v;
        }
    }
    return {violations == 0,
            "100 trajectories, 300 steps each: " + std::to_string(violations) +
                " decay violations, worst V ratio vs bound " + fmt(worst, "%.9g")};
}

// --- 6. closed-loop Lyapunov monotonicity -----------------------------------

Outcome criterion_6() {
    SimConfig cfg = preset("paper-global");
    cfg.snapshot_times.clear();
    apply_set(cfg, "d2=0.1");
    apply_set(cfg, "d3=0.1");
    const RunReport rep = run(cfg);
    const auto [k1, k2] = sandwich_constants(cfg.params, *cfg.ctrl);

    int mono_bad = 0, sandwich_bad = 0;
    for (size_t k = 0; k < rep.series.size(); ++k) {
        const auto& tp = rep.series[k];
        if (k > 0 && tp.lyapunov_U > rep.series[k - 1].lyapunov_U) ++mono_bad;
        const double mass = tp.mass_E + tp.mass_F + tp.mass_M + tp.mass_Ms;
        if (!(tp.lyapunov_U >= k1 * mass * (1.0 - 1e-9) &&
              tp.lyapunov_U <= k2 * mass * (1.0 + 1e-9)))
            ++sandwich_bad;
    }
    const bool ok = mono_bad == 0 && sandwich_bad == 0 && rep.series.size() >= 10;
    return {ok, std::to_string(rep.series.size()) + " samples: " + std::to_string(mono_bad) +
                    " monotonicity violations, " + std::to_string(sandwich_bad) +
                    " sandwich violations (k1' = " + fmt(k1) + ", k2' = " + fmt(k2) + ")"};
}

// --- 7. conservation and positivity -----------------------------------------

Outcome criterion_7() {
    const GridSpec g = GridSpec::regular(50, 50, 5.0, 5.0);
    const Field K = carrying_capacity_field(g, KFieldParams{});

    // Transport-only configuration: all reaction rates off, diffusion as usual.
    BioParams quiet;
    quiet.beta_E = quiet.nu_E = quiet.delta_E = 0.0;
    quiet.delta_F = quiet.delta_M = quiet.delta_s = 0.0;

    const InitialFields init = equilibrium_initial_condition(BioParams{}, K);
    PdeState s{init.E, init.F, init.M, Field(g, 100.0), 0.0};
    const double m0[4] = {l1_mass(s.E, g), l1_mass(s.F, g), l1_mass(s.M, g), l1_mass(s.Ms, g)};

    const double dt = cfl_dt(quiet, g, reaction_bound(s, quiet, K));
    for (int k = 0; k < 1000; ++k) s = step(s, quiet, K, nullptr, g, dt);

    const double m1[4] = {l1_mass(s.E, g), l1_mass(s.F, g), l1_mass(s.M, g), l1_mass(s.Ms, g)};
    double drift = 0.0;
    for (int i = 0; i < 4; ++i) drift = std::max(drift, std::abs(m1[i] - m0[i]) / m0[i]);

    // Positivity probe on a controlled run: every snapshot entry nonnegative
    // (the stepper aborts outright if any update would go negative).
    SimConfig cfg = preset("paper-global");
    cfg.snapshot_times = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    apply_set(cfg, "run.t_max=5");
    double min_entry = 0.0;
    for (const auto& snap : run(cfg).snapshots)
        for (double v : snap.data.v) min_entry = std::min(min_entry, v);

    const bool ok = drift <= 1e-10 && min_entry >= 0.0;
    return {ok, "transport-only drift over 1000 steps = " + fmt(drift, "%.3e") +
                    " (limit 1e-10); min field entry in controlled run = " + fmt(min_entry)};
}

// --- 8. order preservation under sterile seeding -----------------------------

Outcome criterion_8() {
    const double K = 500.0, dt = 0.1, T = 300.0;
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    int violations = 0;
    double worst_gap = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
        SitOdeState seeded{unif01(rng) * 0.98 * K, unif01(rng) * 1000.0, unif01(rng) * 1000.0,
                           1e-3 + unif01(rng) * 1000.0};
        SitOdeState bare = seeded;
        bare.Ms = 0.0;
        const auto a = integrate_sit(BioParams{}, K, seeded, 0.0, dt, T);
        const auto b = integrate_sit(BioParams{}, K, bare, 0.0, dt, T);
        for (size_t k = 0; k < a.states.size(); ++k) {
            const double gap = std::max({a.states[k].E - b.states[k].E,
                                         a.states[k].F - b.states[k].F,
                                         a.states[k].M - b.states[k].M});
            worst_gap = std::max(worst_gap, gap);
            if (gap > 1e-9) ++violations;
        }
    }
    return {violations == 0, "100 pairs, 3000 samples each: " + std::to_string(violations) +
                                 " order violations, worst excess " + fmt(worst_gap, "%.3e")};
}

// --- 9. feedback-law point check ---------------------------------------------

Outcome criterion_9() {
    const auto ctx = ControlEvalContext::make(BioParams{}, ControlParams{75.0, 0.25});
    const double u = feedback_u(100.0, 10.0, 750.0, ctx);
    const double reference = 13292.424220900934;
    const bool point_ok = std::abs(u - reference) <= 1e-9 * reference;

    bool zero_ok = true;
    for (double F : {0.0, 1.0, 100.0, 1e6})
        for (double Ms : {0.0, 1.0, 750.0, 1e6})
            zero_ok = zero_ok && feedback_u(F, 0.0, Ms, ctx) == 0.0;

    return {point_ok && zero_ok, "u(100, 10, 750) = " + fmt(u, "%.17g") + " vs " +
                                     fmt(reference, "%.17g") + "; u(., M=0, .) == 0: " +
                                     (zero_ok ? "yes" : "no")};
}

// --- 10. local suppression ----------------------------------------------------

Outcome criterion_10() {
    SimConfig cfg = preset("paper-local");
    apply_set(cfg, "alpha=0.0001");
    apply_set(cfg, "d3=0.01");
    apply_set(cfg, "run.t_max=200");
    cfg.snapshot_times = {0.0, 200.0};
    cfg.stop_on_convergence = false;  // measure at the full horizon
    const RunReport rep = run(cfg);

    const Field mask = mask_field(cfg.grid, cfg.mask);
    auto max_inside = [&](const Field& f) {
        double m = 0.0;
        for (size_t k = 0; k < f.v.size(); ++k)
            if (mask.v[k] != 0.0) m = std::max(m, f.v[k]);
        return m;
    };

    double e_start = -1.0, e_end = -1.0;
    for (const auto& snap : rep.snapshots) {
        if (snap.field != "E") continue;
        if (snap.t == 0.0) e_start = max_inside(snap.data);
        else e_end = max_inside(snap.data);
    }
    if (e_start <= 0.0 || e_end < 0.0) return {false, "snapshots missing"};
    const double ratio = e_end / e_start;
    return {ratio < 0.01, "max E over the control square: " + fmt(e_start) + " -> " + fmt(e_end) +
                              " after 200 days (ratio " + fmt(ratio, "%.3e") + ", limit 1e-2)"};
}

}  // namespace

int main(int argc, char** argv) {
    Outcome (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                               criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: %s [criterion numbers in 1..10]\n", argv[0]);
            return 2;
        }
        wanted.push_back(n);
    }
    if (wanted.empty())
        for (int n = 1; n <= 10; ++n) wanted.push_back(n);

    bool all_pass = true;
    for (int n : wanted) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[n - 1]();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", n,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
