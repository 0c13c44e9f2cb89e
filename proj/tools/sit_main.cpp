// Command-line harness for the sitdyn library: equilibrium tables, ODE and
// PDE simulations, and parameter sweeps, all writing plain-text outputs.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sitdyn/config.hpp"
#include "sitdyn/control.hpp"
#include "sitdyn/diagnostics.hpp"
#include "sitdyn/error.hpp"
#include "sitdyn/ode.hpp"
#include "sitdyn/pde.hpp"

namespace fs = std::filesystem;
using namespace sitdyn;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string num_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out.flush()) throw ConfigError("short write to '" + path.string() + "'");
}

struct ConfigCliArgs {
    std::string preset_name;
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
};

void add_config_options(CLI::App* cmd, ConfigCliArgs& args, bool out_required) {
    auto* preset_opt = cmd->add_option("--preset", args.preset_name, "named scenario");
    auto* config_opt = cmd->add_option("--config", args.config_path, "config file path");
    preset_opt->excludes(config_opt);
    cmd->add_option("--set", args.sets, "override, key=value or section.key=value");
    auto* out = cmd->add_option("--out", args.out_dir, "output directory");
    if (out_required) out->required();
}

SimConfig build_config(const ConfigCliArgs& args, const std::string& default_preset) {
    SimConfig cfg;
    if (!args.config_path.empty())
        cfg = parse_config_file(args.config_path);
    else
        cfg = preset(args.preset_name.empty() ? default_preset : args.preset_name);
    apply_sets(cfg, args.sets);
    cfg.validate();
    return cfg;
}

std::string equilibria_table(const std::vector<Equilibrium>& eqs, const BioParams& p, double k,
                             bool with_routh) {
    std::ostringstream out;
    out << "kind              E             F             M             stability";
    if (with_routh) out << "                       Q1        Q2        Q3";
    out << "\n";
    for (const auto& eq : eqs) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-16s  %-12.6g  %-12.6g  %-12.6g  %-30s",
                      to_string(eq.kind), eq.state.E, eq.state.F, eq.state.M,
                      to_string(eq.stability));
        out << line;
        if (with_routh && eq.state.E > 0.0 && eq.state.E < k) {
            auto q = routh_coefficients(eq.state.E, p, k);
            std::snprintf(line, sizeof(line), "  %-8.4g  %-8.4g  %-8.4g", q[0], q[1], q[2]);
            out << line;
        }
        out << "\n";
    }
    return out.str();
}

std::string equilibria_csv(const std::vector<Equilibrium>& eqs, const BioParams& p, double k,
                           bool with_routh) {
    std::ostringstream out;
    out << "kind,E,F,M,stability";
    if (with_routh) out << ",Q1,Q2,Q3";
    out << "\n";
    for (const auto& eq : eqs) {
        out << to_string(eq.kind) << ',' << num(eq.state.E) << ',' << num(eq.state.F) << ','
            << num(eq.state.M) << ',' << to_string(eq.stability);
        if (with_routh) {
            if (eq.state.E > 0.0 && eq.state.E < k) {
                auto q = routh_coefficients(eq.state.E, p, k);
                out << ',' << num(q[0]) << ',' << num(q[1]) << ',' << num(q[2]);
            } else {
                out << ",,,";
            }
        }
        out << "\n";
    }
    return out.str();
}

int run_equilibria(double k, const std::vector<std::string>& sets, const std::string& csv_path,
                   bool with_routh) {
    SimConfig cfg;
    apply_sets(cfg, sets);
    cfg.params.validate();
    auto eqs = equilibria(cfg.params, k);
    std::cout << "R = " << num_short(basic_offspring_number(cfg.params)) << ", K = "
              << num_short(k) << "\n"
              << equilibria_table(eqs, cfg.params, k, with_routh);
    if (!csv_path.empty())
        write_file(csv_path, equilibria_csv(eqs, cfg.params, k, with_routh));
    return 0;
}

std::string timeseries_csv(const RunReport& report) {
    std::ostringstream out;
    out << "t,mass_E,mass_F,mass_M,mass_Ms,lyapunov_U,lyapunov_L,release_rate_total,"
           "cumulative_cost,max_E\n";
    for (const auto& tp : report.series)
        out << num(tp.t) << ',' << num(tp.mass_E) << ',' << num(tp.mass_F) << ','
            << num(tp.mass_M) << ',' << num(tp.mass_Ms) << ',' << num(tp.lyapunov_U) << ','
            << num(tp.lyapunov_L) << ',' << num(tp.release_rate_total) << ','
            << num(tp.cumulative_cost) << ',' << num(tp.max_E) << "\n";
    return out.str();
}

std::string summary_text(const RunReport& report) {
    std::ostringstream out;
    out << "convergence_time_days = "
        << (report.convergence_time ? num(*report.convergence_time) : std::string("none")) << "\n"
        << "control_cost = " << num(report.control_cost) << "\n"
        << "fitted_decay_U = "
        << (report.fitted_decay_U ? num(*report.fitted_decay_U) : std::string("none")) << "\n";
    if (report.conditions) {
        const ConditionReport& c = *report.conditions;
        out << "R_theta = " << num(c.R_theta) << "\n"
            << "r_theta_ok = " << (c.r_theta_ok ? "true" : "false") << "\n"
            << "sigma = " << num(c.sigma) << "\n"
            << "sigma_half = " << num(c.sigma_half) << "\n"
            << "sigma_ok = " << (c.sigma_ok ? "true" : "false") << "\n"
            << "deltas_ok = " << (c.deltas_ok ? "true" : "false") << "\n";
    }
    return out.str();
}

std::string snapshot_text(const Snapshot& snap, const GridSpec& g) {
    std::ostringstream out;
    out << "# " << g.nx << ' ' << g.ny << ' ' << num(g.dx) << ' ' << num(g.dy) << ' '
        << num(snap.t) << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) out << ' ';
            out << num(snap.data.at(i, j));
        }
        out << "\n";
    }
    return out.str();
}

void write_report(const RunReport& report, const SimConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    write_file(dir / "timeseries.csv", timeseries_csv(report));
    write_file(dir / "summary.txt", summary_text(report));
    write_file(dir / "config_echo.ini", report.config_echo);
    for (const auto& snap : report.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%s_t%g.csv", snap.field.c_str(), snap.t);
        write_file(dir / name, snapshot_text(snap, cfg.grid));
    }
}

// Scalar-capacity bifurcation scan: equilibria as the oviposition rate varies.
int run_ode_bifurcation(const SimConfig& cfg, const fs::path& dir) {
    constexpr double kOde = 500.0;
    fs::create_directories(dir);
    std::ostringstream out;
    out << "beta_E,R,kind,E,F,M,stability\n";
    for (int i = 0; i <= 200; ++i) {
        BioParams p = cfg.params;
        p.beta_E = 0.05 + i * (10.0 - 0.05) / 200.0;
        const double R = basic_offspring_number(p);
        for (const auto& eq : equilibria(p, kOde))
            out << num(p.beta_E) << ',' << num(R) << ',' << to_string(eq.kind) << ','
                << num(eq.state.E) << ',' << num(eq.state.F) << ',' << num(eq.state.M) << ','
                << to_string(eq.stability) << "\n";
    }
    write_file(dir / "bifurcation.csv", out.str());
    write_file(dir / "config_echo.ini", write_config(cfg));
    std::cout << "wrote " << (dir / "bifurcation.csv").string() << "\n";
    return 0;
}

int run_simulate_pde(const ConfigCliArgs& args) {
    SimConfig cfg = build_config(args, "paper-global");
    if (cfg.mode == "ode-bifurcation") return run_ode_bifurcation(cfg, args.out_dir);
    RunReport report = run(cfg);
    write_report(report, cfg, args.out_dir);
    std::cout << summary_text(report);
    return 0;
}

struct OdeCliArgs {
    double k = 500.0;
    double t_max = 400.0;
    double dt = 0.1;
    double u_const = 0.0;
    std::optional<double> e0, f0, m0;
    double ms0 = 0.0;
    std::vector<std::string> sets;
    std::string csv_path;
};

int run_simulate_ode(const OdeCliArgs& args) {
    SimConfig cfg;
    apply_sets(cfg, args.sets);
    const BioParams& p = cfg.params;
    p.validate();
    if (!(args.k > 0)) throw ConfigError("--k must be positive");
    if (!(args.dt > 0) || !(args.t_max >= 0)) throw ConfigError("--dt/--t-max out of range");

    SitOdeState s;
    if (args.e0 || args.f0 || args.m0) {
        s.E = args.e0.value_or(0.0);
        s.F = args.f0.value_or(0.0);
        s.M = args.m0.value_or(0.0);
    } else {
        // Default start: the largest steady state, or a tenth-of-capacity
        // perturbation when only extinction exists.
        OdeState start = equilibria(p, args.k).back().state;
        if (start.E == 0.0) start = interior_state(0.1 * args.k, p);
        s.E = start.E;
        s.F = start.F;
        s.M = start.M;
    }
    s.Ms = args.ms0;
    if (s.E < 0 || s.F < 0 || s.M < 0 || s.Ms < 0) throw ConfigError("initial state must be >= 0");

    auto traj = integrate_sit(p, args.k, s, args.u_const, args.dt, args.t_max);

    const double R = basic_offspring_number(p);
    std::ostringstream out;
    out << "t,E,F,M,Ms,V\n";
    for (size_t i = 0; i < traj.t.size(); ++i) {
        const SitOdeState& y = traj.states[i];
        const double v = R < 1.0
                             ? lyapunov_V_ode(OdeState{y.E, y.F, y.M}, p)
                             : std::numeric_limits<double>::quiet_NaN();
        out << num(traj.t[i]) << ',' << num(y.E) << ',' << num(y.F) << ',' << num(y.M) << ','
            << num(y.Ms) << ',' << num(v) << "\n";
    }
    if (args.csv_path.empty())
        std::cout << out.str();
    else
        write_file(args.csv_path, out.str());
    return 0;
}

void apply_axis(SimConfig& cfg, const std::string& axis, double value) {
    if (axis == "d3") {
        apply_set(cfg, "d3=" + num(value));
    } else if (axis == "theta") {
        apply_set(cfg, "theta=" + num(value));
    } else if (axis == "alpha") {
        apply_set(cfg, "alpha=" + num(value));
    } else if (axis == "rho") {
        if (cfg.mask.kind != MaskKind::Square)
            throw ConfigError("axis rho needs a square control mask");
        cfg.mask.rho = value;
        cfg.validate();
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "' (expected d3, theta, alpha, rho)");
    }
}

int run_sweep(const ConfigCliArgs& args, const std::string& axis, const std::string& values_csv) {
    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad sweep value '" + item + "'");
        }
    }
    if (values.empty()) throw ConfigError("--values list is empty");

    const SimConfig base = build_config(args, "paper-global");
    const fs::path dir(args.out_dir);
    fs::create_directories(dir);

    std::ostringstream summary;
    summary << "axis,value,convergence_time_days,control_cost,fitted_decay_U\n";
    for (double v : values) {
        SimConfig cfg = base;
        apply_axis(cfg, axis, v);
        RunReport report = run(cfg);
        char sub[64];
        std::snprintf(sub, sizeof(sub), "run_%s_%g", axis.c_str(), v);
        write_report(report, cfg, dir / sub);
        summary << axis << ',' << num(v) << ','
                << (report.convergence_time ? num(*report.convergence_time) : std::string("")) << ','
                << num(report.control_cost) << ','
                << (report.fitted_decay_U ? num(*report.fitted_decay_U) : std::string("")) << "\n";
        std::cout << axis << " = " << num_short(v) << ": convergence "
                  << (report.convergence_time ? num_short(*report.convergence_time) + " days"
                                              : std::string("not reached"))
                  << ", cost " << num_short(report.control_cost) << "\n";
    }
    write_file(dir / "sweep_summary.csv", summary.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sitdyn: sterile-release mosquito population dynamics"};
    app.require_subcommand(1);

    double eq_k = 500.0;
    std::string eq_csv;
    std::vector<std::string> eq_sets;
    auto* eq_cmd = app.add_subcommand("equilibria", "steady states of the scalar-capacity model");
    eq_cmd->add_option("--k", eq_k, "carrying capacity")->required();
    eq_cmd->add_option("--csv", eq_csv, "also write a CSV table");
    eq_cmd->add_option("--set", eq_sets, "parameter override, key=value");

    double st_k = 500.0;
    std::string st_csv;
    std::vector<std::string> st_sets;
    auto* st_cmd = app.add_subcommand("stability", "equilibria with Routh coefficients");
    st_cmd->add_option("--k", st_k, "carrying capacity");
    st_cmd->add_option("--csv", st_csv, "also write a CSV table");
    st_cmd->add_option("--set", st_sets, "parameter override, key=value");

    OdeCliArgs ode_args;
    auto* ode_cmd = app.add_subcommand("simulate-ode", "integrate the homogeneous model");
    ode_cmd->add_option("--k", ode_args.k, "carrying capacity");
    ode_cmd->add_option("--t-max", ode_args.t_max, "final time, days");
    ode_cmd->add_option("--dt", ode_args.dt, "output step, days");
    ode_cmd->add_option("--u", ode_args.u_const, "constant sterile release rate");
    double e0 = 0, f0 = 0, m0 = 0;
    auto* e0_opt = ode_cmd->add_option("--e0", e0, "initial aquatic density");
    auto* f0_opt = ode_cmd->add_option("--f0", f0, "initial female density");
    auto* m0_opt = ode_cmd->add_option("--m0", m0, "initial male density");
    ode_cmd->add_option("--ms0", ode_args.ms0, "initial sterile male density");
    ode_cmd->add_option("--set", ode_args.sets, "parameter override, key=value");
    ode_cmd->add_option("--csv", ode_args.csv_path, "write the trajectory here instead of stdout");

    ConfigCliArgs pde_args;
    auto* pde_cmd = app.add_subcommand("simulate-pde", "run the reaction-diffusion model");
    add_config_options(pde_cmd, pde_args, true);

    ConfigCliArgs sweep_args;
    std::string sweep_axis, sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "repeat a run over one scalar axis");
    add_config_options(sweep_cmd, sweep_args, true);
    sweep_cmd->add_option("--axis", sweep_axis, "d3, theta, alpha, or rho")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    }

    try {
        if (eq_cmd->parsed()) return run_equilibria(eq_k, eq_sets, eq_csv, false);
        if (st_cmd->parsed()) return run_equilibria(st_k, st_sets, st_csv, true);
        if (ode_cmd->parsed()) {
            if (*e0_opt) ode_args.e0 = e0;
            if (*f0_opt) ode_args.f0 = f0;
            if (*m0_opt) ode_args.m0 = m0;
            return run_simulate_ode(ode_args);
        }
        if (pde_cmd->parsed()) return run_simulate_pde(pde_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args, sweep_axis, sweep_values);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SimulationError& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
