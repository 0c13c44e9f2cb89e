#include "sitdyn/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "sitdyn/error.hpp"

namespace sitdyn {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& section, const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": cannot parse number '" + value + "'");
    }
}

int parse_int(const std::string& section, const std::string& key, const std::string& value) {
    const double x = parse_number(section, key, value);
    const int i = int(x);
    if (double(i) != x) throw ConfigError("[" + section + "] " + key + ": expected an integer");
    return i;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("[" + section + "] " + key + ": expected true or false");
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("[" + section + "] " + key + ": empty list entry");
        out.push_back(parse_number(section, key, item));
    }
    return out;
}

MaskSpec parse_mask(const std::string& value) {
    if (value == "whole") return {MaskKind::Whole, 0, 0, 0};
    if (value == "off") return {MaskKind::Off, 0, 0, 0};
    if (value.rfind("square(", 0) == 0 && value.back() == ')') {
        const auto args = parse_list("run", "control_mask", value.substr(7, value.size() - 8));
        if (args.size() != 3)
            throw ConfigError("control_mask square(...) needs center x, center y, half-width");
        return {MaskKind::Square, args[0], args[1], args[2]};
    }
    throw ConfigError("control_mask must be whole, off, or square(cx,cy,rho)");
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_number(xs[i]);
    }
    return out;
}

// Grid keys may specify widths, extents, or both; the unspecified side is derived.
struct GridDraft {
    int nx = 50, ny = 50;
    std::optional<double> dx, dy, lx, ly;

    GridSpec resolve() const {
        GridSpec g;
        g.nx = nx;
        g.ny = ny;
        if (nx <= 0 || ny <= 0) throw ConfigError("[grid] nx and ny must be positive");
        g.lx = lx ? *lx : (dx ? nx * *dx : 5.0);
        g.ly = ly ? *ly : (dy ? ny * *dy : 5.0);
        g.dx = dx ? *dx : g.lx / nx;
        g.dy = dy ? *dy : g.ly / ny;
        try {
            g.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("[grid] ") + e.what());
        }
        return g;
    }
};

struct Parser {
    SimConfig cfg;
    GridDraft grid;
    bool has_control = false;

    void set(const std::string& section, const std::string& key, const std::string& value) {
        if (section == "params")
            set_params(key, value);
        else if (section == "control")
            set_control(key, value);
        else if (section == "grid")
            set_grid(key, value);
        else if (section == "kfield")
            set_kfield(key, value);
        else if (section == "run")
            set_run(key, value);
        else
            throw ConfigError("unknown section [" + section + "]");
    }

    void set_params(const std::string& key, const std::string& value) {
        BioParams& p = cfg.params;
        const double x = parse_number("params", key, value);
        if (key == "beta_E") p.beta_E = x;
        else if (key == "nu_E") p.nu_E = x;
        else if (key == "delta_E") p.delta_E = x;
        else if (key == "delta_F") p.delta_F = x;
        else if (key == "delta_M") p.delta_M = x;
        else if (key == "delta_s") p.delta_s = x;
        else if (key == "nu") p.nu = x;
        else if (key == "eta") p.eta = x;
        else if (key == "gamma") p.gamma = x;
        else if (key == "d1") p.d1 = x;
        else if (key == "d2") p.d2 = x;
        else if (key == "d3") p.d3 = x;
        else throw ConfigError("unknown key '" + key + "' in [params]");
    }

    void set_control(const std::string& key, const std::string& value) {
        if (!has_control) {
            cfg.ctrl = ControlParams{};
            has_control = true;
        }
        const double x = parse_number("control", key, value);
        if (key == "theta") cfg.ctrl->theta = x;
        else if (key == "alpha") cfg.ctrl->alpha = x;
        else throw ConfigError("unknown key '" + key + "' in [control]");
    }

    void set_grid(const std::string& key, const std::string& value) {
        if (key == "nx") grid.nx = parse_int("grid", key, value);
        else if (key == "ny") grid.ny = parse_int("grid", key, value);
        else if (key == "dx") grid.dx = parse_number("grid", key, value);
        else if (key == "dy") grid.dy = parse_number("grid", key, value);
        else if (key == "lx") grid.lx = parse_number("grid", key, value);
        else if (key == "ly") grid.ly = parse_number("grid", key, value);
        else throw ConfigError("unknown key '" + key + "' in [grid]");
    }

    void set_kfield(const std::string& key, const std::string& value) {
        KFieldParams& k = cfg.kfield;
        if (key == "zeta") k.zeta = parse_number("kfield", key, value);
        else if (key == "lambda") k.lambda = parse_list("kfield", key, value);
        else if (key == "mu") k.mu = parse_list("kfield", key, value);
        else if (key == "xi") k.xi = parse_list("kfield", key, value);
        else if (key == "sigma") k.sigma = parse_list("kfield", key, value);
        else throw ConfigError("unknown key '" + key + "' in [kfield]");
    }

    void set_run(const std::string& key, const std::string& value) {
        if (key == "t_max") cfg.t_max = parse_number("run", key, value);
        else if (key == "output_interval") cfg.output_interval = parse_number("run", key, value);
        else if (key == "snapshot_times") cfg.snapshot_times = parse_list("run", key, value);
        else if (key == "control_mask") cfg.mask = parse_mask(value);
        else if (key == "initial") {
            if (value != "equilibrium" && value != "capacity")
                throw ConfigError("[run] initial must be equilibrium or capacity");
            cfg.initial = value;
        } else if (key == "stop_on_convergence")
            cfg.stop_on_convergence = parse_bool("run", key, value);
        else if (key == "mode") {
            if (value != "pde" && value != "ode-bifurcation")
                throw ConfigError("[run] mode must be pde or ode-bifurcation");
            cfg.mode = value;
        } else
            throw ConfigError("unknown key '" + key + "' in [run]");
    }

    SimConfig finish() {
        cfg.grid = grid.resolve();
        cfg.validate();
        return cfg;
    }
};

const char* section_of(const std::string& key) {
    static const struct { const char* key; const char* section; } table[] = {
        {"beta_E", "params"}, {"nu_E", "params"}, {"delta_E", "params"}, {"delta_F", "params"},
        {"delta_M", "params"}, {"delta_s", "params"}, {"nu", "params"}, {"eta", "params"},
        {"gamma", "params"}, {"d1", "params"}, {"d2", "params"}, {"d3", "params"},
        {"theta", "control"}, {"alpha", "control"},
        {"nx", "grid"}, {"ny", "grid"}, {"dx", "grid"}, {"dy", "grid"}, {"lx", "grid"}, {"ly", "grid"},
        {"zeta", "kfield"}, {"lambda", "kfield"}, {"mu", "kfield"}, {"xi", "kfield"},
        {"sigma", "kfield"},
        {"t_max", "run"}, {"output_interval", "run"}, {"snapshot_times", "run"},
        {"control_mask", "run"}, {"initial", "run"}, {"stop_on_convergence", "run"},
        {"mode", "run"},
    };
    for (const auto& row : table)
        if (key == row.key) return row.section;
    return nullptr;
}

}  // namespace

void SimConfig::validate() const {
    try {
        params.validate();
        if (ctrl) ctrl->validate();
        grid.validate();
        kfield.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(t_max >= 0)) throw ConfigError("t_max must be >= 0");
    if (!(output_interval > 0)) throw ConfigError("output_interval must be > 0");
    for (double s : snapshot_times)
        if (s < 0 || s > t_max) throw ConfigError("snapshot times must lie in [0, t_max]");
    if (mask.kind == MaskKind::Square && !(mask.rho > 0))
        throw ConfigError("square mask needs a positive half-width");
}

SimConfig parse_config(const std::string& text) {
    Parser parser;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        parser.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return parser.finish();
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_sets(SimConfig& cfg, const std::vector<std::string>& assignments) {
    // Route everything through one parser so grid reconciliation runs per
    // assignment but validation happens once: the combined result must be
    // consistent, while intermediate states may pass through invalid
    // combinations (say, shrinking t_max before trimming snapshot times).
    Parser parser;
    parser.cfg = cfg;
    parser.has_control = cfg.ctrl.has_value();
    parser.grid.nx = cfg.grid.nx;
    parser.grid.ny = cfg.grid.ny;
    parser.grid.dx = cfg.grid.dx;
    parser.grid.dy = cfg.grid.dy;
    parser.grid.lx = cfg.grid.lx;
    parser.grid.ly = cfg.grid.ly;

    for (const auto& assignment : assignments) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set needs key=value: '" + assignment + "'");
        std::string key = trim(assignment.substr(0, eq));
        const std::string value = trim(assignment.substr(eq + 1));
        std::string section;
        const auto dot = key.find('.');
        if (dot != std::string::npos) {
            section = key.substr(0, dot);
            key = key.substr(dot + 1);
        } else {
            const char* s = section_of(key);
            if (!s) throw ConfigError("unknown config key '" + key + "'");
            section = s;
        }

        if (section == "grid") {
            // An override of one side re-derives the other: new cell widths
            // move the extents, while new counts or extents recompute the
            // widths.
            if (key == "dx" || key == "dy") {
                parser.grid.lx.reset();
                parser.grid.ly.reset();
            } else {
                parser.grid.dx.reset();
                parser.grid.dy.reset();
            }
        }
        parser.set(section, key, value);
    }
    cfg = parser.finish();
}

void apply_set(SimConfig& cfg, const std::string& assignment) {
    apply_sets(cfg, {assignment});
}

std::string write_config(const SimConfig& cfg) {
    std::string out;
    const BioParams& p = cfg.params;
    out += "[params]\n";
    out += "beta_E = " + format_number(p.beta_E) + "\n";
    out += "nu_E = " + format_number(p.nu_E) + "\n";
    out += "delta_E = " + format_number(p.delta_E) + "\n";
    out += "delta_F = " + format_number(p.delta_F) + "\n";
    out += "delta_M = " + format_number(p.delta_M) + "\n";
    out += "delta_s = " + format_number(p.delta_s) + "\n";
    out += "nu = " + format_number(p.nu) + "\n";
    out += "eta = " + format_number(p.eta) + "\n";
    out += "gamma = " + format_number(p.gamma) + "\n";
    out += "d1 = " + format_number(p.d1) + "\n";
    out += "d2 = " + format_number(p.d2) + "\n";
    out += "d3 = " + format_number(p.d3) + "\n";
    if (cfg.ctrl) {
        out += "\n[control]\n";
        out += "theta = " + format_number(cfg.ctrl->theta) + "\n";
        out += "alpha = " + format_number(cfg.ctrl->alpha) + "\n";
    }
    out += "\n[grid]\n";
    out += "nx = " + std::to_string(cfg.grid.nx) + "\n";
    out += "ny = " + std::to_string(cfg.grid.ny) + "\n";
    out += "dx = " + format_number(cfg.grid.dx) + "\n";
    out += "dy = " + format_number(cfg.grid.dy) + "\n";
    out += "lx = " + format_number(cfg.grid.lx) + "\n";
    out += "ly = " + format_number(cfg.grid.ly) + "\n";
    out += "\n[kfield]\n";
    out += "zeta = " + format_number(cfg.kfield.zeta) + "\n";
    out += "lambda = " + format_list(cfg.kfield.lambda) + "\n";
    out += "mu = " + format_list(cfg.kfield.mu) + "\n";
    out += "xi = " + format_list(cfg.kfield.xi) + "\n";
    out += "sigma = " + format_list(cfg.kfield.sigma) + "\n";
    out += "\n[run]\n";
    out += "t_max = " + format_number(cfg.t_max) + "\n";
    out += "output_interval = " + format_number(cfg.output_interval) + "\n";
    if (!cfg.snapshot_times.empty())
        out += "snapshot_times = " + format_list(cfg.snapshot_times) + "\n";
    switch (cfg.mask.kind) {
        case MaskKind::Whole: out += "control_mask = whole\n"; break;
        case MaskKind::Off: out += "control_mask = off\n"; break;
        case MaskKind::Square:
            out += "control_mask = square(" + format_number(cfg.mask.cx) + "," +
                   format_number(cfg.mask.cy) + "," + format_number(cfg.mask.rho) + ")\n";
            break;
    }
    out += "initial = " + cfg.initial + "\n";
    out += std::string("stop_on_convergence = ") + (cfg.stop_on_convergence ? "true" : "false") + "\n";
    out += "mode = " + cfg.mode + "\n";
    return out;
}

SimConfig preset(const std::string& name) {
    SimConfig cfg;
    cfg.grid = GridSpec::regular(50, 50, 5.0, 5.0);
    if (name == "paper-k-field") {
        cfg.t_max = 0.0;
        cfg.snapshot_times = {0.0};
        cfg.mask.kind = MaskKind::Off;
    } else if (name == "paper-uncontrolled") {
        cfg.t_max = 200.0;
        cfg.snapshot_times = {10.0, 200.0};
        cfg.mask.kind = MaskKind::Off;
    } else if (name == "paper-global") {
        cfg.ctrl = ControlParams{75.0, 0.25};
        cfg.t_max = 400.0;
        cfg.snapshot_times = {10.0, 200.0};
        cfg.mask.kind = MaskKind::Whole;
    } else if (name == "paper-local") {
        cfg.ctrl = ControlParams{75.0, 0.001};
        cfg.t_max = 400.0;
        cfg.snapshot_times = {10.0, 200.0};
        cfg.mask = {MaskKind::Square, 2.5, 2.5, 1.0};
    } else if (name == "ode-bifurcation") {
        cfg.mode = "ode-bifurcation";
        cfg.mask.kind = MaskKind::Off;
        cfg.t_max = 0.0;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"paper-k-field", "paper-uncontrolled", "paper-global", "paper-local", "ode-bifurcation"};
}

}  // namespace sitdyn
