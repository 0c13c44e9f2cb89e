#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sitdyn/grid.hpp"
#include "sitdyn/params.hpp"

namespace sitdyn {

enum class MaskKind { Whole, Square, Off };

// Where the release control acts: everywhere, inside an axis-aligned square
// (center, half-width), or nowhere.
struct MaskSpec {
    MaskKind kind = MaskKind::Whole;
    double cx = 0.0;
    double cy = 0.0;
    double rho = 0.0;

    bool operator==(const MaskSpec&) const = default;
};

struct SimConfig {
    BioParams params;
    std::optional<ControlParams> ctrl;
    GridSpec grid;
    KFieldParams kfield;
    double t_max = 400.0;
    double output_interval = 1.0;
    std::vector<double> snapshot_times;
    MaskSpec mask;
    std::string initial = "equilibrium";  // or "capacity": E0 = K pointwise
    bool stop_on_convergence = true;
    std::string mode = "pde";  // or "ode-bifurcation"

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

// One row of the output time series. Functionals that are undefined for the
// current parameters are NaN.
struct TimePoint {
    double t = 0.0;
    double mass_E = 0.0;
    double mass_F = 0.0;
    double mass_M = 0.0;
    double mass_Ms = 0.0;
    double lyapunov_U = 0.0;
    double lyapunov_L = 0.0;
    double release_rate_total = 0.0;
    double cumulative_cost = 0.0;
    double max_E = 0.0;
};

struct Snapshot {
    std::string field;
    double t = 0.0;
    Field data;
};

struct RunReport {
    std::vector<TimePoint> series;
    std::optional<double> convergence_time;
    double control_cost = 0.0;
    std::optional<double> fitted_decay_U;
    std::optional<ConditionReport> conditions;
    std::string config_echo;
    std::vector<Snapshot> snapshots;
};

// Sectioned key=value text; unknown sections or keys are errors (ConfigError).
SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

// Applies "key=value" or "section.key=value"; bare keys are unambiguous
// because section key sets are disjoint. Setting a [control] key on a config
// without control enables it with defaults first.
void apply_set(SimConfig& cfg, const std::string& assignment);

// Applies a batch of assignments in order and validates the combined result
// once, so the assignments need not keep the config valid at every step.
void apply_sets(SimConfig& cfg, const std::vector<std::string>& assignments);

// Round-trippable text form: parse_config(write_config(c)) == c.
std::string write_config(const SimConfig& cfg);

// Named experiment setups: paper-k-field, paper-uncontrolled, paper-global,
// paper-local, ode-bifurcation.
SimConfig preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace sitdyn
