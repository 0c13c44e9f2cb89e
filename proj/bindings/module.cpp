// Python bindings for the sitdyn library. Fields cross the boundary as numpy
// arrays of shape (ny, nx), matching the row-major layout of Field.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "sitdyn/config.hpp"
#include "sitdyn/control.hpp"
#include "sitdyn/diagnostics.hpp"
#include "sitdyn/error.hpp"
#include "sitdyn/grid.hpp"
#include "sitdyn/ode.hpp"
#include "sitdyn/params.hpp"
#include "sitdyn/pde.hpp"

namespace py = pybind11;
using namespace sitdyn;

namespace {

py::array_t<double> field_to_numpy(const Field& f) {
    py::array_t<double> out({f.ny, f.nx});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

py::dict trajectory_to_dict(const OdeTrajectory& traj) {
    const py::ssize_t n = py::ssize_t(traj.t.size());
    py::array_t<double> t(n), E(n), F(n), M(n), Ms(n);
    for (py::ssize_t k = 0; k < n; ++k) {
        t.mutable_at(k) = traj.t[size_t(k)];
        E.mutable_at(k) = traj.states[size_t(k)].E;
        F.mutable_at(k) = traj.states[size_t(k)].F;
        M.mutable_at(k) = traj.states[size_t(k)].M;
        Ms.mutable_at(k) = traj.states[size_t(k)].Ms;
    }
    py::dict out;
    out["t"] = t;
    out["E"] = E;
    out["F"] = F;
    out["M"] = M;
    out["Ms"] = Ms;
    return out;
}

}  // namespace

PYBIND11_MODULE(_sitdyn, m) {
    m.doc() = "Mosquito population dynamics with sterile-male release control";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SimulationError>(m, "SimulationError");

    py::class_<BioParams>(m, "BioParams")
        .def(py::init<>())
        .def_readwrite("beta_E", &BioParams::beta_E)
        .def_readwrite("nu_E", &BioParams::nu_E)
        .def_readwrite("delta_E", &BioParams::delta_E)
        .def_readwrite("delta_F", &BioParams::delta_F)
        .def_readwrite("delta_M", &BioParams::delta_M)
        .def_readwrite("delta_s", &BioParams::delta_s)
        .def_readwrite("nu", &BioParams::nu)
        .def_readwrite("eta", &BioParams::eta)
        .def_readwrite("gamma", &BioParams::gamma)
        .def_readwrite("d1", &BioParams::d1)
        .def_readwrite("d2", &BioParams::d2)
        .def_readwrite("d3", &BioParams::d3)
        .def("validate", &BioParams::validate);

    py::class_<ControlParams>(m, "ControlParams")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("theta"), py::arg("alpha"))
        .def_readwrite("theta", &ControlParams::theta)
        .def_readwrite("alpha", &ControlParams::alpha)
        .def("validate", &ControlParams::validate);

    py::class_<DerivedRates>(m, "DerivedRates")
        .def_readonly("R", &DerivedRates::R)
        .def_readonly("r_minus", &DerivedRates::r_minus)
        .def_readonly("r_plus", &DerivedRates::r_plus)
        .def_readonly("R_theta", &DerivedRates::R_theta)
        .def_readonly("kappa", &DerivedRates::kappa)
        .def_readonly("psi", &DerivedRates::psi)
        .def_readonly("sigma", &DerivedRates::sigma)
        .def_readonly("c0", &DerivedRates::c0)
        .def_readonly("c_theta", &DerivedRates::c_theta);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("R_theta", &ConditionReport::R_theta)
        .def_readonly("r_theta_ok", &ConditionReport::r_theta_ok)
        .def_readonly("sigma", &ConditionReport::sigma)
        .def_readonly("sigma_half", &ConditionReport::sigma_half)
        .def_readonly("sigma_ok", &ConditionReport::sigma_ok)
        .def_readonly("deltas_ok", &ConditionReport::deltas_ok);

    m.def("basic_offspring_number", &basic_offspring_number, py::arg("params"));
    m.def("threshold_rates", &threshold_rates, py::arg("params"), py::arg("K"));
    m.def("scaled_offspring", &scaled_offspring, py::arg("params"), py::arg("control"));
    m.def("control_gain_psi", &control_gain_psi, py::arg("params"), py::arg("control"));
    m.def("ode_decay_rate_c0", &ode_decay_rate_c0, py::arg("params"));
    m.def("theta_decay_rate", &theta_decay_rate, py::arg("params"), py::arg("control"));
    m.def("derived_rates", &derived_rates, py::arg("params"), py::arg("control"), py::arg("K"));
    m.def("check_stabilization_conditions", &check_stabilization_conditions, py::arg("params"),
          py::arg("control"));

    py::class_<OdeState>(m, "OdeState")
        .def(py::init<>())
        .def(py::init([](double E, double F, double M) { return OdeState{E, F, M}; }),
             py::arg("E"), py::arg("F"), py::arg("M"))
        .def_readwrite("E", &OdeState::E)
        .def_readwrite("F", &OdeState::F)
        .def_readwrite("M", &OdeState::M);

    py::class_<SitOdeState>(m, "SitOdeState")
        .def(py::init<>())
        .def(py::init([](double E, double F, double M, double Ms) {
                 return SitOdeState{E, F, M, Ms};
             }),
             py::arg("E"), py::arg("F"), py::arg("M"), py::arg("Ms"))
        .def_readwrite("E", &SitOdeState::E)
        .def_readwrite("F", &SitOdeState::F)
        .def_readwrite("M", &SitOdeState::M)
        .def_readwrite("Ms", &SitOdeState::Ms);

    py::enum_<EquilibriumKind>(m, "EquilibriumKind")
        .value("extinction", EquilibriumKind::Extinction)
        .value("critical", EquilibriumKind::E0Critical)
        .value("low", EquilibriumKind::E1Low)
        .value("high", EquilibriumKind::E2High);

    py::enum_<Stability>(m, "Stability")
        .value("stable", Stability::LocallyAsymptoticallyStable)
        .value("unstable", Stability::Unstable)
        .value("degenerate", Stability::Degenerate);

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("state", &Equilibrium::state)
        .def_readonly("kind", &Equilibrium::kind)
        .def_readonly("stability", &Equilibrium::stability)
        .def("__repr__", [](const Equilibrium& eq) {
            return "Equilibrium(E=" + std::to_string(eq.state.E) + ", kind=" +
                   to_string(eq.kind) + ", " + to_string(eq.stability) + ")";
        });

    m.def("equilibria", &equilibria, py::arg("params"), py::arg("K"));
    m.def("life_cycle_rhs", &life_cycle_rhs, py::arg("state"), py::arg("params"), py::arg("K"));
    m.def("sit_rhs", &sit_rhs, py::arg("state"), py::arg("params"), py::arg("K"), py::arg("u"));
    m.def("routh_coefficients", &routh_coefficients, py::arg("E"), py::arg("params"),
          py::arg("K"));
    m.def("lyapunov_V_ode", &lyapunov_V_ode, py::arg("state"), py::arg("params"));

    m.def(
        "integrate_life_cycle",
        [](const BioParams& p, double K, const OdeState& s0, double dt, double T) {
            return trajectory_to_dict(integrate_life_cycle(p, K, s0, dt, T));
        },
        py::arg("params"), py::arg("K"), py::arg("s0"), py::arg("dt"), py::arg("T"));
    m.def(
        "integrate_sit",
        [](const BioParams& p, double K, const SitOdeState& s0, double u, double dt, double T) {
            return trajectory_to_dict(integrate_sit(p, K, s0, u, dt, T));
        },
        py::arg("params"), py::arg("K"), py::arg("s0"), py::arg("u"), py::arg("dt"),
        py::arg("T"));

    m.def(
        "feedback_u",
        [](double F, double M, double Ms, const BioParams& p, const ControlParams& c) {
            return feedback_u(F, M, Ms, ControlEvalContext::make(p, c));
        },
        py::arg("F"), py::arg("M"), py::arg("Ms"), py::arg("params"), py::arg("control"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_static("regular", &GridSpec::regular, py::arg("nx"), py::arg("ny"), py::arg("lx"),
                    py::arg("ly"))
        .def_readwrite("nx", &GridSpec::nx)
        .def_readwrite("ny", &GridSpec::ny)
        .def_readwrite("dx", &GridSpec::dx)
        .def_readwrite("dy", &GridSpec::dy)
        .def_readwrite("lx", &GridSpec::lx)
        .def_readwrite("ly", &GridSpec::ly)
        .def("cell_area", &GridSpec::cell_area);

    py::class_<KFieldParams>(m, "KFieldParams")
        .def(py::init<>())
        .def_readwrite("zeta", &KFieldParams::zeta)
        .def_readwrite("lambda_", &KFieldParams::lambda)
        .def_readwrite("mu", &KFieldParams::mu)
        .def_readwrite("xi", &KFieldParams::xi)
        .def_readwrite("sigma", &KFieldParams::sigma);

    m.def("carrying_capacity_at", &carrying_capacity_at, py::arg("x"), py::arg("y"),
          py::arg("kfield"));
    m.def(
        "carrying_capacity_field",
        [](const GridSpec& g, const KFieldParams& kp) {
            return field_to_numpy(carrying_capacity_field(g, kp));
        },
        py::arg("grid"), py::arg("kfield"));

    py::enum_<MaskKind>(m, "MaskKind")
        .value("whole", MaskKind::Whole)
        .value("square", MaskKind::Square)
        .value("off", MaskKind::Off);

    py::class_<MaskSpec>(m, "MaskSpec")
        .def(py::init<>())
        .def_readwrite("kind", &MaskSpec::kind)
        .def_readwrite("cx", &MaskSpec::cx)
        .def_readwrite("cy", &MaskSpec::cy)
        .def_readwrite("rho", &MaskSpec::rho);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("params", &SimConfig::params)
        .def_readwrite("ctrl", &SimConfig::ctrl)
        .def_readwrite("grid", &SimConfig::grid)
        .def_readwrite("kfield", &SimConfig::kfield)
        .def_readwrite("t_max", &SimConfig::t_max)
        .def_readwrite("output_interval", &SimConfig::output_interval)
        .def_readwrite("snapshot_times", &SimConfig::snapshot_times)
        .def_readwrite("mask", &SimConfig::mask)
        .def_readwrite("initial", &SimConfig::initial)
        .def_readwrite("stop_on_convergence", &SimConfig::stop_on_convergence)
        .def_readwrite("mode", &SimConfig::mode)
        .def("validate", &SimConfig::validate);

    py::class_<TimePoint>(m, "TimePoint")
        .def_readonly("t", &TimePoint::t)
        .def_readonly("mass_E", &TimePoint::mass_E)
        .def_readonly("mass_F", &TimePoint::mass_F)
        .def_readonly("mass_M", &TimePoint::mass_M)
        .def_readonly("mass_Ms", &TimePoint::mass_Ms)
        .def_readonly("lyapunov_U", &TimePoint::lyapunov_U)
        .def_readonly("lyapunov_L", &TimePoint::lyapunov_L)
        .def_readonly("release_rate_total", &TimePoint::release_rate_total)
        .def_readonly("cumulative_cost", &TimePoint::cumulative_cost)
        .def_readonly("max_E", &TimePoint::max_E);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("field", &Snapshot::field)
        .def_readonly("t", &Snapshot::t)
        .def_property_readonly("data",
                               [](const Snapshot& s) { return field_to_numpy(s.data); });

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("series", &RunReport::series)
        .def_readonly("convergence_time", &RunReport::convergence_time)
        .def_readonly("control_cost", &RunReport::control_cost)
        .def_readonly("fitted_decay_U", &RunReport::fitted_decay_U)
        .def_readonly("conditions", &RunReport::conditions)
        .def_readonly("config_echo", &RunReport::config_echo)
        .def_readonly("snapshots", &RunReport::snapshots);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("write_config", &write_config, py::arg("config"));
    m.def("apply_set", &apply_set, py::arg("config"), py::arg("assignment"),
          "Apply a key=value override in place.");
    m.def("apply_sets", &apply_sets, py::arg("config"), py::arg("assignments"),
          "Apply a batch of overrides in place, validating once at the end.");
    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("run", &run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
}
