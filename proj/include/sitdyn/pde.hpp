#pragma once

#include <optional>

#include "sitdyn/config.hpp"
#include "sitdyn/control.hpp"
#include "sitdyn/grid.hpp"
#include "sitdyn/params.hpp"

namespace sitdyn {

struct PdeState {
    Field E, F, M, Ms;
    double t = 0.0;
};

// Largest pointwise linear loss rate of the current state, used for the
// reaction part of the time-step bound.
double reaction_bound(const PdeState& s, const BioParams& p, const Field& K);

// dt = safety * min(diffusive bound, 1/reaction_bound); the diffusive bound is
// 1/(2*d_max*(1/dx^2+1/dy^2)) with d_max the largest diffusion coefficient.
double cfl_dt(const BioParams& p, const GridSpec& g, double reaction_bound, double safety = 0.9);

// 0/1 weights of the release region.
Field mask_field(const GridSpec& g, const MaskSpec& m);

struct ControlSetup {
    ControlEvalContext ctx;
    Field mask;
};

// One explicit Euler update: E reacts pointwise (no diffusion); F, M, Ms react
// and diffuse. Throws SimulationError on negative or non-finite output.
PdeState step(const PdeState& s, const BioParams& p, const Field& K,
              const ControlSetup* ctrl, const GridSpec& g, double dt);

// Full experiment driver: builds the capacity field and initial state from the
// config, advances to t_max or convergence, and collects the report.
RunReport run(const SimConfig& cfg);

}  // namespace sitdyn
