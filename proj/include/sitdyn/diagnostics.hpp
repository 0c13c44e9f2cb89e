#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sitdyn/grid.hpp"
#include "sitdyn/params.hpp"

namespace sitdyn {

enum class WeightVariant { PlainR, ThetaScaled };

// Coefficients of the linear population functional wE*|E| + wF*|F| + |M|.
struct LyapunovWeights {
    double wE = 0.0;
    double wF = 0.0;
    WeightVariant variant = WeightVariant::PlainR;

    // Requires R < 1.
    static LyapunovWeights plain(const BioParams& p);
    // Requires R(theta) < 1.
    static LyapunovWeights theta_scaled(const BioParams& p, const ControlParams& c);
};

// Discrete L1 norm: sum of cell values times cell area, fixed summation order.
double l1_mass(const Field& f, const GridSpec& g);

double functional_L(const Field& E, const Field& F, const Field& M, const GridSpec& g,
                    const LyapunovWeights& w);

// Ratio-tracking functional: integral of the theta-scaled linear part plus the
// alpha-weighted penalty (theta*M - Ms)^2 / (theta*M + Ms), with 0/0 -> 0.
double functional_U(const Field& E, const Field& F, const Field& M, const Field& Ms,
                    const GridSpec& g, const BioParams& p, const ControlParams& c);

// Pointwise penalty density M + alpha*(theta*M - Ms)^2/(theta*M + Ms).
double penalty_pointwise(double M, double Ms, const ControlParams& c);

// (k1', k2') with k1'*|y|_1 <= U <= k2'*|y|_1. The upper bound holds for all
// nonnegative states; the lower bound holds whenever Ms <= theta*M (for large
// alpha the penalty density dips slightly below k1' in a narrow band just
// above that ratio), which covers the states reached by the closed loop.
std::pair<double, double> sandwich_constants(const BioParams& p, const ControlParams& c);

// Left-rectangle integral of a sampled total release rate.
double control_cost(const std::vector<std::pair<double, double>>& release_series);

// First sample time at which the max egg density drops to 1, if any.
std::optional<double> convergence_time(const std::vector<std::pair<double, double>>& max_E_series,
                                       double threshold = 1.0);

// Least-squares slope of ln(v) over t; requires >= 3 strictly positive samples.
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v);

}  // namespace sitdyn
