#include "sitdyn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sitdyn {

LyapunovWeights LyapunovWeights::plain(const BioParams& p) {
    const double R = basic_offspring_number(p);
    if (!(R < 1.0)) throw std::invalid_argument("plain weights require R < 1");
    return {(1.0 + R) / (1.0 - R), 2.0 * p.beta_E / (p.delta_F * (1.0 - R)), WeightVariant::PlainR};
}

LyapunovWeights LyapunovWeights::theta_scaled(const BioParams& p, const ControlParams& c) {
    const double Rt = scaled_offspring(p, c);
    if (!(Rt < 1.0)) throw std::invalid_argument("theta weights require scaled offspring number < 1");
    const double tg = c.theta * p.gamma;
    return {(1.0 + (1.0 + tg) * Rt) / (1.0 - Rt),
            p.beta_E * (2.0 + tg) / (p.delta_F * (1.0 + tg) * (1.0 - Rt)),
            WeightVariant::ThetaScaled};
}

double l1_mass(const Field& f, const GridSpec& g) {
    double sum = 0.0;
    for (double x : f.v) sum += x;
    return sum * g.cell_area();
}

double functional_L(const Field& E, const Field& F, const Field& M, const GridSpec& g,
                    const LyapunovWeights& w) {
    return w.wE * l1_mass(E, g) + w.wF * l1_mass(F, g) + l1_mass(M, g);
}

double penalty_pointwise(double M, double Ms, const ControlParams& c) {
    const double mix = c.theta * M + Ms;
    if (mix <= 0.0) return M;
    const double dev = c.theta * M - Ms;
    return M + c.alpha * dev * dev / mix;
}

double functional_U(const Field& E, const Field& F, const Field& M, const Field& Ms,
                    const GridSpec& g, const BioParams& p, const ControlParams& c) {
    const LyapunovWeights w = LyapunovWeights::theta_scaled(p, c);
    double penalty = 0.0;
    for (size_t k = 0; k < M.v.size(); ++k) {
        const double mix = c.theta * M.v[k] + Ms.v[k];
        if (mix > 0.0) {
            const double dev = c.theta * M.v[k] - Ms.v[k];
            penalty += c.alpha * dev * dev / mix;
        }
    }
    return w.wE * l1_mass(E, g) + w.wF * l1_mass(F, g) + l1_mass(M, g) +
           penalty * g.cell_area();
}

std::pair<double, double> sandwich_constants(const BioParams& p, const ControlParams& c) {
    const LyapunovWeights w = LyapunovWeights::theta_scaled(p, c);
    const double k1 = std::min({w.wE, c.alpha, 1.0 / (1.0 + c.theta), w.wF});
    const double k2 = std::max({w.wE, c.alpha, 1.0 + c.alpha * c.theta, w.wF});
    return {k1, k2};
}

double control_cost(const std::vector<std::pair<double, double>>& release_series) {
    double cost = 0.0;
    for (size_t k = 0; k + 1 < release_series.size(); ++k) {
        const double dt = release_series[k + 1].first - release_series[k].first;
        if (dt < 0) throw std::invalid_argument("release series times must be nondecreasing");
        cost += release_series[k].second * dt;
    }
    return cost;
}

std::optional<double> convergence_time(const std::vector<std::pair<double, double>>& max_E_series,
                                       double threshold) {
    for (const auto& [t, m] : max_E_series)
        if (m <= threshold) return t;
    return std::nullopt;
}

double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size()) throw std::invalid_argument("decay fit needs matching series lengths");
    if (t.size() < 3) throw std::invalid_argument("decay fit needs at least 3 samples");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = double(t.size());
    for (size_t k = 0; k < t.size(); ++k) {
        if (!(v[k] > 0.0)) throw std::invalid_argument("decay fit needs positive values");
        const double y = std::log(v[k]);
        st += t[k];
        sy += y;
        stt += t[k] * t[k];
        sty += t[k] * y;
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw std::invalid_argument("decay fit needs distinct sample times");
    return (n * sty - st * sy) / denom;
}

}  // namespace sitdyn
