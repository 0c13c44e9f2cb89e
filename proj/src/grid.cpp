#include "sitdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sitdyn {

GridSpec GridSpec::regular(int nx, int ny, double lx, double ly) {
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.dx = lx / nx;
    g.dy = ly / ny;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid needs positive cell counts");
    if (!(dx > 0) || !(dy > 0)) throw std::invalid_argument("grid needs positive cell widths");
    if (std::abs(nx * dx - lx) > 1e-12 * std::max(1.0, lx) ||
        std::abs(ny * dy - ly) > 1e-12 * std::max(1.0, ly))
        throw std::invalid_argument("grid extents must equal cell count times cell width");
}

void KFieldParams::validate() const {
    if (!(zeta > 0)) throw std::invalid_argument("kfield zeta must be > 0");
    const size_t n = lambda.size();
    if (mu.size() != n || xi.size() != n || sigma.size() != n)
        throw std::invalid_argument("kfield lambda/mu/xi/sigma must have equal lengths");
    for (double l : lambda)
        if (!(l >= 0)) throw std::invalid_argument("kfield amplitudes must be >= 0");
    for (double s : sigma)
        if (!(s > 0)) throw std::invalid_argument("kfield widths must be > 0");
}

double carrying_capacity_at(double x, double y, const KFieldParams& kp) {
    double k = kp.zeta;
    for (size_t i = 0; i < kp.lambda.size(); ++i) {
        const double ddx = x - kp.mu[i];
        const double ddy = y - kp.xi[i];
        k += kp.lambda[i] * std::exp(-(ddx * ddx + ddy * ddy) / kp.sigma[i]);
    }
    return k;
}

Field carrying_capacity_field(const GridSpec& g, const KFieldParams& kp) {
    g.validate();
    kp.validate();
    Field k(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            k.at(i, j) = carrying_capacity_at(g.x_center(i), g.y_center(j), kp);
    return k;
}

Field laplacian_neumann(const Field& f, const GridSpec& g) {
    Field out(f.nx, f.ny);
    const double ix2 = 1.0 / (g.dx * g.dx);
    const double iy2 = 1.0 / (g.dy * g.dy);
    for (int j = 0; j < f.ny; ++j) {
        const int jm = j > 0 ? j - 1 : 0;
        const int jp = j < f.ny - 1 ? j + 1 : f.ny - 1;
        for (int i = 0; i < f.nx; ++i) {
            const int im = i > 0 ? i - 1 : 0;
            const int ip = i < f.nx - 1 ? i + 1 : f.nx - 1;
            const double c = f.at(i, j);
            out.at(i, j) = (f.at(ip, j) - 2.0 * c + f.at(im, j)) * ix2 +
                           (f.at(i, jp) - 2.0 * c + f.at(i, jm)) * iy2;
        }
    }
    return out;
}

InitialFields equilibrium_initial_condition(const BioParams& p, const Field& K) {
    const double R = basic_offspring_number(p);
    if (!(R > 1.0))
        throw std::invalid_argument("equilibrium initial condition requires R > 1");
    const double egg_factor = 1.0 - 1.0 / R;
    const double f_ratio = p.nu * p.nu_E / p.delta_F;
    const double m_ratio = (1.0 - p.nu) * p.nu_E / p.delta_M;
    InitialFields init{Field(K.nx, K.ny), Field(K.nx, K.ny), Field(K.nx, K.ny)};
    for (size_t k = 0; k < K.v.size(); ++k) {
        init.E.v[k] = egg_factor * K.v[k];
        init.F.v[k] = f_ratio * init.E.v[k];
        init.M.v[k] = m_ratio * init.E.v[k];
    }
    return init;
}

double max_value(const Field& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::max(m, x);
    return m;
}

}  // namespace sitdyn
