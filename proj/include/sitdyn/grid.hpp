#pragma once

#include <vector>

#include "sitdyn/params.hpp"

namespace sitdyn {

// Cell-centered rectangular grid: cell (i, j) has center ((i+0.5)dx, (j+0.5)dy),
// with nx*dx = lx and ny*dy = ly.
struct GridSpec {
    int nx = 50;
    int ny = 50;
    double dx = 0.1;
    double dy = 0.1;
    double lx = 5.0;
    double ly = 5.0;

    static GridSpec regular(int nx, int ny, double lx, double ly);
    void validate() const;
    double cell_area() const { return dx * dy; }
    double x_center(int i) const { return (i + 0.5) * dx; }
    double y_center(int j) const { return (j + 0.5) * dy; }

    bool operator==(const GridSpec&) const = default;
};

// Dense scalar field over a grid, row-major with y (j) as the slow index.
struct Field {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    Field() = default;
    Field(int nx_, int ny_, double fill = 0.0) : nx(nx_), ny(ny_), v(size_t(nx_) * ny_, fill) {}
    explicit Field(const GridSpec& g, double fill = 0.0) : Field(g.nx, g.ny, fill) {}

    double& at(int i, int j) { return v[size_t(j) * nx + i]; }
    double at(int i, int j) const { return v[size_t(j) * nx + i]; }
    size_t size() const { return v.size(); }
};

// Sum of Gaussian bumps over a baseline; all vectors share one length.
struct KFieldParams {
    double zeta = 500.0;
    std::vector<double> lambda = {2e5, 1.5e5, 1e5};
    std::vector<double> mu = {2.5, 1.5, 4.0};
    std::vector<double> xi = {4.0, 1.5, 1.5};
    std::vector<double> sigma = {1.0, 1.0, 1.0};

    void validate() const;

    bool operator==(const KFieldParams&) const = default;
};

double carrying_capacity_at(double x, double y, const KFieldParams& kp);

Field carrying_capacity_field(const GridSpec& g, const KFieldParams& kp);

// Second-order 5-point Laplacian with zero-flux boundaries via ghost-cell mirroring.
Field laplacian_neumann(const Field& f, const GridSpec& g);

// Steady state of the reaction part, pointwise in K; requires R > 1.
struct InitialFields {
    Field E, F, M;
};
InitialFields equilibrium_initial_condition(const BioParams& p, const Field& K);

double max_value(const Field& f);

}  // namespace sitdyn
