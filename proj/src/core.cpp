#include "granular/core.hpp"

#include <algorithm>
#include <cmath>

namespace granular {

void validate(const GasParams& g) {
    if (!(g.gamma > 1.0)) {
        throw ValidationError("gas: gamma must exceed 1, got " + std::to_string(g.gamma));
    }
    if (!(g.lambda >= 0.0)) {
        throw ValidationError("gas: lambda must be non-negative, got " + std::to_string(g.lambda));
    }
    if (g.dim < 1) {
        throw ValidationError("gas: dim must be a positive integer, got " + std::to_string(g.dim));
    }
}

void validate(const Grid1D& grid) {
    if (!(grid.x_min < grid.x_max)) {
        throw ValidationError("grid: x_min must be below x_max");
    }
    if (grid.num_cells == 0) {
        throw ValidationError("grid: num_cells must be positive");
    }
}

ConservedField primitive_to_conserved(const PrimitiveField& pf, const GasParams& g) {
    const std::size_t n = pf.size();
    ConservedField cf;
    cf.rho = pf.rho;
    cf.mom.resize(n);
    cf.en.resize(n);
    const double gm1 = g.gamma - 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        cf.mom[i] = pf.rho[i] * pf.u[i];
        cf.en[i] = pf.p[i] / gm1 + 0.5 * pf.rho[i] * pf.u[i] * pf.u[i];
    }
    return cf;
}

PrimitiveRecovery conserved_to_primitive(const ConservedField& cf, const GasParams& g,
                                         const FloorPolicy& floors) {
    const std::size_t n = cf.size();
    PrimitiveRecovery out;
    out.field.rho.resize(n);
    out.field.u.resize(n);
    out.field.p.resize(n);
    const double gm1 = g.gamma - 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rho = cf.rho[i];
        if (rho < floors.rho_floor) {
            rho = floors.rho_floor;
            ++out.flooring_events;
        }
        const double u = cf.mom[i] / rho;
        double p = gm1 * (cf.en[i] - 0.5 * cf.mom[i] * cf.mom[i] / rho);
        if (p < floors.p_floor) {
            p = floors.p_floor;
            ++out.flooring_events;
        }
        out.field.rho[i] = rho;
        out.field.u[i] = u;
        out.field.p[i] = p;
    }
    return out;
}

std::vector<double> entropy_K(const PrimitiveField& pf, const GasParams& g) {
    const std::size_t n = pf.size();
    std::vector<double> K(n);
    for (std::size_t i = 0; i < n; ++i) {
        K[i] = pf.p[i] * std::pow(pf.rho[i], -g.gamma);
    }
    return K;
}

}  // namespace granular
