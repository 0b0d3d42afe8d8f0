// Domain types and equation-of-state relations shared by every module:
// gas parameters, the 1-D grid, primitive/conserved cell states and the
// conversions between them, and the per-record diagnostic bundle.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace granular {

// Thrown when an argument leaves the mathematical domain of an operation
// (e.g. a profile variable outside the constructed branch).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a root finder cannot bracket the requested value.
struct BracketError : std::runtime_error {
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a time-series analysis needs more records than it was given.
struct InsufficientSeries : std::runtime_error {
    explicit InsufficientSeries(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on scenario/config validation failures.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Physical constants of the gas: adiabatic index, cooling coefficient and
// spatial dimension. gamma must exceed 1; the inequality suite additionally
// assumes gamma <= 1 + 2/dim (enforced at scenario level, overridable).
struct GasParams {
    double gamma = 5.0 / 3.0;
    double lambda = 1.0;  // cooling coefficient, >= 0 (0 disables cooling)
    int dim = 1;
};

void validate(const GasParams& g);

// Uniform 1-D grid of cell centers.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t num_cells = 0;

    double dx() const { return (x_max - x_min) / static_cast<double>(num_cells); }
    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }
};

void validate(const Grid1D& grid);

// Cell-averaged primitive state (density, velocity, pressure).
// Temperature is never stored; it is always p/rho on demand.
struct PrimitiveField {
    std::vector<double> rho;
    std::vector<double> u;
    std::vector<double> p;

    std::size_t size() const { return rho.size(); }
    static PrimitiveField zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

// Cell-averaged conserved state (density, momentum, total energy density).
struct ConservedField {
    std::vector<double> rho;
    std::vector<double> mom;
    std::vector<double> en;

    std::size_t size() const { return rho.size(); }
};

// Positivity floors applied when recovering primitives. Every activation is
// counted so near-vacuum cells are visible to the caller.
struct FloorPolicy {
    double rho_floor = 1e-12;
    double p_floor = 0.0;  // vacuum allowed: p = 0 is a valid state
};

ConservedField primitive_to_conserved(const PrimitiveField& pf, const GasParams& g);

struct PrimitiveRecovery {
    PrimitiveField field;
    std::size_t flooring_events = 0;
};

PrimitiveRecovery conserved_to_primitive(const ConservedField& cf, const GasParams& g,
                                         const FloorPolicy& floors = {});

// K = p * rho^(-gamma); ln K is the hydrodynamic entropy.
std::vector<double> entropy_K(const PrimitiveField& pf, const GasParams& g);

inline double sound_speed(double rho, double p, const GasParams& g) {
    // vacuum-safe: p = 0 gives zero sound speed
    return std::sqrt(g.gamma * p / rho);
}

// One time slice of every integral functional plus pointwise extrema.
// M, P, E, G, F, S follow the usual definitions (mass, momentum, total
// energy, half second moment of density, density-weighted u.x, entropy
// integral of K*rho). diss_e and diss_s are the cooling integrals that feed
// the energy and entropy budgets. bflux_* are the instantaneous boundary
// fluxes of G, F, E and S through the region edges; they vanish for decaying
// fields and close the budget identities on bounded domains.
struct DiagnosticRecord {
    double t = 0.0;
    double M = 0.0;
    double P = 0.0;
    double E = 0.0;
    double E_k = 0.0;
    double E_i = 0.0;
    double G = 0.0;
    double F = 0.0;
    double S = 0.0;
    double K_max = 0.0;
    double rho_max = 0.0;
    double dudx_max = 0.0;
    double dt_current = 0.0;

    double diss_e = 0.0;    // integral of rho^(1/2) p^(3/2)
    double diss_s = 0.0;    // integral of K^(3/2) rho^((gamma+3)/2)
    double bflux_g = 0.0;   // [rho u x^2/2] across region edges
    double bflux_f = 0.0;   // [(rho u^2 + p) x]
    double bflux_e = 0.0;   // [u (en + p)]
    double bflux_s = 0.0;   // [K rho u]
    double region_radius = 0.0;  // radius of the integration region
};

}  // namespace granular
