// Quadrature of the integral functionals and automated verification of the
// budget identities and inequality estimates along a run. All functionals
// use the midpoint rule, matching the cell-averaged first-order fields.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "granular/core.hpp"

namespace granular {

enum class RegionMode { full_domain, tracked_support };

// Integration region: the whole grid, or the smallest symmetric interval
// [-R, R] containing every cell that deviates from a reference background.
struct Region {
    RegionMode mode = RegionMode::full_domain;
    double radius = 0.0;
    std::size_t i_begin = 0;  // cell range [i_begin, i_end)
    std::size_t i_end = 0;
};

Region full_region(const Grid1D& grid);
Region region_from_radius(const Grid1D& grid, double radius);

// Outcome of one inequality or residual check. satisfied <=> margin >= -tolerance.
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = true;
    double margin = 0.0;  // rhs - lhs
    double tolerance = 0.0;
};

InequalityReport make_report(std::string name, double lhs, double rhs, double tolerance);

// Midpoint-rule functionals of the field over the region, plus pointwise
// extrema. K and its integrals only count cells with p above pressure_cut,
// so the vacuum tail of the steady profile cannot contaminate the entropy
// statistics. t and dt_current are left for the caller to fill.
DiagnosticRecord functionals(const PrimitiveField& pf, const Grid1D& grid, const GasParams& g,
                             const Region& region, double pressure_cut = 1e-10);

struct IdentityRow {
    double t;
    double lhs;  // central-difference time derivative
    double rhs;  // functional side, boundary fluxes included
};

struct IdentitySeries {
    std::string name;
    std::vector<IdentityRow> rows;
    double max_abs_residual = 0.0;
    double scale = 0.0;  // max over rows of max(|lhs|, |rhs|)
};

// The four budget identities along a uniformly spaced record series:
// dG/dt = F, dF/dt = 2*E_k + n*(gamma-1)*E_i, dE/dt = -lambda/(gamma-1)*diss_e,
// dS/dt = -lambda*diss_s, each corrected by the recorded boundary fluxes so
// they close on bounded domains. Throws InsufficientSeries for fewer than
// three records.
std::vector<IdentitySeries> identity_residuals(const std::vector<DiagnosticRecord>& series,
                                               const GasParams& g);

struct IdentityTolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-6;  // resolution-dependent, scenario-level config
};

// One report per identity; lhs is the worst absolute residual, rhs the
// threshold abs_tol + rel_tol * scale.
std::vector<InequalityReport> check_identities(const std::vector<DiagnosticRecord>& series,
                                               const GasParams& g,
                                               const IdentityTolerances& tol = {});

struct InequalityTolerances {
    double scale = 1e-9;  // tolerance = scale * (1 + |lhs| + |rhs|)
};

// Pointwise estimates against a reference (initial) record:
//   (a) E_k >= P^2/(2M)                       (Cauchy-Schwarz, current record)
//   (b) P0^2/(2M0) t^2 + F0 t + G0 <= G(t) <= E0 t^2 + F0 t + G0
//   (c) Q = 4 G E - F^2 > 0
//   (d) E_i <= Q/(4G)
//   (e) E_i <= C2 / G^(n(gamma-1)/2), C2 from the initial record; only
//       evaluated once F(t) > 0
//   (f) cooling envelope E_i(t) <= (y0^(-1/q) + lambda C1 t / q)^(-q) with
//       q = 2(gamma-1)/(gamma+1) and C1 the Jensen constant built from K_plus
//       and M; informational (reported, never gating)
InequalityReport check_kinetic_vs_momentum(const DiagnosticRecord& r,
                                           const InequalityTolerances& tol = {});
std::vector<InequalityReport> check_inequalities(const DiagnosticRecord& record,
                                                 const DiagnosticRecord& init, const GasParams& g,
                                                 double K_plus,
                                                 const InequalityTolerances& tol = {});

// Moment interpolation inequality for f = K*rho:
//   ||f||_L1 <= C * ||f||_Lgamma^(2g/D) * ||f||_L1(|x|^2 dx)^(n(g-1)/D),
// D = (n+2)gamma - n, with the explicit two-term constant C.
InequalityReport moment_interpolation_check(const PrimitiveField& pf, const Grid1D& grid,
                                            const GasParams& g,
                                            const InequalityTolerances& tol = {});

// Smallest symmetric interval containing all cells whose relative deviation
// from the background exceeds epsilon; an empty perturbation degenerates to
// the given initial support radius.
Region track_support(const PrimitiveField& pf, const PrimitiveField& background,
                     const Grid1D& grid, double epsilon, double initial_radius);

// Least-squares fit of 1/dudx_max over the trailing quartile of the series;
// a strongly linear decay pins the blow-up time near the fitted root
// (1/|alpha| decays linearly when alpha' <= -alpha^2). Returns the root
// bracketed by one record spacing, or nullopt without a blow-up trend.
std::optional<std::pair<double, double>> estimate_blowup(
    const std::vector<DiagnosticRecord>& series);

// Momentum hypothesis of the perturbed-steady breakdown statement:
// P(0)^2 > 8 M(0) c2 / k, reported so blow-up observations can be
// correlated with the sufficient condition.
InequalityReport theorem2_hypothesis(const DiagnosticRecord& init, double k, double c2);

}  // namespace granular
