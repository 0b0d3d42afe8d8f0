#include "granular/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/numerics.hpp"

namespace granular {

Region full_region(const Grid1D& grid) {
    Region r;
    r.mode = RegionMode::full_domain;
    r.radius = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
    r.i_begin = 0;
    r.i_end = grid.num_cells;
    return r;
}

Region region_from_radius(const Grid1D& grid, double radius) {
    Region r;
    r.mode = RegionMode::tracked_support;
    r.radius = radius;
    const double dx = grid.dx();
    // include every cell whose center lies inside [-R, R]
    std::size_t lo = grid.num_cells, hi = 0;
    for (std::size_t i = 0; i < grid.num_cells; ++i) {
        if (std::abs(grid.center(i)) <= radius + 0.5 * dx * 1e-12) {
            lo = std::min(lo, i);
            hi = std::max(hi, i + 1);
        }
    }
    if (lo >= hi) {
        lo = hi = grid.num_cells / 2;
    }
    r.i_begin = lo;
    r.i_end = hi;
    return r;
}

InequalityReport make_report(std::string name, double lhs, double rhs, double tolerance) {
    InequalityReport rep;
    rep.name = std::move(name);
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.margin = rhs - lhs;
    rep.tolerance = tolerance;
    rep.satisfied = rep.margin >= -tolerance;
    return rep;
}

DiagnosticRecord functionals(const PrimitiveField& pf, const Grid1D& grid, const GasParams& g,
                             const Region& region, double pressure_cut) {
    DiagnosticRecord rec;
    const double dx = grid.dx();
    const double gm1 = g.gamma - 1.0;
    const std::size_t n = grid.num_cells;
    const std::size_t lo = region.i_begin;
    const std::size_t hi = std::min<std::size_t>(region.i_end, n);

    for (std::size_t i = lo; i < hi; ++i) {
        const double x = grid.center(i);
        const double rho = pf.rho[i];
        const double u = pf.u[i];
        const double p = pf.p[i];
        const double K = p * std::pow(rho, -g.gamma);

        rec.M += rho * dx;
        rec.P += rho * u * dx;
        rec.E_k += 0.5 * rho * u * u * dx;
        rec.E_i += p / gm1 * dx;
        rec.G += 0.5 * rho * x * x * dx;
        rec.F += rho * u * x * dx;
        rec.diss_e += std::sqrt(rho) * p * std::sqrt(p) * dx;
        rec.S += K * rho * dx;
        rec.diss_s += std::pow(K, 1.5) * std::pow(rho, 0.5 * (g.gamma + 3.0)) * dx;
        rec.rho_max = std::max(rec.rho_max, rho);
        if (p > pressure_cut) {
            rec.K_max = std::max(rec.K_max, K);
        }

        // |du/dx| by central differences, one-sided at the grid edges
        double dudx;
        if (i == 0) {
            dudx = (n > 1) ? (pf.u[1] - pf.u[0]) / dx : 0.0;
        } else if (i == n - 1) {
            dudx = (pf.u[n - 1] - pf.u[n - 2]) / dx;
        } else {
            dudx = (pf.u[i + 1] - pf.u[i - 1]) / (2.0 * dx);
        }
        rec.dudx_max = std::max(rec.dudx_max, std::abs(dudx));
    }
    rec.E = rec.E_k + rec.E_i;

    // instantaneous boundary fluxes of G, F, E, S through the region faces,
    // first-order: edge-cell values at the face coordinates
    if (hi > lo) {
        const double x_l = grid.x_min + static_cast<double>(lo) * dx;
        const double x_r = grid.x_min + static_cast<double>(hi) * dx;
        auto face = [&](std::size_t i, double x, double sign) {
            const double rho = pf.rho[i];
            const double u = pf.u[i];
            const double p = pf.p[i];
            const double K = p * std::pow(rho, -g.gamma);
            const double en = p / gm1 + 0.5 * rho * u * u;
            rec.bflux_g += sign * rho * u * 0.5 * x * x;
            rec.bflux_f += sign * (rho * u * u + p) * x;
            rec.bflux_e += sign * u * (en + p);
            rec.bflux_s += sign * K * rho * u;
        };
        face(hi - 1, x_r, +1.0);
        face(lo, x_l, -1.0);
    }
    rec.region_radius = region.radius;
    return rec;
}

std::vector<IdentitySeries> identity_residuals(const std::vector<DiagnosticRecord>& series,
                                               const GasParams& g) {
    const std::size_t n = series.size();
    if (n < 3) {
        throw InsufficientSeries("identity check needs at least 3 records, got " +
                                 std::to_string(n));
    }
    const double h = series[1].t - series[0].t;
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs(series[j].t - series[j - 1].t - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw ValidationError("identity check requires uniform record spacing");
        }
    }

    const double nd = static_cast<double>(g.dim);
    const double gm1 = g.gamma - 1.0;
    std::vector<IdentitySeries> out(4);
    out[0].name = "dG_dt_vs_F";
    out[1].name = "dF_dt_vs_energy";
    out[2].name = "dE_dt_vs_cooling";
    out[3].name = "dS_dt_vs_cooling";

    auto push = [&](IdentitySeries& s, double t, double lhs, double rhs) {
        s.rows.push_back({t, lhs, rhs});
        s.max_abs_residual = std::max(s.max_abs_residual, std::abs(lhs - rhs));
        s.scale = std::max({s.scale, std::abs(lhs), std::abs(rhs)});
    };

    for (std::size_t j = 1; j + 1 < n; ++j) {
        const auto& a = series[j - 1];
        const auto& b = series[j];
        const auto& c = series[j + 1];
        push(out[0], b.t, (c.G - a.G) / (2.0 * h), b.F - b.bflux_g);
        push(out[1], b.t, (c.F - a.F) / (2.0 * h),
             2.0 * b.E_k + nd * gm1 * b.E_i - b.bflux_f);
        push(out[2], b.t, (c.E - a.E) / (2.0 * h),
             -g.lambda / gm1 * b.diss_e - b.bflux_e);
        push(out[3], b.t, (c.S - a.S) / (2.0 * h), -g.lambda * b.diss_s - b.bflux_s);
    }
    return out;
}

std::vector<InequalityReport> check_identities(const std::vector<DiagnosticRecord>& series,
                                               const GasParams& g,
                                               const IdentityTolerances& tol) {
    std::vector<InequalityReport> reports;
    for (const auto& s : identity_residuals(series, g)) {
        const double threshold = tol.abs_tol + tol.rel_tol * s.scale;
        reports.push_back(make_report(s.name, s.max_abs_residual, threshold, 0.0));
    }
    return reports;
}

InequalityReport check_kinetic_vs_momentum(const DiagnosticRecord& r,
                                           const InequalityTolerances& tol) {
    const double lhs = (r.M > 0.0) ? r.P * r.P / (2.0 * r.M) : 0.0;
    return make_report("Ek_vs_momentum", lhs, r.E_k, tol.scale * (1.0 + std::abs(lhs) + r.E_k));
}

std::vector<InequalityReport> check_inequalities(const DiagnosticRecord& record,
                                                 const DiagnosticRecord& init, const GasParams& g,
                                                 double K_plus,
                                                 const InequalityTolerances& tol) {
    std::vector<InequalityReport> out;
    auto tval = [&](double lhs, double rhs) {
        return tol.scale * (1.0 + std::abs(lhs) + std::abs(rhs));
    };
    const double t = record.t - init.t;
    const double nd = static_cast<double>(g.dim);
    const double gm1 = g.gamma - 1.0;

    // (a) kinetic energy dominates the momentum mean
    out.push_back(check_kinetic_vs_momentum(record, tol));

    // (b) two-sided parabola envelope for the momentum of inertia
    const double lower = init.P * init.P / (2.0 * init.M) * t * t + init.F * t + init.G;
    const double upper = init.E * t * t + init.F * t + init.G;
    out.push_back(make_report("G_lower_envelope", lower, record.G, tval(lower, record.G)));
    out.push_back(make_report("G_upper_envelope", record.G, upper, tval(record.G, upper)));

    // (c) Q = 4 G E - F^2 stays positive away from vacuum
    const double Q = 4.0 * record.G * record.E - record.F * record.F;
    out.push_back(make_report("Q_positive", 0.0, Q, tval(0.0, Q)));

    // (d) internal energy bounded by Q/(4G)
    if (record.G > 0.0) {
        const double rhs = Q / (4.0 * record.G);
        out.push_back(make_report("Ei_vs_Q", record.E_i, rhs, tval(record.E_i, rhs)));
    }

    // (e) decay of E_i against the momentum-of-inertia power law, active
    // once F has turned positive
    if (record.F > 0.0 && init.G > 0.0 && record.G > 0.0) {
        const double expo = nd * gm1 / 2.0;
        const double Q0 = 4.0 * init.G * init.E - init.F * init.F;
        const double C2 = 0.25 * Q0 * std::pow(init.G, expo);
        const double rhs = C2 / std::pow(record.G, expo);
        out.push_back(make_report("Ei_power_envelope", record.E_i, rhs, tval(record.E_i, rhs)));
    }

    // (f) cooling envelope from the energy dissipation estimate; needs the
    // Jensen constant, so K_plus and M must be positive
    const double y0 = init.E - init.P * init.P / (2.0 * init.M);
    if (K_plus > 0.0 && init.M > 0.0 && y0 > 0.0 && g.lambda > 0.0) {
        const double C1 = std::pow(K_plus, -1.0 / gm1) *
                          std::pow(gm1, (3.0 * g.gamma - 1.0) / (2.0 * gm1)) *
                          std::pow(init.M, -(g.gamma + 1.0) / (2.0 * gm1));
        const double q = 2.0 * gm1 / (g.gamma + 1.0);
        const double base = std::pow(y0, -1.0 / q) + g.lambda * C1 * t / q;
        const double rhs = std::pow(base, -q);
        out.push_back(
            make_report("Ei_cooling_envelope", record.E_i, rhs, tval(record.E_i, rhs)));
    }
    return out;
}

InequalityReport moment_interpolation_check(const PrimitiveField& pf, const Grid1D& grid,
                                            const GasParams& g,
                                            const InequalityTolerances& tol) {
    const double dx = grid.dx();
    const double nd = static_cast<double>(g.dim);
    double n1 = 0.0, ng = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < grid.num_cells; ++i) {
        const double f = pf.p[i] * std::pow(pf.rho[i], 1.0 - g.gamma);  // K * rho
        const double x = grid.center(i);
        n1 += f * dx;
        ng += std::pow(f, g.gamma) * dx;
        n2 += f * x * x * dx;
    }
    ng = std::pow(ng, 1.0 / g.gamma);

    const double D = (nd + 2.0) * g.gamma - nd;
    const double expo_g = 2.0 * g.gamma / D;
    const double expo_2 = nd * (g.gamma - 1.0) / D;
    const double beta = 2.0 * g.gamma / (nd * (g.gamma - 1.0));
    const double C = std::pow(beta, expo_2) + std::pow(beta, -expo_g);
    const double rhs = C * std::pow(ng, expo_g) * std::pow(n2, expo_2);
    return make_report("moment_interpolation", n1, rhs,
                       tol.scale * (1.0 + std::abs(n1) + std::abs(rhs)));
}

Region track_support(const PrimitiveField& pf, const PrimitiveField& background,
                     const Grid1D& grid, double epsilon, double initial_radius) {
    const std::size_t n = grid.num_cells;
    // per-component reference scales stabilize the relative deviation where
    // the background passes through zero
    double ref_rho = 0.0, ref_u = 0.0, ref_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ref_rho += std::abs(background.rho[i]);
        ref_u += std::abs(background.u[i]);
        ref_p += std::abs(background.p[i]);
    }
    const double nn = static_cast<double>(n);
    ref_rho = std::max(ref_rho / nn, 1e-300);
    ref_u = std::max(ref_u / nn, 1e-300);
    ref_p = std::max(ref_p / nn, 1e-300);

    double radius = -1.0;
    const double dx = grid.dx();
    for (std::size_t i = 0; i < n; ++i) {
        const double d_rho =
            std::abs(pf.rho[i] - background.rho[i]) / std::max(std::abs(background.rho[i]), ref_rho);
        const double d_u =
            std::abs(pf.u[i] - background.u[i]) / std::max(std::abs(background.u[i]), ref_u);
        const double d_p =
            std::abs(pf.p[i] - background.p[i]) / std::max(std::abs(background.p[i]), ref_p);
        if (std::max({d_rho, d_u, d_p}) > epsilon) {
            radius = std::max(radius, std::abs(grid.center(i)) + 0.5 * dx);
        }
    }
    if (radius < 0.0) radius = initial_radius;  // empty perturbation
    return region_from_radius(grid, radius);
}

std::optional<std::pair<double, double>> estimate_blowup(
    const std::vector<DiagnosticRecord>& series) {
    const std::size_t n = series.size();
    if (n < 4) return std::nullopt;
    const std::size_t m = std::max<std::size_t>(4, n / 4);
    const std::size_t start = n - m;

    std::vector<double> ts, ys;
    for (std::size_t j = start; j < n; ++j) {
        if (!(series[j].dudx_max > 0.0)) return std::nullopt;
        ts.push_back(series[j].t);
        ys.push_back(1.0 / series[j].dudx_max);
    }
    const auto fit = fit_line(ts, ys);
    if (!fit || !(fit->slope < 0.0) || !(fit->correlation < -0.95)) return std::nullopt;
    const double root = -fit->intercept / fit->slope;
    const double h = series[1].t - series[0].t;
    return std::make_pair(root - h, root + h);
}

InequalityReport theorem2_hypothesis(const DiagnosticRecord& init, double k, double c2) {
    const double lhs = 8.0 * init.M * c2 / k;
    const double rhs = init.P * init.P;
    return make_report("theorem2_momentum_hypothesis", lhs, rhs, 0.0);
}

}  // namespace granular
