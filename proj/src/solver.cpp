#include "granular/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace granular {

namespace {

double bump_shape(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double w = 1.0 - y * y;
    return w * w;
}

double bump_value(const BumpSpec& b, double amp, double x) {
    return amp * bump_shape((x - b.center) / b.width);
}

struct EdgeState {
    PrimitiveState w;
    double drho_dx;  // spatial derivative of the steady profile at the edge
};

EdgeState steady_edge(const SteadyParams& sp, const GasParams& g, double x) {
    EdgeState e;
    e.w = steady_state_eval(x, sp, g);
    const double z = profile_z_of_xi(std::abs(x), sp, g, sp.z_star(g));
    e.drho_dx = 1.0 / profile_dxi_dz(z, sp, g) / sp.c2;
    return e;
}

// Even/odd C^1 polynomial bridge across [-xb, xb] where the steady profile
// is undefined: rho and p parabolic (even), u cubic (odd), matched in value
// and slope at x = xb.
struct Bridge {
    double xb = 0.0;
    double rho_a = 0.0, rho_b = 0.0;  // rho = rho_a + rho_b x^2
    double p_a = 0.0, p_b = 0.0;
    double u_c1 = 0.0, u_c3 = 0.0;    // u = u_c1 x + u_c3 x^3
};

Bridge make_bridge(const SteadyParams& sp, const GasParams& g, double xb) {
    const EdgeState e = steady_edge(sp, g, xb);
    const double rho = e.w.rho;
    const double drho = e.drho_dx;
    const double du = -sp.c1 * drho / (rho * rho);
    const double dp = sp.c1 * sp.c1 * drho / (rho * rho);

    Bridge br;
    br.xb = xb;
    br.rho_b = drho / (2.0 * xb);
    br.rho_a = rho - br.rho_b * xb * xb;
    br.p_b = dp / (2.0 * xb);
    br.p_a = e.w.p - br.p_b * xb * xb;
    br.u_c3 = (du - e.w.u / xb) / (2.0 * xb * xb);
    br.u_c1 = e.w.u / xb - br.u_c3 * xb * xb;
    return br;
}

PrimitiveState bridge_eval(const Bridge& br, double x) {
    PrimitiveState w;
    w.rho = br.rho_a + br.rho_b * x * x;
    w.p = br.p_a + br.p_b * x * x;
    w.u = br.u_c1 * x + br.u_c3 * x * x * x;
    return w;
}

PrimitiveState background_eval(const Scenario& sc, double x, double t) {
    if (const auto* sp = std::get_if<SteadyPerturbedInit>(&sc.initial)) {
        if (std::abs(x) >= sp->bridge_radius) {
            return steady_state_eval(x, sp->steady, sc.gas);
        }
        return bridge_eval(make_bridge(sp->steady, sc.gas, sp->bridge_radius), x);
    }
    if (const auto* am = std::get_if<AutomodelInit>(&sc.initial)) {
        return automodel_eval(x, t, am->steady, sc.gas);
    }
    throw ValidationError("scenario has no background solution");
}

// Exact cooling applied directly to the conserved state (rho, mom frozen).
void cool_conserved(ConservedField& cf, double dt, const GasParams& g, const FloorPolicy& floors,
                    std::size_t& flooring_events) {
    if (dt == 0.0 || g.lambda == 0.0) return;
    const double gm1 = g.gamma - 1.0;
    const std::size_t n = cf.size();
    for (std::size_t i = 0; i < n; ++i) {
        double rho = cf.rho[i];
        if (rho < floors.rho_floor) {
            rho = floors.rho_floor;
            ++flooring_events;
        }
        const double kin = 0.5 * cf.mom[i] * cf.mom[i] / rho;
        double p = gm1 * (cf.en[i] - kin);
        if (p < floors.p_floor) {
            p = floors.p_floor;
            ++flooring_events;
        }
        if (p <= 0.0) {
            cf.en[i] = kin + p / gm1;
            continue;
        }
        const double b = 1.0 / std::sqrt(p) + 0.5 * g.lambda * std::sqrt(rho) * dt;
        const double p_new = 1.0 / (b * b);
        cf.en[i] += (p_new - p) / gm1;
    }
}

struct GhostPair {
    PrimitiveState left;
    PrimitiveState right;
};

GhostPair ghost_states(const Scenario& sc, const PrimitiveField& prim, double t) {
    const std::size_t n = prim.size();
    GhostPair gp;
    switch (sc.boundary) {
        case BoundaryKind::periodic:
            gp.left = {prim.rho[n - 1], prim.u[n - 1], prim.p[n - 1]};
            gp.right = {prim.rho[0], prim.u[0], prim.p[0]};
            break;
        case BoundaryKind::outflow:
            gp.left = {prim.rho[0], prim.u[0], prim.p[0]};
            gp.right = {prim.rho[n - 1], prim.u[n - 1], prim.p[n - 1]};
            break;
        case BoundaryKind::exact_background: {
            const double dx = sc.grid.dx();
            gp.left = background_eval(sc, sc.grid.x_min - 0.5 * dx, t);
            gp.right = background_eval(sc, sc.grid.x_max + 0.5 * dx, t);
            break;
        }
    }
    return gp;
}

std::array<double, 3> physical_flux(const PrimitiveState& w, const GasParams& g) {
    const double en = w.p / (g.gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
    return {w.rho * w.u, w.rho * w.u * w.u + w.p, w.u * (en + w.p)};
}

// Transport update over one explicit Euler step using interface fluxes.
void hyperbolic_substep(ConservedField& cf, const PrimitiveField& prim, const GhostPair& gp,
                        double dt, double dx, const GasParams& g) {
    const std::size_t n = cf.size();
    std::vector<std::array<double, 3>> flux(n + 1);
    auto cell = [&](std::size_t i) { return PrimitiveState{prim.rho[i], prim.u[i], prim.p[i]}; };
    flux[0] = numerical_flux(gp.left, cell(0), g);
    for (std::size_t i = 1; i < n; ++i) {
        flux[i] = numerical_flux(cell(i - 1), cell(i), g);
    }
    flux[n] = numerical_flux(cell(n - 1), gp.right, g);

    const double r = dt / dx;
    for (std::size_t i = 0; i < n; ++i) {
        cf.rho[i] -= r * (flux[i + 1][0] - flux[i][0]);
        cf.mom[i] -= r * (flux[i + 1][1] - flux[i][1]);
        cf.en[i] -= r * (flux[i + 1][2] - flux[i][2]);
    }
}

double max_signal_speed(const PrimitiveField& prim, const GasParams& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < prim.size(); ++i) {
        s = std::max(s, std::abs(prim.u[i]) + sound_speed(prim.rho[i], prim.p[i], g));
    }
    return s;
}

double max_velocity_gradient(const PrimitiveField& prim, double dx) {
    const std::size_t n = prim.size();
    if (n < 2) return 0.0;
    double m = std::abs(prim.u[1] - prim.u[0]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        m = std::max(m, std::abs(prim.u[i + 1] - prim.u[i - 1]) / (2.0 * dx));
    }
    m = std::max(m, std::abs(prim.u[n - 1] - prim.u[n - 2]) / dx);
    return m;
}

}  // namespace

std::string to_string(BlowupTrigger trigger) {
    switch (trigger) {
        case BlowupTrigger::none: return "none";
        case BlowupTrigger::dt_underflow: return "dt_underflow";
        case BlowupTrigger::density_cap: return "density_cap";
        case BlowupTrigger::gradient_cap: return "gradient_cap";
    }
    return "none";
}

std::array<double, 3> numerical_flux(const PrimitiveState& left, const PrimitiveState& right,
                                     const GasParams& g) {
    const auto fl = physical_flux(left, g);
    const auto fr = physical_flux(right, g);
    const double sl = std::abs(left.u) + sound_speed(left.rho, left.p, g);
    const double sr = std::abs(right.u) + sound_speed(right.rho, right.p, g);
    const double smax = std::max(sl, sr);

    const double gm1 = g.gamma - 1.0;
    const double el = left.p / gm1 + 0.5 * left.rho * left.u * left.u;
    const double er = right.p / gm1 + 0.5 * right.rho * right.u * right.u;
    return {0.5 * (fl[0] + fr[0]) - 0.5 * smax * (right.rho - left.rho),
            0.5 * (fl[1] + fr[1]) - 0.5 * smax * (right.rho * right.u - left.rho * left.u),
            0.5 * (fl[2] + fr[2]) - 0.5 * smax * (er - el)};
}

PrimitiveField cooling_substep(const PrimitiveField& pf, double dt, const GasParams& g) {
    PrimitiveField out = pf;
    if (dt == 0.0 || g.lambda == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double p = out.p[i];
        if (p <= 0.0) continue;  // vacuum is a fixed point
        const double b = 1.0 / std::sqrt(p) + 0.5 * g.lambda * std::sqrt(out.rho[i]) * dt;
        out.p[i] = 1.0 / (b * b);
    }
    return out;
}

ConservedField step(const ConservedField& cf, double dt, const Scenario& sc, double t_now,
                    std::size_t* flooring_events) {
    ConservedField out = cf;
    std::size_t floored = 0;
    cool_conserved(out, 0.5 * dt, sc.gas, sc.floors, floored);
    const auto rec = conserved_to_primitive(out, sc.gas, sc.floors);
    floored += rec.flooring_events;
    const auto gp = ghost_states(sc, rec.field, t_now + 0.5 * dt);
    hyperbolic_substep(out, rec.field, gp, dt, sc.grid.dx(), sc.gas);
    cool_conserved(out, 0.5 * dt, sc.gas, sc.floors, floored);
    if (flooring_events) *flooring_events += floored;
    return out;
}

PrimitiveField initial_field(const Scenario& sc) {
    const std::size_t n = sc.grid.num_cells;
    PrimitiveField pf = PrimitiveField::zeros(n);

    if (const auto* h = std::get_if<HomogeneousInit>(&sc.initial)) {
        for (std::size_t i = 0; i < n; ++i) {
            pf.rho[i] = h->rho0;
            pf.u[i] = h->u0;
            pf.p[i] = h->rho0 * h->T0;
        }
        return pf;
    }
    if (const auto* spi = std::get_if<SteadyPerturbedInit>(&sc.initial)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = sc.grid.center(i);
            const PrimitiveState bg = background_eval(sc, x, 0.0);
            pf.rho[i] = bg.rho + bump_value(spi->bump, spi->bump.rho_amp, x);
            pf.u[i] = bg.u + bump_value(spi->bump, spi->bump.u_amp, x);
            pf.p[i] = bg.p + bump_value(spi->bump, spi->bump.p_amp, x);
            if (!(pf.rho[i] > 0.0) || pf.p[i] < 0.0) {
                throw ValidationError("steady_perturbed: bump drives the state non-physical at x=" +
                                      std::to_string(x));
            }
        }
        return pf;
    }
    if (const auto* am = std::get_if<AutomodelInit>(&sc.initial)) {
        for (std::size_t i = 0; i < n; ++i) {
            const PrimitiveState w = automodel_eval(sc.grid.center(i), 0.0, am->steady, sc.gas);
            pf.rho[i] = w.rho;
            pf.u[i] = w.u;
            pf.p[i] = w.p;
        }
        return pf;
    }
    const auto& tab = std::get<TableInit>(sc.initial);
    std::ifstream in(tab.path);
    if (!in) {
        throw ValidationError("table initial condition: cannot open " + tab.path);
    }
    std::string line;
    std::getline(in, line);  // header x,rho,u,p
    std::size_t i = 0;
    while (std::getline(in, line) && i < n) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x;
        if (!(ss >> x >> pf.rho[i] >> pf.u[i] >> pf.p[i])) {
            throw ValidationError("table initial condition: malformed row " + std::to_string(i));
        }
        ++i;
    }
    if (i != n) {
        throw ValidationError("table initial condition: expected " + std::to_string(n) +
                              " rows, got " + std::to_string(i));
    }
    return pf;
}

PrimitiveField background_table(const Scenario& sc) {
    const std::size_t n = sc.grid.num_cells;
    PrimitiveField pf = PrimitiveField::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PrimitiveState w = background_eval(sc, sc.grid.center(i), 0.0);
        pf.rho[i] = w.rho;
        pf.u[i] = w.u;
        pf.p[i] = w.p;
    }
    return pf;
}

void validate_scenario(const Scenario& sc) {
    validate(sc.gas);
    validate(sc.grid);
    if (sc.gas.dim != 1) {
        throw ValidationError("solver: only planar dim = 1 runs are supported");
    }
    const double gamma_cap = 1.0 + 2.0 / static_cast<double>(sc.gas.dim);
    if (!sc.allow_gamma_outside_range && sc.gas.gamma > gamma_cap) {
        throw ValidationError("gamma = " + std::to_string(sc.gas.gamma) +
                              " outside (1, 1 + 2/dim]; the inequality suite assumes this range "
                              "(set allow_gamma_outside_range to override)");
    }
    if (!(sc.time.cfl_number > 0.0 && sc.time.cfl_number < 1.0)) {
        throw ValidationError("time: cfl_number must lie in (0, 1)");
    }
    if (!(sc.time.t_end > 0.0)) {
        throw ValidationError("time: t_end must be positive");
    }
    if (!(sc.time.dt_floor > 0.0)) {
        throw ValidationError("time: dt_floor must be positive");
    }
    if (!(sc.output.record_interval > 0.0)) {
        throw ValidationError("output: record_interval must be positive");
    }
    for (double ts : sc.output.snapshot_times) {
        if (ts < 0.0 || ts > sc.time.t_end) {
            throw ValidationError("output: snapshot time outside [0, t_end]");
        }
    }

    if (const auto* spi = std::get_if<SteadyPerturbedInit>(&sc.initial)) {
        validate(spi->steady, sc.gas);
        if (!(spi->bridge_radius > spi->steady.x_plus)) {
            throw ValidationError("steady_perturbed: bridge_radius must exceed x_plus");
        }
        const double lo = spi->bump.center - spi->bump.width;
        const double hi = spi->bump.center + spi->bump.width;
        if (!(spi->bump.width > 0.0) || lo <= sc.grid.x_min || hi >= sc.grid.x_max) {
            throw ValidationError("steady_perturbed: bump support must lie strictly inside "
                                  "the domain");
        }
        if (std::abs(sc.grid.x_min + sc.grid.x_max) > 1e-9 * (sc.grid.x_max - sc.grid.x_min)) {
            throw ValidationError("steady_perturbed: domain must be symmetric about the origin");
        }
    } else if (const auto* am = std::get_if<AutomodelInit>(&sc.initial)) {
        validate(am->steady, sc.gas);
        // branch coverage for every cell and ghost over the whole run
        const double dx = sc.grid.dx();
        const double xi_start = profile_xi_formula(am->steady.z_star(sc.gas), am->steady, sc.gas);
        const double shift = std::max(am->steady.a, 0.0) * sc.time.t_end;
        if (sc.grid.x_min - 0.5 * dx - shift < xi_start) {
            throw ValidationError("automodel: domain leaves the profile branch during the run "
                                  "(xi would drop below the branch start)");
        }
    } else if (std::holds_alternative<TableInit>(sc.initial) &&
               sc.boundary == BoundaryKind::exact_background) {
        throw ValidationError("exact_background boundaries need a steady or automodel initial "
                              "condition");
    } else if (std::holds_alternative<HomogeneousInit>(sc.initial) &&
               sc.boundary == BoundaryKind::exact_background) {
        throw ValidationError("exact_background boundaries need a steady or automodel initial "
                              "condition");
    }
    if (sc.diag.region == RegionMode::tracked_support &&
        !std::holds_alternative<SteadyPerturbedInit>(sc.initial)) {
        throw ValidationError("tracked_support diagnostics require a steady_perturbed scenario");
    }
}

RunResult run(const Scenario& sc) {
    validate_scenario(sc);
    RunResult out;
    const Grid1D& grid = sc.grid;
    const double dx = grid.dx();

    PrimitiveField prim = initial_field(sc);
    ConservedField cons = primitive_to_conserved(prim, sc.gas);

    if (std::holds_alternative<SteadyPerturbedInit>(sc.initial) ||
        std::holds_alternative<AutomodelInit>(sc.initial)) {
        out.background = background_table(sc);
        out.has_background = true;
    }

    // fixed constants of the run
    const auto K0 = entropy_K(prim, sc.gas);
    for (std::size_t i = 0; i < grid.num_cells; ++i) {
        if (prim.p[i] > sc.diag.pressure_cut) out.K_plus = std::max(out.K_plus, K0[i]);
    }
    double rho_max0 = 0.0;
    for (double r : prim.rho) rho_max0 = std::max(rho_max0, r);
    const double density_cap = sc.caps.density_cap.value_or(1e6 * rho_max0);
    const double gradient_cap = sc.caps.gradient_cap.value_or(1e6 / dx);

    if (const auto* spi = std::get_if<SteadyPerturbedInit>(&sc.initial)) {
        out.initial_support_radius =
            std::max(std::abs(spi->bump.center) + spi->bump.width, spi->bridge_radius);
    }

    auto current_region = [&](const PrimitiveField& field) {
        if (sc.diag.region == RegionMode::tracked_support && out.has_background) {
            return track_support(field, out.background, grid, sc.diag.epsilon,
                                 out.initial_support_radius);
        }
        return full_region(grid);
    };

    const double h = sc.output.record_interval;
    std::vector<double> snaps = sc.output.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    std::size_t next_record = 0;

    double t = 0.0;
    double t_prev = 0.0;
    double dt_cfl = 0.0;
    const double t_end = sc.time.t_end;
    const double t_eps = 1e-12 * std::max(1.0, t_end);

    auto emit_record = [&](double dt_for_record) {
        DiagnosticRecord rec =
            functionals(prim, grid, sc.gas, current_region(prim), sc.diag.pressure_cut);
        rec.t = t;
        rec.dt_current = dt_for_record;
        out.records.push_back(rec);
    };

    while (true) {
        // blow-up triggers on the current state
        double rho_max = 0.0;
        for (double r : prim.rho) rho_max = std::max(rho_max, r);
        const double dudx = max_velocity_gradient(prim, dx);
        if (rho_max > density_cap || dudx > gradient_cap) {
            out.blowup.detected = true;
            out.blowup.trigger =
                rho_max > density_cap ? BlowupTrigger::density_cap : BlowupTrigger::gradient_cap;
            out.blowup.t_detect = t;
            out.blowup.t_lo = t_prev;
            out.blowup.t_hi = t;
            break;
        }

        // scheduled outputs at the current time
        if (next_record * h <= t + t_eps) {
            emit_record(dt_cfl);
            ++next_record;
        }
        while (next_snap < snaps.size() && snaps[next_snap] <= t + t_eps) {
            out.snapshots.push_back({t, prim});
            ++next_snap;
        }
        if (t >= t_end - t_eps) break;

        // CFL-limited step, clipped to the next scheduled time
        const double smax = max_signal_speed(prim, sc.gas);
        dt_cfl = (smax > 0.0) ? sc.time.cfl_number * dx / smax
                              : sc.time.cfl_number * dx;  // static field: any dt works
        double t_next_event = std::min(static_cast<double>(next_record) * h, t_end);
        if (next_snap < snaps.size()) t_next_event = std::min(t_next_event, snaps[next_snap]);
        double dt = std::min(dt_cfl, t_next_event - t);
        const bool lands_on_event = (t + dt >= t_next_event - t_eps);
        if (lands_on_event) dt = t_next_event - t;

        if (dt < sc.time.dt_floor) {
            out.blowup.detected = true;
            out.blowup.trigger = BlowupTrigger::dt_underflow;
            out.blowup.t_detect = t;
            out.blowup.t_lo = t_prev;
            out.blowup.t_hi = t;
            break;
        }

        cons = step(cons, dt, sc, t, &out.flooring_events);
        t_prev = t;
        t = lands_on_event ? t_next_event : t + dt;

        const auto rec = conserved_to_primitive(cons, sc.gas, sc.floors);
        prim = rec.field;
    }

    return out;
}

}  // namespace granular
