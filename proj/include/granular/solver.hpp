// Planar 1-D finite-volume integrator: first-order Godunov transport with a
// Rusanov flux, Strang-split around the exact cooling map, configurable
// boundary conditions, and blow-up detection by density/gradient caps or
// time-step underflow. Each run is sequentially deterministic.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "granular/core.hpp"
#include "granular/diagnostics.hpp"
#include "granular/exact.hpp"

namespace granular {

struct HomogeneousInit {
    double rho0 = 1.0;
    double u0 = 0.0;
    double T0 = 1.0;
};

// Compactly supported C^1 polynomial bump amp*(1 - y^2)^2, y = (x-center)/width,
// added per component to the background.
struct BumpSpec {
    double center = 0.0;
    double width = 1.0;  // half-width of the support
    double rho_amp = 0.0;
    double u_amp = 0.0;
    double p_amp = 0.0;
};

// Steady background outside |x| >= bridge_radius, an even/odd C^1 polynomial
// bridge across the center where the profile is not defined, plus the bump.
struct SteadyPerturbedInit {
    SteadyParams steady;
    double bridge_radius = 0.0;
    BumpSpec bump;
};

struct AutomodelInit {
    SteadyParams steady;  // a != 0 for a genuinely traveling profile
};

struct TableInit {
    std::string path;  // CSV x,rho,u,p with one row per cell
};

using InitialCondition = std::variant<HomogeneousInit, SteadyPerturbedInit, AutomodelInit, TableInit>;

enum class BoundaryKind { periodic, outflow, exact_background };

struct TimeControls {
    double t_end = 1.0;
    double cfl_number = 0.45;
    double dt_floor = 1e-12;
};

struct OutputControls {
    double record_interval = 0.1;
    std::vector<double> snapshot_times;
    std::string directory = "out";
};

struct BlowupCaps {
    // absolute caps; when unset the defaults are 1e6 * initial max density
    // and 1e6 / initial dx
    std::optional<double> density_cap;
    std::optional<double> gradient_cap;
    bool expect_blowup = false;
};

struct DiagnosticsConfig {
    RegionMode region = RegionMode::full_domain;
    double epsilon = 0.01;       // deviation threshold for support tracking
    bool virial_checks = true;   // gate envelope checks (b)/(e) in verification
    bool identity_gate = true;   // gate budget identities in verification
    IdentityTolerances identity_tol;
    double s_floor = 0.0;        // positive floor on S for momentum-carrying runs
    double pressure_cut = 1e-10; // cells below this pressure are excluded from K
};

struct Scenario {
    std::string name = "scenario";
    GasParams gas;
    Grid1D grid;
    InitialCondition initial = HomogeneousInit{};
    BoundaryKind boundary = BoundaryKind::periodic;
    TimeControls time;
    OutputControls output;
    FloorPolicy floors;
    BlowupCaps caps;
    DiagnosticsConfig diag;
    bool allow_gamma_outside_range = false;
};

void validate_scenario(const Scenario& sc);

enum class BlowupTrigger { none, dt_underflow, density_cap, gradient_cap };

std::string to_string(BlowupTrigger trigger);

struct BlowupReport {
    bool detected = false;
    BlowupTrigger trigger = BlowupTrigger::none;
    double t_detect = 0.0;
    double t_lo = 0.0;  // last stable time
    double t_hi = 0.0;  // trigger time
};

// Local Lax-Friedrichs (Rusanov) flux for the homogeneous transport part:
// F(L,R) = (F(L)+F(R))/2 - s_max (U_R - U_L)/2 with s_max the larger of
// |u| + c over the two states. Consistent: F(w,w) is the physical flux.
std::array<double, 3> numerical_flux(const PrimitiveState& left, const PrimitiveState& right,
                                     const GasParams& g);

// Exact cooling map applied cellwise with rho and u frozen:
// p -> (p^(-1/2) + lambda sqrt(rho) dt / 2)^(-2). Unconditionally stable,
// p = 0 is a fixed point, dt = 0 is the identity.
PrimitiveField cooling_substep(const PrimitiveField& pf, double dt, const GasParams& g);

// One Strang step: half cooling, full Godunov transport with boundary ghost
// cells, half cooling. t_now positions time-dependent background ghosts;
// flooring_events, when given, accumulates floor activations.
ConservedField step(const ConservedField& cf, double dt, const Scenario& sc, double t_now = 0.0,
                    std::size_t* flooring_events = nullptr);

struct Snapshot {
    double t = 0.0;
    PrimitiveField field;
};

struct RunResult {
    std::vector<DiagnosticRecord> records;
    std::vector<Snapshot> snapshots;
    BlowupReport blowup;
    std::size_t flooring_events = 0;
    double K_plus = 0.0;
    bool has_background = false;
    PrimitiveField background;       // reference table for support tracking
    double initial_support_radius = 0.0;
};

// Advances the scenario with dt = cfl * dx / max(|u| + c), recomputed every
// step and clipped to land exactly on record and snapshot times; emits
// records at the configured interval and halts at t_end or on a blow-up
// trigger. Identical scenarios produce identical outputs.
RunResult run(const Scenario& sc);

// Initial cell-center field of the scenario (exposed for tests and tools).
PrimitiveField initial_field(const Scenario& sc);

// Background reference table (bridged steady state, or the traveling profile
// at t = 0). Only defined for scenarios that carry a background.
PrimitiveField background_table(const Scenario& sc);

}  // namespace granular
