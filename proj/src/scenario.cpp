#include "granular/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace granular {

using nlohmann::json;

namespace {

std::string line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') ++line;
    }
    return std::to_string(line);
}

double require_number(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ValidationError(ctx + ": missing or non-numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    return (j.contains(key) && j.at(key).is_number()) ? j.at(key).get<double>() : fallback;
}

SteadyParams parse_steady_block(const json& j, const GasParams& g, bool automodel,
                                const std::string& ctx) {
    if (automodel) {
        SteadyParams sp;
        sp.c1 = require_number(j, "c1", ctx);
        sp.c2 = require_number(j, "c2", ctx);
        sp.a = require_number(j, "a", ctx);
        validate(sp, g);
        if (j.contains("xi_anchor")) {
            return make_automodel_params(sp.c1, sp.c2, sp.a, j.at("xi_anchor").get<double>(), g);
        }
        sp.c3 = number_or(j, "c3", 0.0);
        return sp;
    }
    const double k = require_number(j, "k", ctx);
    const double c2 = require_number(j, "c2", ctx);
    const double x_plus = number_or(j, "x_plus", 0.0);
    SteadyParams probe{k, c2, 0.0, 0.0, x_plus};
    validate(probe, g);  // reports c2 - a*c1 <= 0 and k <= 0 with context
    SteadyParams sp = make_steady_params(k, c2, x_plus, g);
    if (j.contains("c3")) sp.c3 = j.at("c3").get<double>();
    return sp;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(name + ":" + line_of_offset(text, e.byte) +
                              ": JSON parse error: " + e.what());
    }

    static const char* known[] = {"name",   "gas",   "grid",  "initial",
                                  "boundary", "time",  "output", "floors",
                                  "caps",   "diagnostics", "allow_gamma_outside_range"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return it.key() == k;
            }) == std::end(known)) {
            throw ValidationError(name + ": unknown top-level key '" + it.key() + "'");
        }
    }

    Scenario sc;
    sc.name = j.value("name", name);
    sc.allow_gamma_outside_range = j.value("allow_gamma_outside_range", false);

    const json gas = j.value("gas", json::object());
    sc.gas.gamma = number_or(gas, "gamma", 5.0 / 3.0);
    sc.gas.lambda = number_or(gas, "lambda", 1.0);
    sc.gas.dim = static_cast<int>(number_or(gas, "dim", 1));

    if (!j.contains("grid")) throw ValidationError(sc.name + ": missing 'grid' block");
    const json& grid = j.at("grid");
    sc.grid.x_min = require_number(grid, "x_min", sc.name + ".grid");
    sc.grid.x_max = require_number(grid, "x_max", sc.name + ".grid");
    sc.grid.num_cells = static_cast<std::size_t>(require_number(grid, "num_cells", sc.name + ".grid"));

    if (!j.contains("initial")) throw ValidationError(sc.name + ": missing 'initial' block");
    const json& init = j.at("initial");
    const std::string type = init.value("type", "");
    bool tracked_default = false;
    if (type == "homogeneous") {
        HomogeneousInit h;
        h.rho0 = number_or(init, "rho0", 1.0);
        h.u0 = number_or(init, "u0", 0.0);
        h.T0 = number_or(init, "T0", 1.0);
        if (!(h.rho0 > 0.0) || !(h.T0 >= 0.0)) {
            throw ValidationError(sc.name + ": homogeneous initial state needs rho0 > 0, T0 >= 0");
        }
        sc.initial = h;
    } else if (type == "steady_perturbed") {
        SteadyPerturbedInit s;
        if (!init.contains("steady")) {
            throw ValidationError(sc.name + ": steady_perturbed needs a 'steady' block");
        }
        s.steady = parse_steady_block(init.at("steady"), sc.gas, false, sc.name + ".steady");
        s.bridge_radius = number_or(init, "bridge_radius", std::max(2.0 * s.steady.x_plus,
                                                                    4.0 * sc.grid.dx()));
        const json bump = init.value("bump", json::object());
        s.bump.center = number_or(bump, "center", 0.0);
        s.bump.width = number_or(bump, "width", 1.0);
        s.bump.rho_amp = number_or(bump, "rho_amp", 0.0);
        s.bump.u_amp = number_or(bump, "u_amp", 0.0);
        s.bump.p_amp = number_or(bump, "p_amp", 0.0);
        sc.initial = s;
        tracked_default = true;
    } else if (type == "automodel") {
        AutomodelInit a;
        if (!init.contains("steady")) {
            throw ValidationError(sc.name + ": automodel needs a 'steady' block");
        }
        a.steady = parse_steady_block(init.at("steady"), sc.gas, true, sc.name + ".steady");
        sc.initial = a;
    } else if (type == "table") {
        TableInit t;
        if (!init.contains("path")) {
            throw ValidationError(sc.name + ": table initial condition needs 'path'");
        }
        t.path = init.at("path").get<std::string>();
        sc.initial = t;
    } else {
        throw ValidationError(sc.name + ": initial.type must be one of homogeneous, "
                              "steady_perturbed, automodel, table");
    }

    const std::string boundary = j.value("boundary", "periodic");
    if (boundary == "periodic") {
        sc.boundary = BoundaryKind::periodic;
    } else if (boundary == "outflow") {
        sc.boundary = BoundaryKind::outflow;
    } else if (boundary == "exact_background") {
        sc.boundary = BoundaryKind::exact_background;
    } else {
        throw ValidationError(sc.name + ": boundary must be periodic, outflow or "
                              "exact_background");
    }

    if (!j.contains("time")) throw ValidationError(sc.name + ": missing 'time' block");
    const json& time = j.at("time");
    sc.time.t_end = require_number(time, "t_end", sc.name + ".time");
    sc.time.cfl_number = number_or(time, "cfl_number", 0.45);
    sc.time.dt_floor = number_or(time, "dt_floor", 1e-12);

    const json output = j.value("output", json::object());
    sc.output.record_interval = number_or(output, "record_interval", sc.time.t_end / 100.0);
    if (output.contains("snapshot_times")) {
        sc.output.snapshot_times = output.at("snapshot_times").get<std::vector<double>>();
    }
    sc.output.directory = output.value("directory", "out/" + sc.name);

    const json floors = j.value("floors", json::object());
    sc.floors.rho_floor = number_or(floors, "rho_floor", 1e-12);
    sc.floors.p_floor = number_or(floors, "p_floor", 0.0);

    const json caps = j.value("caps", json::object());
    if (caps.contains("density_cap")) sc.caps.density_cap = caps.at("density_cap").get<double>();
    if (caps.contains("gradient_cap")) sc.caps.gradient_cap = caps.at("gradient_cap").get<double>();
    sc.caps.expect_blowup = caps.value("expect_blowup", false);

    const json diag = j.value("diagnostics", json::object());
    const std::string region = diag.value("region", tracked_default ? "tracked_support"
                                                                    : "full_domain");
    if (region == "tracked_support") {
        sc.diag.region = RegionMode::tracked_support;
    } else if (region == "full_domain") {
        sc.diag.region = RegionMode::full_domain;
    } else {
        throw ValidationError(sc.name + ": diagnostics.region must be full_domain or "
                              "tracked_support");
    }
    sc.diag.epsilon = number_or(diag, "epsilon", 0.01);
    // envelope checks only make sense where the boundary terms vanish
    // (periodic box) or the tilde analogy applies (tracked region)
    const bool virial_default =
        sc.boundary == BoundaryKind::periodic || sc.diag.region == RegionMode::tracked_support;
    sc.diag.virial_checks = diag.value("virial_checks", virial_default);
    sc.diag.identity_gate = diag.value("identity_gate", sc.diag.region == RegionMode::full_domain);
    sc.diag.identity_tol.abs_tol = number_or(diag, "identity_abs_tol", 1e-10);
    sc.diag.identity_tol.rel_tol = number_or(diag, "identity_rel_tol", 1e-6);
    sc.diag.s_floor = number_or(diag, "s_floor", 0.0);
    sc.diag.pressure_cut = number_or(diag, "pressure_cut", 1e-10);

    validate_scenario(sc);
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
        stem = stem.substr(slash + 1);
    }
    if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) {
        stem = stem.substr(0, dot);
    }
    return parse_scenario_text(ss.str(), stem);
}

}  // namespace granular
