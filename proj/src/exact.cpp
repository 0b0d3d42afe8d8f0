#include "granular/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "granular/numerics.hpp"

namespace granular {

void validate(const SteadyParams& sp, const GasParams& g) {
    if (sp.c1 == 0.0) {
        throw ValidationError("steady: c1 must be nonzero");
    }
    if (sp.c1 < 0.0) {
        throw ValidationError(
            "steady: only the c1 > 0 branch is constructed; the left half-line "
            "comes from reflection");
    }
    if (!(sp.c2 - sp.a * sp.c1 > 0.0)) {
        throw ValidationError("steady: positivity requires c2 - a*c1 > 0, got " +
                              std::to_string(sp.c2 - sp.a * sp.c1));
    }
    if (sp.x_plus < 0.0) {
        throw ValidationError("steady: x_plus must be non-negative");
    }
    validate(g);
}

double haff_temperature(double t, double rho0, double T0, double lambda) {
    const double c = 0.5 * lambda * rho0 * t;
    if (c == 0.0) return T0;
    const double b = c + 1.0 / std::sqrt(T0);
    return 1.0 / (b * b);
}

double profile_xi_formula(double z, const SteadyParams& sp, const GasParams& g) {
    if (!(z > 0.0)) {
        throw DomainError("profile: z must be positive, got " + std::to_string(z));
    }
    const double c1 = sp.c1;
    const double amp = (sp.c2 - sp.a * c1) / (c1 * g.lambda);
    const double sz = std::sqrt(z);
    return amp * ((g.gamma + 3.0) * std::atan(sz / c1) / c1 +
                  (g.gamma + 1.0) * sz / (z + c1 * c1) + 2.0 / sz) +
           sp.c3;
}

double profile_dxi_dz(double z, const SteadyParams& sp, const GasParams& g) {
    if (!(z > 0.0)) {
        throw DomainError("profile: z must be positive, got " + std::to_string(z));
    }
    const double c1 = sp.c1;
    const double zc = z + c1 * c1;
    return -(sp.c2 - sp.a * c1) * c1 * (c1 * c1 - g.gamma * z) /
           (g.lambda * std::pow(z, 1.5) * zc * zc);
}

double profile_xi_of_z(double z, const SteadyParams& sp, const GasParams& g) {
    const double zs = sp.z_star(g);
    if (!(z > 0.0) || z > zs) {
        throw DomainError("profile: z outside branch (0, " + std::to_string(zs) + "], got " +
                          std::to_string(z));
    }
    return profile_xi_formula(z, sp, g);
}

double profile_z_of_xi(double xi, const SteadyParams& sp, const GasParams& g, double z_anchor) {
    const double zs = sp.z_star(g);
    if (!(z_anchor > 0.0) || z_anchor > zs) {
        throw DomainError("profile: z_anchor outside branch (0, " + std::to_string(zs) + "]");
    }
    const double xi_anchor = profile_xi_formula(z_anchor, sp, g);
    const double tol = 1e-12;
    if (xi < xi_anchor - tol) {
        throw BracketError("profile: xi below the branch start xi(z_anchor)");
    }
    if (xi <= xi_anchor) return z_anchor;

    // xi(z) decreases in z on the branch and diverges as z -> 0+; shrink the
    // lower edge geometrically until the target is bracketed.
    double z_lo = 0.5 * z_anchor;
    for (int it = 0; it < 2100 && profile_xi_formula(z_lo, sp, g) < xi; ++it) {
        z_lo *= 0.5;
        if (z_lo == 0.0) {
            throw BracketError("profile: xi beyond representable branch tail");
        }
    }
    auto f = [&](double z) { return profile_xi_formula(z, sp, g); };
    auto df = [&](double z) { return profile_dxi_dz(z, sp, g); };
    return find_root_bracketed(f, xi, z_lo, z_anchor, RootOptions{}, df);
}

PrimitiveState profile_state(double z, const SteadyParams& sp) {
    PrimitiveState w;
    w.rho = (z + sp.c1 * sp.c1) / (sp.c2 - sp.a * sp.c1);
    w.u = sp.c1 / w.rho + sp.a;
    w.p = sp.c2 - sp.c1 * w.u;
    return w;
}

PrimitiveState steady_state_eval(double x, const SteadyParams& sp, const GasParams& g) {
    const double r = std::abs(x);
    if (r <= sp.x_plus) {
        throw DomainError("steady: state undefined inside |x| <= x_plus");
    }
    const double z = profile_z_of_xi(r, sp, g, sp.z_star(g));
    PrimitiveState w = profile_state(z, sp);
    if (x < 0.0) w.u = -w.u;
    return w;
}

PrimitiveState automodel_eval(double x, double t, const SteadyParams& sp, const GasParams& g) {
    const double xi = x - sp.a * t;
    const double z = profile_z_of_xi(xi, sp, g, sp.z_star(g));
    return profile_state(z, sp);
}

SteadyParams make_steady_params(double k, double c2, double x_plus, const GasParams& g) {
    SteadyParams sp{k, c2, 0.0, 0.0, x_plus};
    validate(sp, g);
    sp.c3 = x_plus - profile_xi_formula(sp.z_star(g), sp, g);
    return sp;
}

SteadyParams make_automodel_params(double c1, double c2, double a, double xi_anchor,
                                   const GasParams& g) {
    SteadyParams sp{c1, c2, a, 0.0, 0.0};
    validate(sp, g);
    sp.c3 = xi_anchor - profile_xi_formula(sp.z_star(g), sp, g);
    return sp;
}

}  // namespace granular
