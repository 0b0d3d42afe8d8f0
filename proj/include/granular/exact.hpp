// Closed-form and semi-closed-form solution families: the homogeneous
// cooling law, the stationary/traveling profile defined implicitly by its
// position-of-z quadrature, and the piecewise steady state built from it by
// reflection. These serve as oracles, initial conditions and boundary data.
#pragma once

#include <cstddef>
#include <vector>

#include "granular/core.hpp"

namespace granular {

// Constants of an automodel/steady profile. c1 is the mass-flux constant
// (positive on the implemented branch; the left half-line of the steady
// state is produced by reflection). a is the wave speed, zero for the
// steady state. c3 fixes the position of the branch; x_plus is the matching
// point of the steady construction.
struct SteadyParams {
    double c1 = 1.0;
    double c2 = 1.0;
    double a = 0.0;
    double c3 = 0.0;
    double x_plus = 0.0;

    // largest profile value on the monotone branch
    double z_star(const GasParams& g) const { return c1 * c1 / g.gamma; }
};

void validate(const SteadyParams& sp, const GasParams& g);

// Exact temperature of the homogeneous cooling state,
// T(t) = (lambda*rho0*t/2 + T0^(-1/2))^(-2), solving dT/dt = -lambda*rho0*T^(3/2).
double haff_temperature(double t, double rho0, double T0, double lambda);

// The closed-form position xi(z) of the profile equation, evaluated without
// the branch restriction (the expression is defined for every z > 0).
double profile_xi_formula(double z, const SteadyParams& sp, const GasParams& g);

// d(xi)/dz of the closed form; the reciprocal of the profile ODE right-hand
// side. Negative on the branch z < z_star for c1 > 0.
double profile_dxi_dz(double z, const SteadyParams& sp, const GasParams& g);

// Branch-checked evaluation: requires 0 < z <= z_star.
double profile_xi_of_z(double z, const SteadyParams& sp, const GasParams& g);

// Inverts xi(z) on the monotone branch by bracketed bisection with a Newton
// polish (absolute tolerance 1e-12 in xi). Monotone decreasing in xi for
// c1 > 0. Throws BracketError when xi lies outside [xi(z_anchor), +inf).
double profile_z_of_xi(double xi, const SteadyParams& sp, const GasParams& g, double z_anchor);

struct PrimitiveState {
    double rho = 0.0;
    double u = 0.0;
    double p = 0.0;
};

// Converts a profile value z into the primitive state of the traveling wave:
// rho = (z + c1^2)/(c2 - a*c1), u = c1/rho + a, p = c2 - c1*u.
PrimitiveState profile_state(double z, const SteadyParams& sp);

// Stationary solution outside |x| <= x_plus for a = 0, c1 = k > 0:
//   rho(x) = (z(|x|) + k^2)/c2,  p = c2 - k^2/rho,  u = k*sign(x)/rho,
// the left half-line obtained by reflection (rho, p even; u odd).
// Throws DomainError for |x| <= x_plus.
PrimitiveState steady_state_eval(double x, const SteadyParams& sp, const GasParams& g);

// Traveling profile at (x, t) through xi = x - a*t.
PrimitiveState automodel_eval(double x, double t, const SteadyParams& sp, const GasParams& g);

// SteadyParams with c3 chosen so the branch starts (z = z_star) exactly at
// x_plus; the usual way to instantiate the steady construction.
SteadyParams make_steady_params(double k, double c2, double x_plus, const GasParams& g);

// Same anchoring for a traveling profile: z = z_star at xi = xi_anchor.
SteadyParams make_automodel_params(double c1, double c2, double a, double xi_anchor,
                                   const GasParams& g);

}  // namespace granular
