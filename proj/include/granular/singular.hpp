// The separable singular family u = alpha(t)*x, rho = beta0*|x|^(-1),
// p = s(t)*|x|: its slope ODE system, adaptive integration with blow-up
// detection, and a pointwise residual check of the field against the
// governing equations.
#pragma once

#include <utility>
#include <vector>

#include "granular/core.hpp"

namespace granular {

// Slopes of the separable solution. beta0 is constant along any trajectory;
// s stays non-negative under the flow.
struct SingularState {
    double alpha = 0.0;
    double s = 0.0;
    double beta0 = 1.0;
};

struct SingularRates {
    double dalpha = 0.0;
    double ds = 0.0;
};

// dalpha = -alpha^2 - s/beta0
// ds     = -(gamma+1)*n*s*alpha - lambda*sqrt(beta0)*s^(3/2)
// Throws DomainError for s < 0.
SingularRates singular_rhs(const SingularState& st, const GasParams& g);

enum class SingularTrigger { none, threshold, step_underflow };

struct SingularBlowup {
    bool detected = false;
    SingularTrigger trigger = SingularTrigger::none;
    double t_detect = 0.0;
    // interval bounding the singularity time: stop time below, extrapolated
    // pole of 1/|alpha| above
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct SingularSample {
    double t;
    double alpha;
    double s;
};

struct SingularTrajectory {
    std::vector<SingularSample> samples;  // every accepted step, t = 0 first
    SingularBlowup blowup;
};

// Adaptive Dormand-Prince integration of singular_rhs (relative tolerance
// 1e-10). Stops at t_end or once |alpha| or s exceeds blowup_threshold; the
// stop time is a lower bound for the blow-up time and the upper edge comes
// from extrapolating 1/|alpha| over the last accepted steps. Step-size
// underflow counts as blow-up evidence, not failure.
SingularTrajectory integrate_singular(const SingularState& st0, const GasParams& g, double t_end,
                                      double blowup_threshold);

// Substitutes the separable field with the given time derivatives into the
// planar forms of the governing equations at the sample positions and
// returns the largest residual over samples and equations. Each equation is
// normalized by the magnitude of its largest term, so the result stays
// meaningful when the slopes are large. Zero (to rounding) exactly when the
// rates equal singular_rhs(st). Throws DomainError for a sample at x = 0.
double singular_field_residual(const SingularState& st, const SingularRates& rates,
                               const std::vector<double>& sample_xs, const GasParams& g);

}  // namespace granular
