// Small numerical utilities: bracketed root finding for monotone implicit
// functions and a least-squares line fit used by the blow-up estimator.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "granular/core.hpp"

namespace granular {

struct RootOptions {
    double xi_tol = 1e-12;   // absolute tolerance on |f(x) - target|
    int max_bisect = 200;
    int newton_polish = 3;   // Newton steps after bisection when df is given
};

// Solves f(x) = target on [lo, hi] for strictly monotone f. A derivative
// callback enables a Newton polish that sharpens the bisection result to
// rounding accuracy (needed where |f'| is small near a branch endpoint).
// Throws BracketError unless f(lo) and f(hi) straddle the target.
double find_root_bracketed(const std::function<double(double)>& f, double target, double lo,
                           double hi, const RootOptions& opt = {},
                           const std::function<double(double)>& df = nullptr);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;  // Pearson r of (x, y)
};

// Ordinary least squares y = slope * x + intercept. Returns nullopt for
// fewer than two points or degenerate abscissae.
std::optional<LineFit> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace granular
