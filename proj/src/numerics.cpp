#include "granular/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace granular {

double find_root_bracketed(const std::function<double(double)>& f, double target, double lo,
                           double hi, const RootOptions& opt,
                           const std::function<double(double)>& df) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw BracketError("find_root_bracketed: target not bracketed by [lo, hi]");
    }
    double a = lo, b = hi, fa = flo;
    double x = 0.5 * (a + b);
    for (int it = 0; it < opt.max_bisect; ++it) {
        x = 0.5 * (a + b);
        const double fx = f(x) - target;
        if (std::abs(fx) <= opt.xi_tol || x == a || x == b) break;
        if (fa * fx <= 0.0) {
            b = x;
        } else {
            a = x;
            fa = fx;
        }
    }
    if (df) {
        // Newton polish; fall back to the bisection iterate if a step leaves
        // the bracket or the derivative degenerates.
        for (int it = 0; it < opt.newton_polish; ++it) {
            const double d = df(x);
            if (d == 0.0 || !std::isfinite(d)) break;
            const double xn = x - (f(x) - target) / d;
            if (!(xn > std::min(lo, hi) && xn < std::max(lo, hi))) break;
            x = xn;
        }
    }
    return x;
}

std::optional<LineFit> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::nullopt;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) return std::nullopt;
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.correlation = (syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return fit;
}

}  // namespace granular
