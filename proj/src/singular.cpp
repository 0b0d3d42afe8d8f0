#include "granular/singular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "granular/ode.hpp"

namespace granular {

SingularRates singular_rhs(const SingularState& st, const GasParams& g) {
    if (st.s < 0.0) {
        throw DomainError("singular: s must be non-negative, got " + std::to_string(st.s));
    }
    SingularRates r;
    const double pressure_term = (st.s == 0.0) ? 0.0 : st.s / st.beta0;
    r.dalpha = -st.alpha * st.alpha - pressure_term;
    r.ds = -(g.gamma + 1.0) * static_cast<double>(g.dim) * st.s * st.alpha -
           g.lambda * std::sqrt(st.beta0) * std::pow(st.s, 1.5);
    return r;
}

namespace {

// Extrapolates y = 1/|alpha| to zero through the last accepted samples:
// a quadratic through three points when available, otherwise the secant.
// Near blow-up y decays essentially linearly, so this pins the pole tightly.
double extrapolate_pole(const std::vector<SingularSample>& samples) {
    const std::size_t n = samples.size();
    const double t_last = samples.back().t;
    auto inv_abs = [](const SingularSample& s) {
        return (s.alpha == 0.0) ? 0.0 : 1.0 / std::abs(s.alpha);
    };
    if (n < 2 || samples.back().alpha == 0.0) return t_last;
    const double span = t_last - samples[n - std::min<std::size_t>(n, 3)].t;

    const double t2 = samples[n - 2].t, y2 = inv_abs(samples[n - 2]);
    const double t3 = t_last, y3 = inv_abs(samples.back());
    double tau = 0.0;
    const double d2 = (y3 - y2) / (t3 - t2);
    if (n >= 3) {
        const double t1 = samples[n - 3].t, y1 = inv_abs(samples[n - 3]);
        const double d1 = (y2 - y1) / (t2 - t1);
        const double dd = (d2 - d1) / (t3 - t1);
        const double slope3 = d2 + dd * (t3 - t2);  // q'(t3)
        const double disc = slope3 * slope3 - 4.0 * dd * y3;
        if (dd != 0.0 && disc >= 0.0) {
            const double r1 = (-slope3 - std::sqrt(disc)) / (2.0 * dd);
            const double r2 = (-slope3 + std::sqrt(disc)) / (2.0 * dd);
            const double pos = std::min(r1 > 0.0 ? r1 : r2, r2 > 0.0 ? r2 : r1);
            if (pos > 0.0) tau = pos;
        }
    }
    if (tau == 0.0 && d2 < 0.0) tau = -y3 / d2;
    tau = std::clamp(tau, 0.0, std::max(10.0 * span, 1e-12));
    return t3 + tau;
}

}  // namespace

SingularTrajectory integrate_singular(const SingularState& st0, const GasParams& g, double t_end,
                                      double blowup_threshold) {
    if (st0.s < 0.0) {
        throw DomainError("singular: initial s must be non-negative");
    }
    SingularTrajectory traj;
    traj.samples.push_back({0.0, st0.alpha, st0.s});

    const double beta0 = st0.beta0;
    const double coef_s = (g.gamma + 1.0) * static_cast<double>(g.dim);
    const double coef_cool = g.lambda * std::sqrt(beta0);
    auto rhs = [&](double, const std::array<double, 2>& y) {
        // RK stages may probe marginally negative s; clamp inside the flow
        const double s = std::max(y[1], 0.0);
        const double pressure_term = (s == 0.0) ? 0.0 : s / beta0;
        return std::array<double, 2>{-y[0] * y[0] - pressure_term,
                                     -coef_s * s * y[0] - coef_cool * std::pow(s, 1.5)};
    };

    bool exceeded = false;
    auto observer = [&](double t, const std::array<double, 2>& y, double) {
        traj.samples.push_back({t, y[0], std::max(y[1], 0.0)});
        if (std::abs(y[0]) > blowup_threshold || y[1] > blowup_threshold) {
            exceeded = true;
            return false;
        }
        return true;
    };

    OdeOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12;
    opt.h_init = 1e-6;
    const auto res = integrate_dopri5<2>(rhs, {st0.alpha, st0.s}, 0.0, t_end, opt, observer);

    auto& b = traj.blowup;
    if (exceeded) {
        b.detected = true;
        b.trigger = SingularTrigger::threshold;
    } else if (res.status == OdeStatus::step_underflow) {
        b.detected = true;
        b.trigger = SingularTrigger::step_underflow;
    }
    if (b.detected) {
        b.t_detect = res.t;
        b.t_lo = res.t;
        b.t_hi = std::max(extrapolate_pole(traj.samples), b.t_lo);
    }
    return traj;
}

double singular_field_residual(const SingularState& st, const SingularRates& rates,
                               const std::vector<double>& sample_xs, const GasParams& g) {
    if (st.s < 0.0) {
        throw DomainError("singular: s must be non-negative");
    }
    const double alpha = st.alpha;
    const double s = st.s;
    const double beta0 = st.beta0;
    const double cool = g.lambda * std::sqrt(beta0) * std::pow(s, 1.5);

    double worst = 0.0;
    for (double x : sample_xs) {
        if (x == 0.0) {
            throw DomainError("singular: residual sample at x = 0");
        }
        const double ax = std::abs(x);

        // continuity: d/dt[beta0/|x|] + d/dx[beta0*alpha*sign(x)] -- both
        // terms vanish identically off the origin (beta0 is constant)
        const double r1 = 0.0;

        // momentum, conservative form: coefficient of sign(x)
        const double m_t = beta0 * rates.dalpha;
        const double m_x = beta0 * alpha * alpha;
        const double r2 = std::abs(m_t + m_x + s) /
                          std::max({1.0, std::abs(m_t), std::abs(m_x), std::abs(s)});

        // pressure balance (corollary of the temperature equation and the
        // state law, valid down to beta0 = 0): coefficient of |x|
        const double p_t = rates.ds * ax;
        const double p_adv = (g.gamma + 1.0) * alpha * s * ax;
        const double p_cool = cool * ax;
        const double r3 = std::abs(p_t + p_adv + p_cool) /
                          std::max({1.0, std::abs(p_t), std::abs(p_adv), std::abs(p_cool)});

        worst = std::max({worst, r1, r2, r3});
    }
    return worst;
}

}  // namespace granular
