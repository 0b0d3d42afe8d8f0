// Adaptive explicit ODE integration with the Dormand-Prince 5(4) embedded
// pair. The observer sees every accepted step and may stop the integration;
// step-size underflow is reported as a status rather than an error, since the
// trajectories of interest genuinely escape to infinity in finite time.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace granular {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-4;
    double h_max = std::numeric_limits<double>::infinity();
    double safety = 0.9;
    double shrink_limit = 0.2;
    double grow_limit = 5.0;
    std::size_t max_steps = 10'000'000;
};

enum class OdeStatus { reached_end, stopped_by_observer, step_underflow, max_steps };

template <std::size_t N>
struct OdeResult {
    OdeStatus status = OdeStatus::reached_end;
    double t = 0.0;
    std::array<double, N> y{};
    double last_h = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

// rhs: (t, y) -> dy/dt. observer: (t, y, h_used) -> bool, false stops.
template <std::size_t N, typename Rhs, typename Observer>
OdeResult<N> integrate_dopri5(Rhs&& rhs, std::array<double, N> y, double t0, double t1,
                              const OdeOptions& opt, Observer&& observer) {
    using Vec = std::array<double, N>;
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a2[] = {1.0 / 5};
    static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
    static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
    static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
    static constexpr double b[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                   11.0 / 84, 0.0};
    // b - b_hat, the 5th-minus-4th order error weights
    static constexpr double e[] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    OdeResult<N> out;
    double t = t0;
    double h = std::min(opt.h_init, t1 - t0);
    std::array<Vec, 7> k;

    auto eval = [&](double tt, const Vec& yy, Vec& kk) { kk = rhs(tt, yy); };

    eval(t, y, k[0]);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t >= t1 || t1 - t <= std::abs(t1) * std::numeric_limits<double>::epsilon() * 4.0) {
            out.status = OdeStatus::reached_end;
            break;
        }
        h = std::min({h, opt.h_max, t1 - t});
        if (!(h > std::abs(t) * std::numeric_limits<double>::epsilon() * 4.0) || !(t + h > t)) {
            out.status = OdeStatus::step_underflow;
            break;
        }

        Vec yt;
        auto stage = [&](const double* aa, int na, double cc, Vec& kk) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < na; ++j) acc += aa[j] * k[static_cast<std::size_t>(j)][i];
                yt[i] = y[i] + h * acc;
            }
            eval(t + cc * h, yt, kk);
        };
        stage(a2, 1, c[1], k[1]);
        stage(a3, 2, c[2], k[2]);
        stage(a4, 3, c[3], k[3]);
        stage(a5, 4, c[4], k[4]);
        stage(a6, 5, c[5], k[5]);

        Vec ynew;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 6; ++j) acc += b[j] * k[static_cast<std::size_t>(j)][i];
            ynew[i] = y[i] + h * acc;
        }
        eval(t + h, ynew, k[6]);  // FSAL stage

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            double de = 0.0;
            for (int j = 0; j < 7; ++j) de += e[j] * k[static_cast<std::size_t>(j)][i];
            de *= h;
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (de / scale) * (de / scale);
            finite = finite && std::isfinite(ynew[i]);
        }
        err = std::sqrt(err / static_cast<double>(N));

        if (err <= 1.0 && finite) {
            t += h;
            y = ynew;
            k[0] = k[6];
            out.last_h = h;
            ++out.accepted;
            if (!observer(t, y, h)) {
                out.status = OdeStatus::stopped_by_observer;
                break;
            }
            const double factor = (err == 0.0)
                                      ? opt.grow_limit
                                      : std::clamp(opt.safety * std::pow(err, -0.2),
                                                   opt.shrink_limit, opt.grow_limit);
            h *= factor;
        } else {
            ++out.rejected;
            const double factor =
                finite ? std::clamp(opt.safety * std::pow(err, -0.2), opt.shrink_limit, 1.0)
                       : opt.shrink_limit;
            h *= factor;
        }
        if (step + 1 == opt.max_steps) out.status = OdeStatus::max_steps;
    }
    out.t = t;
    out.y = y;
    return out;
}

}  // namespace granular
