#ifndef HESSLV_SRC_DOPRI5_HPP
#define HESSLV_SRC_DOPRI5_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "hesslv/errors.hpp"

namespace hesslv::detail {

template <std::size_t N>
using State = std::array<double, N>;

struct StepOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 5e-3;
    long max_steps = 1'000'000;
    double initial_step = 1e-4;
};

enum class StepFlow { Continue, Stop };

// Embedded Dormand-Prince 5(4) pair with FSAL and the PI step controller of
// Hairer's dopri5. `field(t, y, dydt)` evaluates the right-hand side;
// `on_accept(t, y, f)` is called after every accepted step and may stop the
// run. Integration ends at t_end (last step clamped), on Stop, or throws
// NonConvergence when the step budget is exhausted or the step underflows.
template <std::size_t N, class Field, class OnAccept>
void dopri5_integrate(Field&& field, State<N> y, double t, double t_end,
                      const StepOptions& opt, OnAccept&& on_accept) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // y5 - y4 error weights (b - bhat)
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

    static constexpr double beta = 0.04;
    static constexpr double expo1 = 0.2 - beta * 0.75;
    static constexpr double safe = 0.9;
    static constexpr double fac_shrink = 0.2, fac_grow = 10.0;

    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    field(t, y, k1);

    double h = std::min(opt.initial_step, opt.max_step);
    double facold = 1e-4;
    long n_steps = 0;

    while (t < t_end) {
        if (++n_steps > opt.max_steps)
            throw NonConvergence("step budget exhausted before a termination condition");
        h = std::min({h, opt.max_step, t_end - t});
        if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))))
            throw NonConvergence("step size underflow");

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        field(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        field(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        field(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        field(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        field(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        field(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        const double fac11 = std::pow(std::max(err, 1e-32), expo1);
        if (err <= 1.0) {
            const double t_prev = t;
            t = t_prev + h;
            y = ynew;
            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(1.0 / fac_grow, std::min(1.0 / fac_shrink, fac / safe));
            h = h / fac;
            k1 = k7;  // FSAL
            if (on_accept(t, y, k1) == StepFlow::Stop) return;
        } else {
            h = h / std::min(1.0 / fac_shrink, fac11 / safe);
        }
    }
}

} // namespace hesslv::detail

#endif
