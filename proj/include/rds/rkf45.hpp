#pragma once

#include <array>
#include <cstddef>

namespace rds {

// Fixed-step Runge-Kutta-Fehlberg integrator.  The classic 6-stage tableau
// is evaluated and the fifth-order combination is taken as the update (the
// embedded fourth-order solution is ignored; the step size is fixed by the
// caller, not adapted).
//
// Field is any callable mapping a state array to its derivative array.
template <std::size_t N, typename Field>
std::array<double, N> rkf45_step(const Field& f, const std::array<double, N>& y, double h) {
    constexpr double a21 = 1.0 / 4.0;
    constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
    constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0, a43 = 7296.0 / 2197.0;
    constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0,
                     a54 = -845.0 / 4104.0;
    constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0,
                     a64 = 1859.0 / 4104.0, a65 = -11.0 / 40.0;
    // Fifth-order weights (stage 5 drops out of the high-order solution).
    constexpr double b1 = 16.0 / 135.0, b3 = 6656.0 / 12825.0, b4 = 28561.0 / 56430.0,
                     b5 = -9.0 / 50.0, b6 = 2.0 / 55.0;

    std::array<double, N> k1 = f(y);

    std::array<double, N> t;
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    std::array<double, N> k2 = f(t);

    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    std::array<double, N> k3 = f(t);

    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    std::array<double, N> k4 = f(t);

    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    std::array<double, N> k5 = f(t);

    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    std::array<double, N> k6 = f(t);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    return out;
}

} // namespace rds
