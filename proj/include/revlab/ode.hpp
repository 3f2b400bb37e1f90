// Embedded Dormand-Prince 5(4) integrator with PI step control.
// Fixed compile-time dimension; the right-hand side is any callable
// void(double t, const double* y, double* dydt).
#ifndef REVLAB_ODE_HPP
#define REVLAB_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "revlab/errors.hpp"

namespace revlab {

struct IntegratorOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double guard_norm = 1e6;     // abort when the guarded state norm exceeds this
    int guard_dims = 0;          // how many leading components the guard covers (0 = all)
    long max_steps = 2000000;
    double initial_step = 0.0;   // 0 = choose automatically
};

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
};

namespace dopri5 {
// Classic Dormand-Prince coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus 4th-order weights (error estimator).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dopri5

template <std::size_t N, typename RHS>
void integrate(const RHS& rhs, std::array<double, N>& y, double t0, double t1,
               const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
    using namespace dopri5;
    if (t0 == t1) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double total = std::abs(t1 - t0);

    std::array<double, N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};
    double t = t0;
    rhs(t, y.data(), k1.data());

    double h = opt.initial_step;
    if (h == 0.0) {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = (fnorm > 1e-12) ? std::min(0.1 * (ynorm + 1.0) / fnorm, total) : total;
        h = std::min(h, total);
    }
    h = std::abs(h);

    double err_prev = 1.0;
    long steps = 0;
    bool fsal_valid = true;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps)
            throw numerical_error("integrate: step limit exceeded at t=" + std::to_string(t));
        h = std::min(h, std::abs(t1 - t));
        if (h < 1e-14 * (std::abs(t) + 1.0))
            throw numerical_error("integrate: step size underflow at t=" + std::to_string(t));
        const double hs = dir * h;

        if (!fsal_valid) rhs(t, y.data(), k1.data());

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp.data(), k2.data());
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp.data(), k3.data());
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp.data(), k4.data());
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, ytmp.data(), k5.data());
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] +
                      hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + hs, ytmp.data(), k6.data());
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + hs, ynew.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / double(N));
        if (!std::isfinite(err)) err = 2.0;

        if (err <= 1.0) {
            t += hs;
            y = ynew;
            k1 = k7;  // FSAL
            fsal_valid = true;
            if (stats) ++stats->steps_accepted;
            const std::size_t gdims =
                (opt.guard_dims > 0 && std::size_t(opt.guard_dims) < N) ? opt.guard_dims : N;
            double ynorm = 0.0;
            for (std::size_t i = 0; i < gdims; ++i) ynorm = std::max(ynorm, std::abs(y[i]));
            if (ynorm > opt.guard_norm)
                throw domain_error("integrate: trajectory escaped guard radius at t=" +
                                   std::to_string(t));
            // PI controller
            const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                               std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
        } else {
            if (stats) ++stats->steps_rejected;
            h *= std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.2, 1.0);
            fsal_valid = true;  // k1 still matches (t, y)
        }
    }
}

}  // namespace revlab

#endif
