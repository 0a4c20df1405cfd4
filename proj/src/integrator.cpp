#include "rdr/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace rdr {

namespace {

// Dormand-Prince RK5(4)7M coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// e = b - b_hat (embedded 4th-order error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

void integrate_adaptive(
    const std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>& f,
    Eigen::VectorXcd& y, const std::vector<double>& times,
    const std::function<void(double, const Eigen::VectorXcd&)>& observe,
    const AdaptiveRKOptions& opts) {
    if (times.size() < 1) return;
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw IntegratorError("output times must be increasing");

    const auto n = y.size();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    double t = times.front();
    if (observe) observe(t, y);

    double h = opts.initial_step;
    bool have_k1 = false;

    for (size_t target_idx = 1; target_idx < times.size(); ++target_idx) {
        const double t_target = times[target_idx];
        while (t < t_target) {
            h = std::min({h, opts.max_step, t_target - t});
            if (h < opts.min_step)
                throw IntegratorError("step-size underflow at t=" + std::to_string(t));

            if (!have_k1) {
                f(t, y, k1);
                have_k1 = true;
            }
            ytmp = y + h * (a21 * k1);
            f(t + c2 * h, ytmp, k2);
            ytmp = y + h * (a31 * k1 + a32 * k2);
            f(t + c3 * h, ytmp, k3);
            ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * h, ytmp, k4);
            ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * h, ytmp, k5);
            ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + h, ytmp, k6);
            ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t + h, ynew, k7);

            err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double scale = opts.atol + opts.rtol * std::max(y.norm(), ynew.norm());
            double err_norm = err.norm() / scale;

            if (err_norm <= 1.0) {
                t += h;
                y.swap(ynew);
                k1.swap(k7);  // FSAL
                double factor = err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
                h *= std::clamp(factor, 0.2, 5.0);
            } else {
                h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
                // k1 still valid at unchanged (t, y)
            }
        }
        if (observe) observe(t, y);
    }
}

}  // namespace rdr
