#pragma once

// Adaptive Dormand-Prince 5(4) on complex state vectors. Steps are clamped to
// land exactly on requested output times, which keeps runs deterministic for a
// given tolerance.

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rdr {

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdaptiveRKOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 1e-3;
    double min_step = 1e-13;
    double max_step = 1e9;
};

/// Integrates y' = f(t, y) from times.front() to times.back(), invoking
/// `observe(t, y)` at every entry of `times` (which must be increasing).
void integrate_adaptive(
    const std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>& f,
    Eigen::VectorXcd& y, const std::vector<double>& times,
    const std::function<void(double, const Eigen::VectorXcd&)>& observe,
    const AdaptiveRKOptions& opts = {});

}  // namespace rdr
