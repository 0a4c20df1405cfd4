#pragma once

// Curve fitting and calibration formulas: the piecewise linear-exponential
// cooling fit, exponential fits, Stark-shift calibration, and the
// shifted-frame Rabi relation. Nonlinear fits use Levenberg-Marquardt with
// analytic Jacobians.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rdr/hilbert.hpp"

namespace rdr {

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- generic Levenberg-Marquardt --------------------------------------------

struct LMOptions {
    int max_iterations = 200;
    double gradient_tol = 1e-12;
    double step_tol = 1e-14;
    double initial_lambda = 1e-3;
};

struct LMResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes |r(p)|^2. `jacobian(p)` returns dres/dp. An optional `project`
/// clamps parameters into their feasible box after each step.
LMResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
    Eigen::VectorXd initial,
    const std::function<void(Eigen::VectorXd&)>& project = nullptr,
    const LMOptions& opts = {});

// --- cooling-curve fits -------------------------------------------------------

enum class PiecewiseForm {
    Corrected,  ///< linear branch A + B + B*gamma*(t0 - t): decreasing
    AsPrinted   ///< linear branch A + B + B*gamma*(t - t0) (kept selectable)
};

struct PiecewiseFit {
    double A = 0.0;      ///< asymptote, photons
    double B = 0.0;      ///< amplitude, photons
    double gamma = 0.0;  ///< rate, 1/us
    double t0 = 0.0;     ///< crossover time, us
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;
    PiecewiseForm form = PiecewiseForm::Corrected;

    double max_rate() const { return B * gamma; }  ///< |dn/dt| on the linear branch
    double eval(double t) const;
};

/// Least-squares fit of the piecewise linear-exponential cooling curve.
/// Throws a degenerate-fit error when the data has no detectable crossover.
PiecewiseFit fit_piecewise_decay(const std::vector<double>& times,
                                 const std::vector<double>& nbars,
                                 const std::vector<double>& weights = {},
                                 PiecewiseForm form = PiecewiseForm::Corrected);

struct ExponentialFit {
    double amplitude = 0.0;
    double rate = 0.0;
    double offset = 0.0;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;
    bool non_decaying = false;  ///< flagged, not an error
};

/// Least-squares A e^{-gamma t} + C.
ExponentialFit fit_exponential(const std::vector<double>& times,
                               const std::vector<double>& values);

// --- calibration formulas -----------------------------------------------------

struct StarkShiftValue {
    double exact = 0.0;        ///< Re(8 chi eps^2 / (4 Om^2 + (kappa - 2i chi)^2))
    double approximate = 0.0;  ///< 2 chi (eps/Om)^2
    double relative_gap = 0.0;
};

StarkShiftValue stark_shift(double chi, double eps, double omega_rabi, double kappa);

struct StarkCalibration {
    struct Sample {
        double setting;   ///< drive amplitude setting (arbitrary units)
        double shift;     ///< measured Stark shift, rad/us
        double eps;       ///< inverted drive amplitude, rad/us
        bool excluded = false;
    };
    std::vector<Sample> samples;
    double scale = 0.0;  ///< eps per unit amplitude setting
    double scale_variance = 0.0;
};

/// Inverts the Stark-shift formula per sample and fits eps = scale * setting.
/// Throws on non-monotone shift data.
StarkCalibration calibrate_sideband(const std::vector<std::pair<double, double>>& shift_samples,
                                    double chi, double omega_rabi, double kappa);

struct ShiftedRabi {
    double omega = 0.0;
    bool noisy_regime = false;  ///< flagged when delta > omega_rabi / 2
};

/// Omega = sqrt(Omega_R^2 + delta^2).
ShiftedRabi shifted_rabi_frequency(double omega_rabi, double delta);

/// Angular frequency of a (possibly decaying) oscillation, from interpolated
/// zero crossings of the detrended signal. Throws when fewer than three
/// crossings are present.
double estimate_oscillation_frequency(const std::vector<double>& times,
                                      const std::vector<double>& values);

}  // namespace rdr
