#pragma once

// Wigner characteristic-function computation, photon-number extraction from
// the curvature at the origin, and least-squares state reconstruction.

#include <optional>
#include <vector>

#include "rdr/hilbert.hpp"

namespace rdr {

struct TomographyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CharSamples {
    struct Point {
        Complex alpha;
        Complex value;
    };
    std::vector<Point> points;

    /// Axis-averaged real profile: pairs (|alpha| signed along axis, mean Re C)
    /// over the real and imaginary axes.
    std::vector<std::pair<double, double>> axis_average;
};

/// C(alpha) = Tr[rho D(alpha)] for a single-mode state.
Complex characteristic_function(const DensityMatrix& rho_mode, Complex alpha);

/// Closed-form thermal characteristic function e^{-(nbar+1/2)|alpha|^2}
/// (test oracle and synthetic-data source).
Complex thermal_characteristic(double nbar, Complex alpha);

/// Symmetric grids of n_points on the real and imaginary axes (alpha = 0
/// included). Values from the matrix path.
CharSamples sample_axes(const DensityMatrix& rho_mode, double max_alpha, int n_points);

/// Diagonal-state fast path: C(alpha) = sum_n p_n <n|D(alpha)|n>.
CharSamples sample_axes_diagonal(const Eigen::VectorXd& populations, double max_alpha,
                                 int n_points);

struct NbarEstimate {
    double nbar = 0.0;
    double uncertainty = 0.0;
    double threshold_used = 0.8;
    int points_kept = 0;
    double residual = 0.0;
};

/// Quadratic-in-|alpha|^2 polynomial fit of C around the origin on points with
/// |C| above the threshold; nbar = -(c2 + 1/2) from the curvature. The
/// uncertainty is the half-spread of nbar across the 0.7/0.85 threshold band.
NbarEstimate extract_nbar(const CharSamples& samples, double threshold = 0.8);

struct ReconstructionResult {
    DensityMatrix rho;
    double residual = 0.0;
    bool under_determined = false;
};

/// Ridge-regularized least-squares fit of rho to the samples, projected onto
/// the positive-semidefinite unit-trace cone.
ReconstructionResult reconstruct_state(const CharSamples& samples, int dim);

/// <0|rho|0> (exact path).
double vacuum_probability(const DensityMatrix& rho_mode);

/// CSV round-trip (columns re_alpha, im_alpha, re_C, im_C).
std::string char_samples_to_csv(const CharSamples& samples);
CharSamples char_samples_from_csv(const std::string& text);

}  // namespace rdr
