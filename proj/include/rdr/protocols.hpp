#pragma once

// End-to-end experiment drivers: frame-convention validation, vacuum Rabi
// oscillations, single-photon and thermal-state reset, coupling sweeps, and
// the sideband amplitude calibration. These tie the model, dynamics,
// tomography and analysis layers together and are what the CLI exposes.

#include <cstdint>
#include <vector>

#include "rdr/analysis.hpp"
#include "rdr/dynamics.hpp"
#include "rdr/model.hpp"
#include "rdr/tomography.hpp"

namespace rdr {

// --- thermal-state preparation ------------------------------------------------

/// Coherent displacements whose phase-averaged mixture is a thermal state of
/// mean occupation nbar: |alpha|^2 drawn exponentially with mean nbar (from a
/// seeded 64-bit Mersenne twister), phases evenly spaced over the circle.
std::vector<Complex> sample_thermal_displacements(double nbar, int count, std::uint64_t seed);

/// Photon-number populations of the sample-averaged mixture (a finite-sample
/// approximation of the thermal distribution). Computed in log space so large
/// displacements do not overflow.
Eigen::VectorXd thermal_mixture_populations(const std::vector<Complex>& alphas, int dim);

/// Smallest mode dimension that keeps the mixture's truncated tail below tol.
int required_mode_dim(const std::vector<Complex>& alphas, double tol = 1e-9);

// --- frame validation -----------------------------------------------------------

struct FrameValidationResult {
    std::vector<double> times;
    std::vector<double> fidelities;  ///< full-model vs effective-model state
    double min_fidelity = 0.0;
};

/// Evolves the full driven model (dispersive + Rabi + sideband, closed
/// system) alongside the effective beam-splitter model, mapping the full
/// state through the displaced frame and the Rabi interaction picture at each
/// sample. High Omega_R/chi makes the two agree.
FrameValidationResult run_frame_validation(SystemParams params, double abar_m,
                                           double t_final, int n_samples,
                                           double rtol = 1e-8);

// --- vacuum Rabi ---------------------------------------------------------------

struct VacuumRabiResult {
    double abar_m = 0.0;
    double frequency = 0.0;         ///< measured, rad/us
    double expected_frequency = 0.0;  ///< 2 chi_m |abar_m|
    std::vector<double> times;
    std::vector<double> dressed_sigma_z;
};

/// Single-excitation exchange between the dressed qubit and the memory mode
/// with the readout drive off; the measured frequency is the vacuum Rabi
/// splitting of the effective model.
VacuumRabiResult run_vacuum_rabi(const SystemParams& params, double abar_m, double t_final,
                                 int n_samples, bool dissipative = true,
                                 double rtol = 1e-8);

// --- reset of a single photon ----------------------------------------------------

struct FockResetResult {
    std::vector<double> times;
    std::vector<double> nbar_m;
    std::vector<double> vacuum_prob_m;
    ExponentialFit p0_fit;         ///< on the memory vacuum probability
    ExponentialFit nbar_fit;       ///< on nbar_m(t)
    double time_constant = 0.0;    ///< 1/rate of the vacuum-probability fit, us
    double speedup = 0.0;          ///< free-decay lifetime over time_constant
    ReconstructionResult final_state;  ///< memory state at the end of the run
};

/// Both sidebands on at constant amplitude, qubit prepared in the dressed
/// ground state, memory in Fock |1>. abar values <= 0 pick the matched
/// operating point (abar_m chi_m = kappa_r/2, abar_r chi_r = kappa_r/2).
FockResetResult run_fock_reset(const SystemParams& params, double abar_m, double abar_r,
                               double t_final, int n_samples, double rtol = 1e-8);

// --- cooling-rate sweep -----------------------------------------------------------

struct CoolingRatePoint {
    double coupling = 0.0;  ///< g_m = abar_m chi_m, rad/us
    double max_rate = 0.0;  ///< max |dn/dt| on the linear cooling branch, photons/us
};

// --- thermal reset ----------------------------------------------------------------

struct ThermalResetConfig {
    SystemParams params;
    double nbar_initial = 30.0;
    int n_displacement_samples = 1500;
    std::uint64_t seed = 20260826;
    double bath_occupation = 0.0;   ///< thermal occupation of the memory bath
    double abar_m = -1.0;           ///< <= 0 picks the matched operating point
    double abar_r = -1.0;
    double t_final = 80.0;
    int n_times = 33;
    int dim_readout = 6;
    int tomo_points = 41;
    double rtol = 1e-8;  ///< integrator relative tolerance
};

struct ThermalResetResult {
    std::vector<double> times;
    std::vector<double> nbar_direct;       ///< Tr[n rho], exact
    std::vector<double> nbar_tomography;   ///< curvature estimate from sampled C
    std::vector<double> nbar_uncertainty;
    PiecewiseFit cooling_fit;              ///< piecewise linear-exponential on nbar(t)
    bool cooling_fit_ok = false;           ///< false when no crossover was detectable
    double nbar_final = 0.0;
    double time_below_0p1 = -1.0;          ///< first sample time with nbar < 0.1, -1 if never
    double free_decay_time_to_same = 0.0;  ///< 170 us * ln(n0/n_final)
    int dim_memory = 0;
    int reduced_dim = 0;

    /// Fitted linear-branch rate when the piecewise fit converged, otherwise
    /// the largest finite-difference slope of the tomographic curve.
    double max_cooling_rate() const;
};

/// Cools a large thermal state. The sample-averaged mixture is phase
/// symmetric, so its diagonal evolves autonomously in the equal-charge block
/// of the Liouvillian; the run evolves that block once instead of propagating
/// every displacement sample separately (identical by linearity).
ThermalResetResult run_thermal_reset(const ThermalResetConfig& config);

/// Max thermal cooling rate versus memory coupling, at a fixed readout
/// operating point. `base` supplies everything except abar_m.
std::vector<CoolingRatePoint> sweep_cooling_rate(const ThermalResetConfig& base,
                                                 const std::vector<double>& couplings);

// --- sideband calibration -----------------------------------------------------------

struct RamseyPoint {
    double setting = 0.0;          ///< drive amplitude knob, arbitrary units
    double frequency = 0.0;        ///< measured Ramsey fringe frequency, rad/us
    double measured_shift = 0.0;   ///< frequency minus the undriven reference
    double predicted_shift = 0.0;  ///< closed-form Stark shift at the true eps
};

struct SidebandCalibrationRun {
    std::vector<RamseyPoint> points;
    StarkCalibration calibration;  ///< inverted from the measured shifts
    double true_scale = 0.0;       ///< eps per unit setting used to generate the data
};

/// Simulates a bare-qubit Ramsey experiment with the readout sideband drive
/// on (qubit + readout, drive frame): the detuned drive populates the readout
/// with a qubit-state-dependent field whose AC Stark shift moves the fringe
/// frequency. The shifts are inverted back to an amplitude calibration.
SidebandCalibrationRun run_sideband_calibration(const SystemParams& params,
                                                const std::vector<double>& settings,
                                                double true_scale, double t_final,
                                                int n_samples, double rtol = 1e-8);

}  // namespace rdr
