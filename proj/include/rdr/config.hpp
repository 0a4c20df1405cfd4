#pragma once

// Run configuration: JSON at the boundary with Hz/seconds units, converted to
// angular frequencies and microseconds exactly once at ingestion. The
// boundary values are kept verbatim so parse -> serialize -> parse is the
// identity. Unknown keys are rejected with the path to the offending key, and
// exactly one of {abar targets, raw eps} may describe the drives.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdr/model.hpp"

namespace rdr {

enum class ExperimentKind {
    ThermalReset,
    FockReset,
    VacuumRabi,
    DrivenRamsey,
    CouplingSweep,
    FrameValidation,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Device parameters exactly as written in the config (Hz and seconds).
struct BoundaryParams {
    double chi_m_hz = 28500.0;
    double chi_r_hz = 317500.0;
    double kappa_r_hz = 382000.0;
    double memory_lifetime_s = 170e-6;
    double qubit_t1_s = 25e-6;
    double qubit_t2_echo_s = 20e-6;
    double rabi_hz = 9e6;
    int dim_memory = 30;
    int dim_readout = 10;

    SystemParams to_system_params() const;  ///< rad/us and us
};

struct DriveConfig {
    // displaced-frame amplitude family
    std::optional<double> abar_m;
    std::optional<double> abar_r;
    std::optional<double> abar_m_over_kappa_chi;  ///< abar_m = f kappa_r / chi_m
    // raw sideband amplitude family (Hz at the boundary)
    std::optional<double> eps_m_hz;
    std::optional<double> eps_r_hz;

    bool using_abar() const { return abar_m || abar_r || abar_m_over_kappa_chi; }
    bool using_eps() const { return eps_m_hz || eps_r_hz; }
    bool empty() const { return !using_abar() && !using_eps(); }

    /// Resolved displaced-frame amplitudes; <= 0 when the field should fall
    /// back to the matched operating point downstream.
    double resolve_abar_m(const SystemParams& p) const;
    double resolve_abar_r(const SystemParams& p) const;
};

struct RunConfig {
    int version = 1;
    ExperimentKind kind = ExperimentKind::ThermalReset;
    BoundaryParams boundary;
    SystemParams params;  ///< derived from `boundary` at ingestion
    DriveConfig drives;
    std::uint64_t seed = 20260826;
    double tol = 1e-8;  ///< integrator relative tolerance
    int workers = 1;
    std::string output_dir = "out";

    double t_final_s = 80e-6;
    int n_times = 33;  ///< sampled points (hold times or trace samples)

    // thermal reset / coupling sweep
    double nbar_initial = 30.0;
    int n_displacement_samples = 1500;
    double bath_occupation = 0.0;
    std::vector<double> sweep_fractions;  ///< couplings as fractions of kappa_r

    // driven-Ramsey calibration
    std::vector<double> settings;      ///< drive knob values, arbitrary units
    double true_scale_hz = 0.0;        ///< Hz per unit setting at the boundary

    double t_final_us() const { return t_final_s * 1e6; }
    double true_scale() const;  ///< rad/us per unit setting
};

/// Parses and validates a JSON config; Hz/s fields become rad/us and us here.
RunConfig parse_config(const std::string& text);

/// Inverse of parse_config: emits the boundary-unit JSON.
std::string serialize_config(const RunConfig& config);

}  // namespace rdr
