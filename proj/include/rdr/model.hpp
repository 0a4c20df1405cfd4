#pragma once

// System Hamiltonians in the rotating and displaced frames, drive terms, and
// the frame transformations connecting them.
//
// The full driven model, in the frame rotating at the bare qubit and mode
// frequencies, is
//   H(t) = sum_i chi_i n_i sz - (Omega_R/2) sx
//        + sum_i (-i eps_i a_i^dag e^{i s Omega_R t} + h.c.)
// with sideband sign s = -1 by default (drive below each mode), the choice for
// which the beam-splitter (cooling) term is resonant in the dressed frame:
// with these signs the static interaction-picture term is
//   H_eff = -sum_i chi_i (abar_i a_i^dag tau_- + h.c.),
// i.e. effective_jc_hamiltonian evaluated at b_i = -abar_i. The drive phase
// convention makes abar_i = eps_i / (i Omega_R - kappa_i/2) (s = -1) the
// steady coherent amplitude, rotating as e^{i s Omega_R t}.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "rdr/hilbert.hpp"

namespace rdr {

constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class FrameTag { RotatingLab, DisplacedRotating, EffectiveJC };

const char* frame_name(FrameTag tag);

/// Physical device rates, in angular units (rad/us) and us.
struct SystemParams {
    double chi_m = 0.0;       ///< half the memory dispersive shift, rad/us
    double chi_r = 0.0;       ///< half the readout dispersive shift, rad/us
    double kappa_m = 0.0;     ///< memory decay rate, 1/us
    double kappa_r = 0.0;     ///< readout linewidth, 1/us
    double t1_q = 0.0;        ///< qubit relaxation time, us
    double t2_echo_q = 0.0;   ///< qubit echo dephasing time, us
    double omega_rabi = 0.0;  ///< Rabi angular frequency, rad/us
    std::optional<double> anharmonicity;  ///< E_C, rad/us; only used for validity
    SpaceLayout layout = SpaceLayout::qubit_memory_readout();

    /// Paper device table, converted from Hz/s at the boundary.
    static SystemParams paper_defaults(int dim_memory = 30, int dim_readout = 10);

    void check() const;  ///< throws on non-positive rates or t2 > 2 t1
    /// True when Omega_R/chi >= 10 for both modes (effective model usable).
    bool effective_model_valid() const;
};

struct DriveParams {
    Complex eps_m = 0.0;       ///< sideband amplitude on memory, rad/us
    Complex eps_r = 0.0;       ///< sideband amplitude on readout, rad/us
    double detuning = 0.0;     ///< sideband detuning magnitude (= Omega_R), rad/us
    int sideband_sign = -1;    ///< -1: drive below each mode (cooling); +1: above
    double rabi_amplitude = 1.0;  ///< Rabi drive scale, as a fraction of omega_rabi
};

struct SidebandAmplitude {
    Complex exact;        ///< eps / (i Omega_R - kappa/2)
    Complex approximate;  ///< eps / (i Omega_R)
    double relative_gap;  ///< |exact - approximate| / |exact|
};

/// Steady displaced amplitude induced by a sideband drive.
SidebandAmplitude sideband_amplitude(Complex eps, double omega_rabi, double kappa);

/// Drive amplitude that produces a requested abar (inverse of the exact form).
Complex eps_for_abar(Complex abar, double omega_rabi, double kappa);

/// sum_i chi_i n_i sz on the full layout.
Operator dispersive_hamiltonian(const SystemParams& params);

/// Rabi + sideband terms evaluated at time t (rotating-lab frame).
Operator drive_hamiltonian(double t, const SystemParams& params, const DriveParams& drives);

/// Effective JC Hamiltonian, Eq.-2 form: sum_i chi_i (abar_i s+ a_i + h.c.),
/// with s+/s- the dressed-basis ladder operators.
Operator effective_jc_hamiltonian(const SystemParams& params, Complex abar_m, Complex abar_r);

/// Dressed-basis ladder operators on the full layout. The dressed excited
/// state is |+> = (|g>+|e>)/sqrt(2).
Operator dressed_sigma_plus(const SpaceLayout& layout);
Operator dressed_sigma_z(const SpaceLayout& layout);

/// Instantaneous rotation |g> -> |+>: prepares/unmaps the dressed basis.
/// to_dressed applies R rho R^dag with R = exp(-i pi/4 sigma_y).
DensityMatrix dressed_rotation(const DensityMatrix& rho, bool to_dressed);

/// Applies U(t) rho U(t)^dag with
/// U(t) = D_m(-abar_m e^{i s Omega_R t}) D_r(-abar_r e^{i s Omega_R t}),
/// removing the steady drive-induced amplitude. `inverse` applies U^dag rho U.
DensityMatrix displaced_frame_map(const DensityMatrix& rho, const SystemParams& params,
                                  Complex abar_m, Complex abar_r, double t,
                                  bool inverse = false, int sideband_sign = -1);

}  // namespace rdr
