#pragma once

// Time-dependent Lindblad master-equation integration with pulse-sequence
// envelopes. The right-hand side is evaluated with sparse-operator products on
// the dense density matrix; a sector-reduced path exploits excitation-number
// conservation for large phase-symmetric runs.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdr/hilbert.hpp"
#include "rdr/integrator.hpp"
#include "rdr/model.hpp"

namespace rdr {

struct CollapseSet {
    std::vector<std::pair<SparseMatrix, double>> ops;  ///< (operator, rate)

    void add(const Operator& op, double rate);
    void add(const SparseMatrix& op, double rate);
};

/// {sqrt(kappa_m) a_m, sqrt(kappa_r) a_r, sqrt(1/T1) s-, sqrt(gphi/2) sz} on
/// the full layout; gamma_phi = 1/T2 - 1/(2 T1). Optional bath_occupation
/// adds thermal (a^dag) jumps on both modes.
CollapseSet collapse_operators(const SystemParams& params, double bath_occupation = 0.0);

/// Secular dressed-frame qubit dissipators for effective-JC simulations:
/// the bare sigma-/sigma-z channels split into tau_z / tau_+ / tau_- under a
/// strong Rabi drive. Mode dissipators are unchanged.
CollapseSet dressed_collapse_operators(const SystemParams& params, double bath_occupation = 0.0);

enum class RampKind { Cosine, Linear };

/// Monotone 0->1 envelope over [0, duration]; cosine is C^1 at the endpoints.
std::function<double(double)> ramp_envelope(RampKind kind, double duration);

enum class Channel { SidebandM, SidebandR, Rabi, QubitGate };

struct Segment {
    double duration = 0.0;  ///< zero only for instantaneous gates
    std::map<Channel, std::function<double(double)>> envelopes;  ///< local time in [0,dur]
    bool pi_half_gate = false;  ///< instantaneous pi/2 pulse at segment start
    std::string label;
};

struct PulseSequence {
    std::vector<Segment> segments;
    double total_duration() const;
    /// Envelope of one channel at global time t (0 outside its segments).
    double envelope_at(Channel ch, double t) const;
};

/// The reset sequence: sidebands up, Rabi up, hold, Rabi down + pi/2 gate,
/// sidebands down. Default ramps are 800 ns cosines.
PulseSequence rdr_sequence(double hold_duration, double ramp_duration = 0.8,
                           RampKind kind = RampKind::Cosine);

/// H(t) = sum_k coeff_k(t) * op_k. Hermiticity is the caller's business
/// (pair terms with conjugate coefficients).
struct HamiltonianTerm {
    SparseMatrix op;
    std::function<Complex(double)> coeff;  ///< null means constant 1
};

struct TimeDependentHamiltonian {
    std::vector<HamiltonianTerm> terms;

    static TimeDependentHamiltonian constant(const Operator& h);
    /// Adapter for an arbitrary time -> Operator callback (evaluated per RHS
    /// call; term lists are much cheaper and preferred).
    static TimeDependentHamiltonian from_function(const SpaceLayout& layout,
                                                  std::function<Operator(double)> fn);

    Matrix dense_at(double t, int dim) const;
    std::function<Operator(double)> callback;  ///< set only by from_function
    SpaceLayout callback_layout;
};

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    bool store_states = false;  ///< observables always; full states on request
    FrameTag frame = FrameTag::RotatingLab;
};

struct Trajectory {
    FrameTag frame = FrameTag::RotatingLab;
    std::vector<double> times;
    std::map<std::string, std::vector<double>> observables;
    std::vector<DensityMatrix> states;  ///< populated only when requested
};

/// The named observables recorded for tripartite layouts:
/// nbar_m, nbar_r, sigma_z, sigma_x, dressed_sigma_z, purity, trace.
struct ObservableSet {
    std::vector<std::pair<std::string, SparseMatrix>> linear;
    static ObservableSet standard_set(const SpaceLayout& layout);
};

/// Integrates drho/dt = -i[H(t),rho] + sum_k D[L_k] rho, sampling at `times`.
Trajectory evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h,
                  const CollapseSet& collapse, const std::vector<double>& times,
                  const EvolveOptions& opts = {}, const ObservableSet* observables = nullptr);

/// Spec-surface overload taking a time -> Operator callback.
Trajectory evolve(const DensityMatrix& rho0, const std::function<Operator(double)>& h_fn,
                  const CollapseSet& collapse, const std::vector<double>& times,
                  const EvolveOptions& opts = {});

// --- phase-symmetric sector reduction ---------------------------------------
//
// When every Hamiltonian term commutes with a conserved charge Q (here
// Q = n_m + n_r + dressed-qubit occupation) and every jump operator shifts Q
// by a fixed amount, density-matrix elements with equal bra and ket charge
// evolve autonomously. Phase-symmetric initial states (diagonal mixtures)
// live entirely in that block, which is orders of magnitude smaller than the
// full Liouville space.

class SectorReducedLindblad {
public:
    /// charge[i] = Q value of basis state i. Throws if any term/jump fails to
    /// shift the charge uniformly.
    SectorReducedLindblad(const std::vector<int>& charge,
                          std::vector<HamiltonianTerm> h_terms, const CollapseSet& collapse);

    int reduced_dim() const { return static_cast<int>(pairs_.size()); }

    /// Project a density matrix onto the equal-charge block.
    Vector project(const Matrix& rho) const;
    /// Reduced vector for a diagonal state, without forming the full matrix.
    Vector project_diagonal(const Eigen::VectorXd& populations) const;
    /// Embed a reduced vector back as a (sparse-support) matrix.
    Matrix unproject(const Vector& v, int dim) const;

    /// Evolve the reduced state, invoking observe(t, reduced) at each sample.
    void evolve(Vector& v, const std::vector<double>& times,
                const std::function<void(double, const Vector&)>& observe,
                const AdaptiveRKOptions& opts = {}) const;

    /// Tr[O rho] for an operator diagonal-in-charge (O must not mix charges).
    Complex expectation(const Vector& v, const SparseMatrix& op) const;
    /// Diagonal of the reduced state's partial trace onto subsystem `keep`.
    Eigen::VectorXd reduced_diagonal(const Vector& v, const std::vector<int>& dims,
                                     int keep) const;
    double trace(const Vector& v) const;

private:
    int dim_ = 0;
    std::vector<int> charge_;
    std::vector<std::pair<int, int>> pairs_;       // (row, col) with equal charge
    std::vector<int> pair_index_;                  // dim*dim -> reduced index or -1
    SparseMatrix generator_constant_;              // charge-preserving part, constant coeffs
    std::vector<std::pair<std::function<Complex(double)>, SparseMatrix>> generator_timedep_;
};

}  // namespace rdr
