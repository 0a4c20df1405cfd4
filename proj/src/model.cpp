#include "rdr/model.hpp"

#include <cmath>

namespace rdr {

const char* frame_name(FrameTag tag) {
    switch (tag) {
        case FrameTag::RotatingLab: return "rotating-lab";
        case FrameTag::DisplacedRotating: return "displaced-rotating";
        case FrameTag::EffectiveJC: return "effective-jc";
    }
    return "unknown";
}

SystemParams SystemParams::paper_defaults(int dim_memory, int dim_readout) {
    SystemParams p;
    p.chi_m = kTwoPi * 28.5e-3;   // 2chi_m/2pi = 57 kHz
    p.chi_r = kTwoPi * 0.3175;    // 2chi_r/2pi = 0.635 MHz
    p.kappa_m = 1.0 / 170.0;      // single-photon lifetime 170 us
    p.kappa_r = kTwoPi * 0.382;   // linewidth 0.382 MHz
    p.t1_q = 25.0;
    p.t2_echo_q = 20.0;
    p.omega_rabi = kTwoPi * 9.0;
    p.anharmonicity = kTwoPi * 265.0;
    p.layout = SpaceLayout::qubit_memory_readout(dim_memory, dim_readout);
    return p;
}

void SystemParams::check() const {
    if (chi_m <= 0 || chi_r <= 0 || kappa_m <= 0 || kappa_r <= 0 || t1_q <= 0 ||
        t2_echo_q <= 0 || omega_rabi <= 0)
        throw HilbertError("SystemParams: all rates must be strictly positive");
    if (t2_echo_q > 2.0 * t1_q + 1e-12)
        throw HilbertError("SystemParams: t2_echo exceeds 2*t1");
    if (layout.num_subsystems() != 3 || layout.dims[0] != 2)
        throw HilbertError("SystemParams: layout must be (qubit=2, memory, readout)");
}

bool SystemParams::effective_model_valid() const {
    bool ok = omega_rabi >= 10.0 * chi_m && omega_rabi >= 10.0 * chi_r;
    if (anharmonicity) ok = ok && omega_rabi < *anharmonicity;
    return ok;
}

SidebandAmplitude sideband_amplitude(Complex eps, double omega_rabi, double kappa) {
    SidebandAmplitude out;
    const Complex i(0.0, 1.0);
    out.exact = eps / (i * omega_rabi - kappa / 2.0);
    out.approximate = eps / (i * omega_rabi);
    out.relative_gap =
        std::abs(out.exact) > 0 ? std::abs(out.exact - out.approximate) / std::abs(out.exact)
                                : 0.0;
    return out;
}

Complex eps_for_abar(Complex abar, double omega_rabi, double kappa) {
    const Complex i(0.0, 1.0);
    return abar * (i * omega_rabi - kappa / 2.0);
}

Operator dispersive_hamiltonian(const SystemParams& params) {
    const SpaceLayout& L = params.layout;
    Operator sz = embed(pauli(Pauli::Z), L, 0);
    Operator nm = embed(number_operator(L.dims[1]), L, 1);
    Operator nr = embed(number_operator(L.dims[2]), L, 2);
    return Operator(L, params.chi_m * (nm.matrix() * sz.matrix()) +
                           params.chi_r * (nr.matrix() * sz.matrix()));
}

Operator drive_hamiltonian(double t, const SystemParams& params, const DriveParams& drives) {
    const SpaceLayout& L = params.layout;
    const Complex i(0.0, 1.0);
    const int s = drives.sideband_sign;
    Matrix h = -0.5 * drives.rabi_amplitude * params.omega_rabi *
               embed(pauli(Pauli::X), L, 0).matrix();
    const Complex phase = -i * std::exp(i * static_cast<double>(s) * params.omega_rabi * t);
    if (L.dims[1] >= 2) {
        Matrix adag = embed(annihilation(L.dims[1]).adjoint(), L, 1).matrix();
        h += drives.eps_m * phase * adag + std::conj(drives.eps_m * phase) * adag.adjoint();
    }
    if (L.dims[2] >= 2) {
        Matrix adag = embed(annihilation(L.dims[2]).adjoint(), L, 2).matrix();
        h += drives.eps_r * phase * adag + std::conj(drives.eps_r * phase) * adag.adjoint();
    }
    return Operator(L, std::move(h));
}

Operator dressed_sigma_plus(const SpaceLayout& layout) {
    // |d+><d-| with |d+-> = (|g> +- |e>)/sqrt(2)
    Matrix tp(2, 2);
    tp << 0.5, -0.5, 0.5, -0.5;
    return embed(tp, layout, 0);
}

Operator dressed_sigma_z(const SpaceLayout& layout) { return embed(pauli(Pauli::X), layout, 0); }

Operator effective_jc_hamiltonian(const SystemParams& params, Complex abar_m, Complex abar_r) {
    const SpaceLayout& L = params.layout;
    Matrix sp = dressed_sigma_plus(L).matrix();
    Matrix h = Matrix::Zero(L.total_dim(), L.total_dim());
    if (L.dims[1] >= 2) {
        Matrix a = embed(annihilation(L.dims[1]), L, 1).matrix();
        Matrix term = params.chi_m * abar_m * (sp * a);
        h += term + term.adjoint().eval();
    }
    if (L.dims[2] >= 2) {
        Matrix a = embed(annihilation(L.dims[2]), L, 2).matrix();
        Matrix term = params.chi_r * abar_r * (sp * a);
        h += term + term.adjoint().eval();
    }
    return Operator(L, std::move(h));
}

DensityMatrix dressed_rotation(const DensityMatrix& rho, bool to_dressed) {
    // R = exp(-i pi/4 sigma_y) maps |g> -> |d+> ... in 2x2 block form:
    // R|g> = (|g>+|e>)/sqrt(2)
    Matrix r(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    r << s, -s, s, s;
    Matrix rot = to_dressed ? r : Matrix(r.adjoint());
    Matrix R = embed(rot, rho.layout(), 0).matrix();
    return DensityMatrix(rho.layout(), R * rho.matrix() * R.adjoint(), false);
}

DensityMatrix displaced_frame_map(const DensityMatrix& rho, const SystemParams& params,
                                  Complex abar_m, Complex abar_r, double t, bool inverse,
                                  int sideband_sign) {
    const SpaceLayout& L = rho.layout();
    const Complex i(0.0, 1.0);
    const Complex rot =
        std::exp(i * static_cast<double>(sideband_sign) * params.omega_rabi * t);
    Matrix U = Matrix::Identity(L.total_dim(), L.total_dim());
    if (L.dims[1] >= 2 && abar_m != Complex(0.0)) {
        U = U * embed(displacement(-abar_m * rot, L.dims[1]), L, 1).matrix();
    }
    if (L.dims[2] >= 2 && abar_r != Complex(0.0)) {
        U = U * embed(displacement(-abar_r * rot, L.dims[2]), L, 2).matrix();
    }
    Matrix mapped = inverse ? Matrix(U.adjoint() * rho.matrix() * U)
                            : Matrix(U * rho.matrix() * U.adjoint());
    return DensityMatrix(L, std::move(mapped), false);
}

}  // namespace rdr
