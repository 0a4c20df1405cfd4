#pragma once

// Truncated-Fock-space operator algebra: layouts, operators, states.
//
// Conventions used throughout:
//   - basis ordering (qubit, memory, readout), qubit basis (ground, excited)
//   - internal units: angular frequency in rad/us, time in us
//   - matrices are dense Eigen; sparse views are taken where dynamics needs them

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rdr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-9;

struct HilbertError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered list of subsystem dimensions. A dimension of 1 marks a frozen
/// (identity-only) subsystem; ladder operators require dim >= 2.
struct SpaceLayout {
    std::vector<int> dims;
    std::vector<std::string> labels;

    SpaceLayout() = default;
    SpaceLayout(std::vector<int> d, std::vector<std::string> l);

    int total_dim() const;
    int num_subsystems() const { return static_cast<int>(dims.size()); }

    /// The standard tripartite layout (qubit, memory, readout).
    static SpaceLayout qubit_memory_readout(int dim_memory = 30, int dim_readout = 10);

    bool operator==(const SpaceLayout& other) const { return dims == other.dims; }
};

/// Complex square matrix tied to a layout.
class Operator {
public:
    Operator() = default;
    Operator(SpaceLayout layout, Matrix m);

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return mat_; }
    Matrix& matrix() { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

    bool is_hermitian(double tol = kHermitianTol) const;
    Operator dagger() const;
    Operator operator*(const Operator& rhs) const;
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(Complex scalar) const;

    SparseMatrix sparse(double prune_tol = 0.0) const;

private:
    SpaceLayout layout_;
    Matrix mat_;
};

Operator operator*(Complex scalar, const Operator& op);

/// System state. Validity (trace one, Hermitian, positive up to the numerical
/// floor) is checked on construction from raw matrices.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(SpaceLayout layout, Matrix m, bool validate = true);

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

    double trace_real() const { return mat_.trace().real(); }
    double purity() const { return (mat_ * mat_).trace().real(); }
    Complex expectation(const Operator& op) const;
    Complex expectation(const Matrix& op) const;
    void validate() const;

private:
    SpaceLayout layout_;
    Matrix mat_;
};

// --- single-subsystem building blocks -------------------------------------

/// sqrt(n) at entry (n-1, n); throws for dim < 2.
Matrix annihilation(int dim);
Matrix number_operator(int dim);
Matrix identity(int dim);

enum class Pauli { X, Y, Z, Plus, Minus };

/// 2x2 Pauli/ladder matrices in the (ground, excited) basis;
/// sigma_- |e> = |g>, sigma_z = diag(-1, +1) so <e|sz|e> = +1.
Matrix pauli(Pauli which);

/// Displacement operator exp(alpha a^dag - alpha^* a) by scaling-and-squaring
/// matrix exponential. Warns (returns flag via optional pointer) when the
/// displaced-vacuum norm error exceeds 1e-6.
Matrix displacement(Complex alpha, int dim, double* truncation_error = nullptr);

// --- composition ------------------------------------------------------------

/// op acting on subsystem `slot`, identity elsewhere, in layout order.
Operator embed(const Matrix& op, const SpaceLayout& layout, int slot);

/// Kronecker product in layout order (factor per subsystem).
Matrix kron(const Matrix& a, const Matrix& b);

// --- states -----------------------------------------------------------------

DensityMatrix fock_state(int n, int dim);
DensityMatrix coherent_state(Complex alpha, int dim);
/// Closed-form Fock amplitudes exp(-|a|^2/2) a^n / sqrt(n!).
Vector coherent_amplitudes(Complex alpha, int dim);
/// Geometric distribution p_n ~ (nbar/(nbar+1))^n, renormalized over the
/// truncated space.
DensityMatrix thermal_state(double nbar, int dim);

/// Tensor product of single-subsystem states onto a layout.
DensityMatrix product_state(const SpaceLayout& layout, const std::vector<Matrix>& factors);

/// Reduced state of subsystem `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);
Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, int keep);

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
double fidelity(const Matrix& a, const Matrix& b);

}  // namespace rdr
