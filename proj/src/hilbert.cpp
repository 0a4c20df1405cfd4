#include "rdr/hilbert.hpp"

#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace rdr {

SpaceLayout::SpaceLayout(std::vector<int> d, std::vector<std::string> l)
    : dims(std::move(d)), labels(std::move(l)) {
    if (dims.empty()) throw HilbertError("SpaceLayout: empty dimension list");
    for (int dim : dims) {
        if (dim < 1) throw HilbertError("SpaceLayout: dimensions must be >= 1");
    }
    if (labels.empty()) {
        for (size_t i = 0; i < dims.size(); ++i) labels.push_back("sub" + std::to_string(i));
    }
    if (labels.size() != dims.size())
        throw HilbertError("SpaceLayout: labels/dims length mismatch");
}

int SpaceLayout::total_dim() const {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

SpaceLayout SpaceLayout::qubit_memory_readout(int dim_memory, int dim_readout) {
    return SpaceLayout({2, dim_memory, dim_readout}, {"qubit", "memory", "readout"});
}

Operator::Operator(SpaceLayout layout, Matrix m) : layout_(std::move(layout)), mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() != layout_.total_dim())
        throw HilbertError("Operator: matrix size does not match layout dimension");
}

bool Operator::is_hermitian(double tol) const {
    double scale = std::max(1.0, mat_.norm());
    return (mat_ - mat_.adjoint()).norm() <= tol * scale;
}

Operator Operator::dagger() const { return Operator(layout_, mat_.adjoint()); }

Operator Operator::operator*(const Operator& rhs) const {
    if (!(layout_ == rhs.layout_)) throw HilbertError("Operator: layout mismatch in product");
    return Operator(layout_, mat_ * rhs.mat_);
}

Operator Operator::operator+(const Operator& rhs) const {
    if (!(layout_ == rhs.layout_)) throw HilbertError("Operator: layout mismatch in sum");
    return Operator(layout_, mat_ + rhs.mat_);
}

Operator Operator::operator-(const Operator& rhs) const {
    if (!(layout_ == rhs.layout_)) throw HilbertError("Operator: layout mismatch in difference");
    return Operator(layout_, mat_ - rhs.mat_);
}

Operator Operator::operator*(Complex scalar) const { return Operator(layout_, scalar * mat_); }

Operator operator*(Complex scalar, const Operator& op) { return op * scalar; }

SparseMatrix Operator::sparse(double prune_tol) const {
    SparseMatrix s = mat_.sparseView(1.0, prune_tol);
    s.makeCompressed();
    return s;
}

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix m, bool do_validate)
    : layout_(std::move(layout)), mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() != layout_.total_dim())
        throw HilbertError("DensityMatrix: matrix size does not match layout dimension");
    if (do_validate) validate();
}

void DensityMatrix::validate() const {
    if (std::abs(mat_.trace() - Complex(1.0, 0.0)) > kTraceTol)
        throw HilbertError("DensityMatrix: trace deviates from 1 beyond 1e-9");
    double scale = std::max(1.0, mat_.norm());
    if ((mat_ - mat_.adjoint()).norm() > kHermitianTol * scale * 10)
        throw HilbertError("DensityMatrix: not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw HilbertError("DensityMatrix: negative eigenvalue below positivity floor");
}

Complex DensityMatrix::expectation(const Operator& op) const { return expectation(op.matrix()); }

Complex DensityMatrix::expectation(const Matrix& op) const {
    return (op * mat_).trace();
}

Matrix annihilation(int dim) {
    if (dim < 2) throw HilbertError("annihilation: dimension must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix number_operator(int dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli(Pauli which) {
    Matrix m = Matrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (which) {
        case Pauli::X:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Pauli::Y:
            // |g>=index 0, |e>=index 1: sigma_y = [[0, -i],[i, 0]] in (g,e)
            m(0, 1) = -i;
            m(1, 0) = i;
            break;
        case Pauli::Z:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case Pauli::Plus:  // sigma_+ |g> = |e>
            m(1, 0) = 1.0;
            break;
        case Pauli::Minus:  // sigma_- |e> = |g>
            m(0, 1) = 1.0;
            break;
    }
    return m;
}

Matrix displacement(Complex alpha, int dim, double* truncation_error) {
    Matrix a = dim >= 2 ? annihilation(dim) : Matrix::Zero(1, 1);
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Matrix d = gen.exp();
    if (truncation_error) {
        // norm deficiency of the displaced vacuum measures the truncation bite
        Vector col0 = d.col(0);
        *truncation_error = std::abs(col0.squaredNorm() - 1.0);
    }
    return d;
}

Operator embed(const Matrix& op, const SpaceLayout& layout, int slot) {
    if (slot < 0 || slot >= layout.num_subsystems())
        throw HilbertError("embed: slot out of range");
    if (op.rows() != layout.dims[slot])
        throw HilbertError("embed: operator dimension does not match layout slot");
    Matrix result = Matrix::Identity(1, 1);
    for (int s = 0; s < layout.num_subsystems(); ++s) {
        result = (s == slot) ? kron(result, op) : kron(result, identity(layout.dims[s])).eval();
    }
    return Operator(layout, std::move(result));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

DensityMatrix fock_state(int n, int dim) {
    if (n >= dim || n < 0) throw HilbertError("fock_state: n out of range for dimension");
    Matrix m = Matrix::Zero(dim, dim);
    m(n, n) = 1.0;
    return DensityMatrix(SpaceLayout({dim}, {"mode"}), std::move(m));
}

Vector coherent_amplitudes(Complex alpha, int dim) {
    Vector c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

DensityMatrix coherent_state(Complex alpha, int dim) {
    Matrix d = displacement(alpha, dim);
    Vector psi = d.col(0);
    psi.normalize();  // absorb truncation deficit so state invariants hold exactly
    return DensityMatrix(SpaceLayout({dim}, {"mode"}), psi * psi.adjoint());
}

DensityMatrix thermal_state(double nbar, int dim) {
    if (nbar < 0) throw HilbertError("thermal_state: nbar must be >= 0");
    Matrix m = Matrix::Zero(dim, dim);
    if (nbar == 0) {
        m(0, 0) = 1.0;
    } else {
        double r = nbar / (nbar + 1.0);
        double p = 1.0;
        double total = 0.0;
        for (int n = 0; n < dim; ++n) {
            m(n, n) = p;
            total += p;
            p *= r;
        }
        m /= total;
    }
    return DensityMatrix(SpaceLayout({dim}, {"mode"}), std::move(m));
}

DensityMatrix product_state(const SpaceLayout& layout, const std::vector<Matrix>& factors) {
    if (static_cast<int>(factors.size()) != layout.num_subsystems())
        throw HilbertError("product_state: one factor required per subsystem");
    Matrix rho = Matrix::Identity(1, 1);
    for (int s = 0; s < layout.num_subsystems(); ++s) {
        if (factors[s].rows() != layout.dims[s])
            throw HilbertError("product_state: factor dimension mismatch");
        rho = kron(rho, factors[s]).eval();
    }
    return DensityMatrix(layout, std::move(rho));
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, int keep) {
    if (keep < 0 || keep >= static_cast<int>(dims.size()))
        throw HilbertError("partial_trace: slot out of range");
    int left = 1, right = 1;
    for (int s = 0; s < keep; ++s) left *= dims[s];
    for (int s = keep + 1; s < static_cast<int>(dims.size()); ++s) right *= dims[s];
    const int dk = dims[keep];
    Matrix out = Matrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            Complex sum = 0.0;
            for (int l = 0; l < left; ++l)
                for (int r = 0; r < right; ++r) {
                    int row = (l * dk + i) * right + r;
                    int col = (l * dk + j) * right + r;
                    sum += rho(row, col);
                }
            out(i, j) = sum;
        }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    Matrix reduced = partial_trace(rho.matrix(), rho.layout().dims, keep);
    SpaceLayout layout({rho.layout().dims[keep]}, {rho.layout().labels[keep]});
    return DensityMatrix(std::move(layout), std::move(reduced), false);
}

double fidelity(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    Matrix sqrt_a =
        es.eigenvectors() * evals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Matrix inner = sqrt_a * b * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Matrix> es2(inner, Eigen::EigenvaluesOnly);
    double f = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return f * f;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    return fidelity(a.matrix(), b.matrix());
}

}  // namespace rdr
