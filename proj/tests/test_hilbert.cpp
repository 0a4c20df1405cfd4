#include <random>

#include "doctest.h"
#include "rdr/hilbert.hpp"

using namespace rdr;

TEST_CASE("annihilation matrix elements") {
    Matrix a2 = annihilation(2);
    CHECK(a2(0, 1) == Complex(1.0));
    CHECK(a2(0, 0) == Complex(0.0));
    CHECK(a2(1, 0) == Complex(0.0));
    CHECK(a2(1, 1) == Complex(0.0));

    Matrix a3 = annihilation(3);
    CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(a3(0, 1) == Complex(1.0));

    CHECK_THROWS_AS(annihilation(1), HilbertError);
}

TEST_CASE("a|n> = sqrt(n)|n-1> on every basis vector") {
    const int dim = 12;
    Matrix a = annihilation(dim);
    for (int n = 1; n < dim; ++n) {
        Vector ket = Vector::Zero(dim);
        ket(n) = 1.0;
        Vector lowered = a * ket;
        Vector expected = Vector::Zero(dim);
        expected(n - 1) = std::sqrt(static_cast<double>(n));
        CHECK((lowered - expected).norm() == 0.0);
    }
}

TEST_CASE("truncated commutator [a, adag] has -(dim-1) in the corner") {
    const int dim = 10;
    Matrix a = annihilation(dim);
    Matrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int n = 0; n < dim - 1; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-12);
    CHECK(std::abs(comm(dim - 1, dim - 1) - (1.0 - dim)) < 1e-12);
}

TEST_CASE("pauli conventions") {
    Matrix z = pauli(Pauli::Z);
    CHECK(z(0, 0) == Complex(-1.0));  // ground
    CHECK(z(1, 1) == Complex(1.0));   // excited

    // sigma_- |e> = |g>
    Matrix minus = pauli(Pauli::Minus);
    Vector e(2);
    e << 0.0, 1.0;
    Vector g(2);
    g << 1.0, 0.0;
    CHECK((minus * e - g).norm() == 0.0);

    // minus * plus projects onto ground
    Matrix proj = minus * pauli(Pauli::Plus);
    CHECK(std::abs(proj(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(proj(1, 1)) < 1e-15);

    // x eigenvectors are the dressed states (|g> +- |e>)/sqrt(2)
    Eigen::SelfAdjointEigenSolver<Matrix> es(pauli(Pauli::X));
    CHECK(std::abs(es.eigenvalues()(0) + 1.0) < 1e-14);
    CHECK(std::abs(es.eigenvalues()(1) - 1.0) < 1e-14);
    Vector plus = es.eigenvectors().col(1);
    CHECK(std::abs(std::abs(plus(0)) - 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("embed basics and commuting slots") {
    auto L = SpaceLayout::qubit_memory_readout(4, 3);
    Operator id = embed(identity(4), L, 1);
    CHECK((id.matrix() - Matrix::Identity(24, 24)).norm() == 0.0);

    Operator am = embed(annihilation(4), L, 1);
    Operator ardag = embed(annihilation(3).adjoint(), L, 2);
    CHECK((am.matrix() * ardag.matrix() - ardag.matrix() * am.matrix()).norm() < 1e-14);

    CHECK_THROWS_AS(embed(identity(5), L, 1), HilbertError);
}

TEST_CASE("embed preserves spectra with multiplicity") {
    auto L = SpaceLayout({2, 3}, {});
    Matrix n3 = number_operator(3);
    Operator emb = embed(n3, L, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(emb.matrix(), Eigen::EigenvaluesOnly);
    // eigenvalues 0,1,2 each doubled
    std::vector<double> expect = {0, 0, 1, 1, 2, 2};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(es.eigenvalues()(i) - expect[i]) < 1e-12);
}

TEST_CASE("displacement unitarity and overlap") {
    CHECK((displacement(0.0, 8) - Matrix::Identity(8, 8)).norm() < 1e-14);

    const int dim = 16;
    Matrix d = displacement(1.0, dim);
    Matrix dm = displacement(-1.0, dim);
    CHECK((d * dm - Matrix::Identity(dim, dim)).norm() < 1e-9);

    // <0|D(alpha)|0> = exp(-|alpha|^2/2)
    CHECK(std::abs(d(0, 0).real() - 0.60653065971263342) < 1e-9);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        Complex alpha(u(rng), u(rng));
        alpha *= std::sqrt(dim / 4.0) / std::abs(alpha) * std::abs(u(rng));
        Matrix dd = displacement(alpha, dim);
        CHECK((dd * dd.adjoint() - Matrix::Identity(dim, dim)).norm() < 1e-9);
    }
}

TEST_CASE("coherent state: expm path matches closed-form amplitudes") {
    const int dim = 24;
    Complex alpha(1.3, -0.4);
    DensityMatrix rho = coherent_state(alpha, dim);
    Vector amps = coherent_amplitudes(alpha, dim);
    Matrix expected = amps * amps.adjoint();
    expected /= expected.trace();
    CHECK((rho.matrix() - expected).norm() < 1e-9);
}

TEST_CASE("state factories") {
    DensityMatrix vac = thermal_state(0.0, 10);
    CHECK(std::abs(vac.matrix()(0, 0).real() - 1.0) < 1e-15);

    DensityMatrix th = thermal_state(1.0, 30);
    CHECK(std::abs(th.matrix()(0, 0).real() - 0.5) < 1e-8);
    CHECK(std::abs(th.matrix()(1, 1).real() - 0.25) < 1e-8);

    DensityMatrix coh = coherent_state(2.0, 30);
    double nbar = coh.expectation(number_operator(30)).real();
    CHECK(std::abs(nbar - 4.0) < 1e-6);

    CHECK_THROWS_AS(fock_state(5, 5), HilbertError);
}

TEST_CASE("partial trace") {
    auto L = SpaceLayout::qubit_memory_readout(6, 4);
    Matrix ground = Matrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    DensityMatrix rho = product_state(
        L, {ground, thermal_state(1.0, 6).matrix(), fock_state(0, 4).matrix()});

    // trace(embed(n_m) rho) = nbar of thermal(1) on the truncated space
    Operator nm = embed(number_operator(6), L, 1);
    double direct = rho.expectation(nm).real();
    double reduced = partial_trace(rho, 1).expectation(number_operator(6)).real();
    CHECK(std::abs(direct - reduced) < 1e-12);

    // exact factor recovery
    DensityMatrix mem = partial_trace(rho, 1);
    CHECK((mem.matrix() - thermal_state(1.0, 6).matrix()).norm() < 1e-12);
    CHECK(std::abs(mem.trace_real() - 1.0) < 1e-12);

    // Bell-like qubit-mode state reduces to the maximally mixed qubit
    auto L2 = SpaceLayout({2, 2}, {});
    Vector bell = Vector::Zero(4);
    bell(0) = 1.0 / std::sqrt(2.0);  // |g,0>
    bell(3) = 1.0 / std::sqrt(2.0);  // |e,1>
    DensityMatrix rho_bell(L2, bell * bell.adjoint());
    DensityMatrix q = partial_trace(rho_bell, 0);
    CHECK((q.matrix() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("partial_trace / embed duality on random states") {
    auto L = SpaceLayout({2, 4, 3}, {});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int dim = L.total_dim();
    Matrix raw(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) raw(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix rho = raw * raw.adjoint();
    rho /= rho.trace();
    DensityMatrix state(L, rho);

    Matrix a = annihilation(4) + 0.3 * number_operator(4);
    Complex lhs = state.expectation(embed(a, L, 1));
    Complex rhs = (a * partial_trace(state, 1).matrix()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("density matrix invariants enforced") {
    Matrix bad = Matrix::Identity(3, 3);  // trace 3
    CHECK_THROWS_AS(DensityMatrix(SpaceLayout({3}, {}), bad), HilbertError);
}
