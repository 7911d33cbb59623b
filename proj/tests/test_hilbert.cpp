#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "jcsim/errors.hpp"
#include "jcsim/hilbert.hpp"

using namespace jcsim;

namespace {

std::mt19937 rng(7001);

Matrix random_complex(int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

Matrix random_hermitian(int n) {
    Matrix m = random_complex(n);
    return 0.5 * (m + m.adjoint().eval());
}

Matrix random_density(int n) {
    Matrix a = random_complex(n);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace

TEST_CASE("dims validation") {
    CHECK_THROWS_AS(HilbertDims{1}.validate(), std::invalid_argument);
    HilbertDims d{2};
    d.validate();
    CHECK(d.total() == 4);
    CHECK(HilbertDims{40}.total() == 80);
}

TEST_CASE("fock annihilation matrix elements") {
    Matrix a2 = fock_annihilation(HilbertDims{2});
    CHECK(a2(0, 1).real() == doctest::Approx(1.0));
    CHECK(a2(0, 0) == Complex(0));
    CHECK(a2(1, 0) == Complex(0));
    CHECK(a2(1, 1) == Complex(0));

    Matrix a3 = fock_annihilation(HilbertDims{3});
    CHECK(a3(0, 1).real() == doctest::Approx(1.0));
    CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("truncated commutator [a, a^dag]") {
    const int nf = 40;
    Matrix a = fock_annihilation(HilbertDims{nf});
    Matrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i + 1 < nf; ++i) CHECK(std::abs(comm(i, i) - 1.0) < 1e-12);
    CHECK(std::abs(comm(nf - 1, nf - 1) - Complex(-(nf - 1))) < 1e-12);
    // off-diagonals vanish
    comm.diagonal().setZero();
    CHECK(comm.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qubit operators") {
    QubitOps q = qubit_ops();
    Matrix proj = q.sp * q.sm;
    CHECK(proj(0, 0).real() == doctest::Approx(1.0));
    CHECK(proj(1, 1) == Complex(0));

    Matrix sx2 = q.sx * q.sx;
    CHECK((sx2 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

    // (sz + 1)/2 annihilates the ground state
    Vector ground(2);
    ground << 0.0, 1.0;
    Vector nq = 0.5 * ((q.sz * ground).eval() + ground);
    CHECK(nq.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed identity and sigma_z") {
    HilbertDims d2{2};
    Matrix id = embed(Matrix::Identity(2, 2), Matrix::Identity(2, 2), d2);
    CHECK((id - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    Matrix sz = embed_qubit(qubit_ops().sz, d2);
    Eigen::Vector4cd expect(1.0, 1.0, -1.0, -1.0);
    CHECK((sz.diagonal() - expect).cwiseAbs().maxCoeff() == 0.0);
    sz.diagonal().setZero();
    CHECK(sz.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trace factorization over the tensor product") {
    // Tr(A kron B) = Tr A * Tr B, checked through the embedded projector pair
    for (int nf : {2, 4, 7, 11}) {
        HilbertDims d{nf};
        Matrix lhs = embed_qubit(qubit_ops().sp * qubit_ops().sm, d) *
                     embed_fock(fock_annihilation(d).adjoint() * fock_annihilation(d), d);
        const double expect = nf * (nf - 1) / 2.0;
        CHECK(std::abs(lhs.trace() - Complex(expect)) < 1e-12 * std::max(1.0, expect));
    }
}

TEST_CASE("embed rejects bad dims") {
    HilbertDims d{3};
    CHECK_THROWS_AS(embed(Matrix::Identity(3, 3), Matrix::Identity(3, 3), d),
                    std::invalid_argument);
    CHECK_THROWS_AS(embed(Matrix::Identity(2, 2), Matrix::Identity(2, 2), d),
                    std::invalid_argument);
}

TEST_CASE("partial trace of product states") {
    HilbertDims d{4};
    Matrix rho_g0 = ground_state_density(d);
    Matrix rq = partial_trace(rho_g0, d, Subsystem::qubit);
    CHECK(rq(1, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(rq(0, 0)) < 1e-15);

    // random product state is recovered exactly on both factors
    Matrix q = random_density(2);
    Matrix ph = random_density(d.n_fock);
    Matrix joint = embed(q, ph, d);
    CHECK((partial_trace(joint, d, Subsystem::qubit) - q).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((partial_trace(joint, d, Subsystem::photon) - ph).cwiseAbs().maxCoeff() < 1e-13);

    // trace is preserved
    Matrix rho = random_density(d.total());
    CHECK(std::abs(partial_trace(rho, d, Subsystem::qubit).trace() - rho.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(rho, d, Subsystem::photon).trace() - rho.trace()) < 1e-12);
}

TEST_CASE("partial trace of an entangled state gives maximally mixed reductions") {
    HilbertDims d{2};
    Vector bell = (basis_vector(d, 0, 0) + basis_vector(d, 1, 1)) / std::sqrt(2.0);
    Matrix rho = bell * bell.adjoint();

    Matrix rq = partial_trace(rho, d, Subsystem::qubit);
    CHECK((rq - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    Matrix rp = partial_trace(rho, d, Subsystem::photon);
    CHECK((rp - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hermitian eigenvalues") {
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.75;
    diag(1, 1) = 0.25;
    auto ev = hermitian_eigenvalues(diag);
    CHECK(ev(0) == doctest::Approx(0.25));
    CHECK(ev(1) == doctest::Approx(0.75));

    auto ev_sx = hermitian_eigenvalues(qubit_ops().sx);
    CHECK(ev_sx(0) == doctest::Approx(-1.0));
    CHECK(ev_sx(1) == doctest::Approx(1.0));

    Matrix h = random_hermitian(6);
    auto ev6 = hermitian_eigenvalues(h);
    CHECK(ev6.sum() == doctest::Approx(h.trace().real()).epsilon(1e-10));

    Matrix bad = random_complex(4);
    bad(0, 1) += Complex(0.5, 0.5);
    CHECK_THROWS_AS(hermitian_eigenvalues(bad), numerical_error);
}

TEST_CASE("eigenvalues of a density matrix sum to one") {
    for (int n : {2, 5, 8}) {
        Matrix rho = random_density(n);
        CHECK(hermitian_eigenvalues(rho).sum() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("embedding preserves the operator norm") {
    HilbertDims d{5};
    for (int rep = 0; rep < 5; ++rep) {
        Matrix q = random_complex(2);
        const double norm_q = q.jacobiSvd().singularValues()(0);
        const double norm_emb = embed_qubit(q, d).jacobiSvd().singularValues()(0);
        CHECK(norm_emb == doctest::Approx(norm_q).epsilon(1e-10));

        Matrix fop = random_complex(d.n_fock);
        const double norm_f = fop.jacobiSvd().singularValues()(0);
        const double norm_emb_f = embed_fock(fop, d).jacobiSvd().singularValues()(0);
        CHECK(norm_emb_f == doctest::Approx(norm_f).epsilon(1e-10));
    }
}

TEST_CASE("density checks") {
    HilbertDims d{3};
    check_density(ground_state_density(d));
    check_density(random_density(6));

    Matrix bad_trace = 2.0 * ground_state_density(d);
    CHECK_THROWS_AS(check_density(bad_trace), std::invalid_argument);

    Matrix not_herm = ground_state_density(d);
    not_herm(0, 1) = Complex(0.0, 1e-3);
    CHECK_THROWS_AS(check_density(not_herm), std::invalid_argument);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(check_density(neg), std::invalid_argument);
}
