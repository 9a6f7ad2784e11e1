#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcorr/dense.hpp"
#include "qcorr/gf2.hpp"
#include "qcorr/pauli.hpp"

using namespace qcorr;

namespace {

DenseMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(d(rng), d(rng));
    return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) w = std::max(w, std::abs(a(i, j) - b(i, j)));
    return w;
}

Gf2Matrix random_gf2(std::mt19937& rng, std::size_t r, std::size_t c) {
    Gf2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng() & 1);
    return m;
}

PauliString random_pauli(std::mt19937& rng, std::size_t n) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) {
        p.u[q] = rng() & 1;
        p.v[q] = rng() & 1;
    }
    p.phase_exp = int(rng() % 4);
    return p;
}

}  // namespace

TEST_CASE("kron is associative and multiplicative") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        DenseMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 3),
                    c = random_matrix(rng, 3, 2);
        REQUIRE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
    }
    // kron(A,B)·kron(C,D) = kron(AC, BD)
    for (int t = 0; t < 20; ++t) {
        DenseMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3);
        DenseMatrix c = random_matrix(rng, 2, 2), d = random_matrix(rng, 3, 3);
        REQUIRE(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
    }
}

TEST_CASE("hermitian_eig reconstructs and sorts descending") {
    std::mt19937 rng(5);
    DenseMatrix a = random_matrix(rng, 6, 6);
    DenseMatrix h = (a + a.adjoint()) * cplx(0.5, 0.0);
    EigResult e = hermitian_eig(h);
    for (std::size_t k = 0; k + 1 < e.eigenvalues.size(); ++k)
        REQUIRE(e.eigenvalues[k] >= e.eigenvalues[k + 1]);
    // V diag(λ) V† = H
    DenseMatrix d(6, 6);
    for (std::size_t k = 0; k < 6; ++k) d(k, k) = e.eigenvalues[k];
    REQUIRE(max_abs_diff(e.eigenvectors * d * e.eigenvectors.adjoint(), h) < 1e-10);
    REQUIRE_THROWS_AS(hermitian_eig(random_matrix(rng, 4, 4)), std::invalid_argument);
}

TEST_CASE("psd_project clips negative eigenvalues") {
    std::mt19937 rng(7);
    DenseMatrix a = random_matrix(rng, 5, 5);
    DenseMatrix h = (a + a.adjoint()) * cplx(0.5, 0.0);
    DenseMatrix p = psd_project(h);
    EigResult e = hermitian_eig(p);
    for (double ev : e.eigenvalues) REQUIRE(ev >= -1e-10);
    // Projection is idempotent.
    REQUIRE(max_abs_diff(psd_project(p), p) < 1e-10);
}

TEST_CASE("gf2 arithmetic: associativity, inverse, rank") {
    std::mt19937 rng(23);
    for (int t = 0; t < 50; ++t) {
        Gf2Matrix a = random_gf2(rng, 5, 6), b = random_gf2(rng, 6, 4), c = random_gf2(rng, 4, 7);
        REQUIRE((a * b) * c == a * (b * c));
    }
    // Invertible matrices: A·A⁻¹ = I.
    int found = 0;
    for (int t = 0; t < 100 && found < 10; ++t) {
        Gf2Matrix a = random_gf2(rng, 6, 6);
        auto inv = a.inverse();
        if (!inv) continue;
        ++found;
        Gf2Matrix prod = a * *inv;
        Gf2Matrix id(6, 6);
        for (std::size_t i = 0; i < 6; ++i) id.set(i, i, 1);
        REQUIRE(prod == id);
        REQUIRE(a.rank() == 6);
    }
    REQUIRE(found == 10);
}

TEST_CASE("gf2 solve returns consistent solutions") {
    std::mt19937 rng(29);
    for (int t = 0; t < 30; ++t) {
        Gf2Matrix a = random_gf2(rng, 8, 5);
        if (a.rank() < 5) continue;
        Gf2Matrix x = random_gf2(rng, 5, 3);
        Gf2Matrix b = a * x;
        auto sol = a.solve(b);
        REQUIRE(sol.has_value());
        REQUIRE(a * *sol == b);
    }
}

TEST_CASE("symplectic form and is_symplectic") {
    Gf2Matrix p = Gf2Matrix::symplectic_form(4);
    // P = [[0,I],[I,0]].
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            REQUIRE(p.get(i, j) == ((i + 2) % 4 == j ? 1 : 0));
    Gf2Matrix id(4, 4);
    for (std::size_t i = 0; i < 4; ++i) id.set(i, i, 1);
    REQUIRE(id.is_symplectic());
    REQUIRE(p.is_symplectic());
}

TEST_CASE("pauli product matches dense matrices on all single-qubit pairs") {
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (char la : letters)
        for (char lb : letters) {
            PauliString a = PauliString::from_letters(std::string(1, la));
            PauliString b = PauliString::from_letters(std::string(1, lb));
            REQUIRE(max_abs_diff((a * b).to_matrix(), a.to_matrix() * b.to_matrix()) < 1e-14);
        }
}

TEST_CASE("pauli product and apply match dense matrices on random strings") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + rng() % 3;
        PauliString a = random_pauli(rng, n), b = random_pauli(rng, n);
        REQUIRE(max_abs_diff((a * b).to_matrix(), a.to_matrix() * b.to_matrix()) < 1e-13);
        // apply vs explicit matrix-vector product
        std::vector<cplx> psi(std::size_t(1) << n);
        for (auto& x : psi) x = cplx(d(rng), d(rng));
        const auto via_apply = a.apply(psi);
        const auto via_matrix = a.to_matrix().apply(psi);
        for (std::size_t i = 0; i < psi.size(); ++i)
            REQUIRE(std::abs(via_apply[i] - via_matrix[i]) < 1e-13);
        // commutation agrees with dense commutator
        DenseMatrix comm = a.to_matrix() * b.to_matrix() + (b.to_matrix() * a.to_matrix()) * cplx(-1.0, 0.0);
        REQUIRE(a.commutes_with(b) == (comm.max_abs() < 1e-12));
        REQUIRE(a.commutes_with(b) == (symplectic_product(pauli_encode(a), pauli_encode(b)) == 0));
    }
}

TEST_CASE("binary encoding is a phase-free homomorphism") {
    std::mt19937 rng(37);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng() % 4;
        PauliString a = random_pauli(rng, n), b = random_pauli(rng, n);
        const auto ea = pauli_encode(a), eb = pauli_encode(b), eab = pauli_encode(a * b);
        for (std::size_t i = 0; i < eab.size(); ++i) REQUIRE(eab[i] == (ea[i] ^ eb[i]));
        // decode inverts encode up to phase
        REQUIRE(pauli_decode(ea).same_letters(a));
    }
}
