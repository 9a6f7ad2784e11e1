#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcorr/json_io.hpp"
#include "qcorr/realization.hpp"

using namespace qcorr;

namespace {

std::vector<double> random_unit(std::mt19937& rng, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(d);
    double n = 0.0;
    for (auto& x : v) {
        x = g(rng);
        n += x * x;
    }
    for (auto& x : v) x /= std::sqrt(n);
    return v;
}

GramSystem chsh_vectors() {
    const double s = 1.0 / std::sqrt(2.0);
    GramSystem g;
    g.dim = 2;
    g.u = {{1.0, 0.0}, {0.0, 1.0}};
    g.v = {{s, s}, {s, -s}};
    return g;
}

}  // namespace

TEST_CASE("project_span keeps full-rank systems and projects to the smaller span") {
    SpanProjection sp = project_span(chsh_vectors());
    REQUIRE(sp.rank == 2);
    // Inner products preserved.
    GramSystem g = chsh_vectors();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(dot(sp.system.u[i], sp.system.v[j]) ==
                    Catch::Approx(dot(g.u[i], g.v[j])).margin(1e-12));

    // v side spans one dimension inside R^3: xi = 1.
    GramSystem h;
    h.dim = 3;
    h.u = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    h.v = {{0.5, 0.5, 0.0}, {0.25, 0.25, 0.0}};
    SpanProjection sh = project_span(h);
    REQUIRE(sh.rank == 1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(dot(sh.system.u[i], sh.system.v[j]) ==
                    Catch::Approx(dot(h.u[i], h.v[j])).margin(1e-12));

    GramSystem zero;
    zero.dim = 2;
    zero.u = {{0.0, 0.0}};
    zero.v = {{0.0, 0.0}};
    REQUIRE_THROWS_AS(project_span(zero), std::invalid_argument);
}

TEST_CASE("build_state produces the entangled pair states") {
    auto s1 = build_state(1);
    REQUIRE(s1.size() == 4);
    REQUIRE(std::abs(s1[0] - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    REQUIRE(std::abs(s1[1]) < 1e-15);
    REQUIRE(std::abs(s1[2]) < 1e-15);
    REQUIRE(std::abs(s1[3] - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

    auto s2 = build_state(2);
    REQUIRE(s2.size() == 16);
    for (std::size_t b = 0; b < 16; ++b) {
        const bool hit = b == 0b0000 || b == 0b0101 || b == 0b1010 || b == 0b1111;
        REQUIRE(std::abs(s2[b] - (hit ? cplx(0.5, 0.0) : cplx(0.0, 0.0))) < 1e-15);
    }
    REQUIRE(entanglement_entropy(s2, 2, 2) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("CHSH worked example: expectation grid and the 2d observables") {
    QuantumRealization r = realize(chsh_vectors());
    REQUIRE(r.xi == 2);
    REQUIRE(r.nu == 1);
    const double s = 1.0 / std::sqrt(2.0);
    const double grid[2][2] = {{s, s}, {s, -s}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(expectation(r, i, j) == Catch::Approx(grid[i][j]).margin(1e-12));

    // ⟨Φ+| C(u²) ⊗ C(v¹) |Φ+⟩ = ⟨u²|v¹⟩ = 1/√2.
    DenseMatrix op = kron(two_dim_observable(0.0, 1.0), two_dim_observable(s, s));
    const auto psi = build_state(1);
    const auto t = op.apply(psi);
    cplx val(0.0, 0.0);
    for (std::size_t k = 0; k < 4; ++k) val += std::conj(psi[k]) * t[k];
    REQUIRE(std::abs(val - cplx(s, 0.0)) < 1e-12);

    // The matching ±1 CHSH combination reaches its quantum maximum 2√2.
    CorrelationOutcome out = realized_outcome(r);
    BellFunctional f = BellFunctional::zero(Scenario(2, 2), Convention::pm_one);
    f.coeff_joint = {{1.0, 1.0}, {1.0, -1.0}};
    REQUIRE(f.evaluate(out) == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("realize reproduces random vector systems exactly") {
    std::mt19937 rng(71);
    for (int t = 0; t < 40; ++t) {
        const std::size_t xi = 1 + rng() % 6;
        const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
        GramSystem g;
        g.dim = xi;
        for (std::size_t i = 0; i < m; ++i) g.u.push_back(random_unit(rng, xi));
        for (std::size_t j = 0; j < n; ++j) g.v.push_back(random_unit(rng, xi));
        QuantumRealization r = realize(g);
        REQUIRE(verify_against_gram(r, g) <= 1e-9);
        // For entangled registers the observables are traceless Pauli sums,
        // so the marginals vanish (the nu=0 scalar case has no such reason).
        if (r.nu >= 1) {
            CorrelationOutcome out = realized_outcome(r);
            for (double x : out.marginals_a) REQUIRE(std::abs(x) < 1e-10);
            for (double x : out.marginals_b) REQUIRE(std::abs(x) < 1e-10);
        }
        const double entropy = r.nu == 0 ? 0.0 : entanglement_entropy(r.state, r.nu, r.nu);
        REQUIRE(entropy == Catch::Approx(double(r.xi / 2)).margin(1e-8));
    }
}

TEST_CASE("one-dimensional systems need no entanglement") {
    GramSystem g;
    g.dim = 1;
    g.u = {{1.0}, {-0.5}};
    g.v = {{0.25}};
    QuantumRealization r = realize(g);
    REQUIRE(r.nu == 0);
    REQUIRE(r.n_qubits == 0);
    REQUIRE(verify_against_gram(r, g) < 1e-15);
}

TEST_CASE("jl_dimension formula") {
    REQUIRE(jl_dimension(0.5, 100) == 222);
    REQUIRE_THROWS_AS(jl_dimension(1.5, 100), std::invalid_argument);
    REQUIRE_THROWS_AS(jl_dimension(0.5, 1), std::invalid_argument);
}

TEST_CASE("jl_reduce is a no-op when the target dimension is not smaller") {
    std::mt19937 rng(73);
    GramSystem g;
    g.dim = 4;
    for (int i = 0; i < 3; ++i) g.u.push_back(random_unit(rng, 4));
    for (int j = 0; j < 3; ++j) g.v.push_back(random_unit(rng, 4));
    JlResult r = jl_reduce(g, 0.5, 9);
    REQUIRE_FALSE(r.reduced);
    REQUIRE(r.system.dim == 4);
    REQUIRE(r.system.u == g.u);
}

TEST_CASE("jl_reduce meets the distortion bound and is seed-deterministic") {
    std::mt19937 rng(79);
    GramSystem g;
    g.dim = 400;
    for (int i = 0; i < 10; ++i) g.u.push_back(random_unit(rng, 400));
    for (int j = 0; j < 10; ++j) g.v.push_back(random_unit(rng, 400));
    JlResult r = jl_reduce(g, 0.5, 5);
    REQUIRE(r.reduced);
    REQUIRE(r.target_dim < 400);
    REQUIRE(r.max_norm_distortion <= 0.5);
    REQUIRE(r.max_distance_distortion <= 0.5);
    JlResult r2 = jl_reduce(g, 0.5, 5);
    REQUIRE(r2.seed_used == r.seed_used);
    REQUIRE(r2.system.u == r.system.u);
}

TEST_CASE("realization JSON round trip preserves expectations") {
    QuantumRealization r = realize(chsh_vectors());
    QuantumRealization r2 = realization_from_json(realization_to_json(r));
    REQUIRE(r2.nu == r.nu);
    REQUIRE(r2.xi == r.xi);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(expectation(r2, i, j) == Catch::Approx(expectation(r, i, j)).margin(1e-12));
}
