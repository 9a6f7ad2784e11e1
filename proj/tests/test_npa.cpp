#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcorr/npa.hpp"

using namespace qcorr;

namespace {

ProjectorSymbol E(std::size_t meas, std::size_t out) { return {0, meas, out}; }
ProjectorSymbol F(std::size_t meas, std::size_t out) { return {1, meas, out}; }

CorrelationOutcome quantum_chsh_point() {
    CorrelationOutcome x;
    x.scenario = Scenario(2, 2);
    x.convention = Convention::zero_one;
    x.marginals_a = {0.5, 0.5};
    x.marginals_b = {0.5, 0.5};
    const double q = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
    x.joint = {{q, q}, {q, 1.0 - q}};
    return x;
}

CorrelationOutcome pr_box() {
    CorrelationOutcome x;
    x.scenario = Scenario(2, 2);
    x.convention = Convention::zero_one;
    x.marginals_a = {0.5, 0.5};
    x.marginals_b = {0.5, 0.5};
    x.joint = {{1.0, 1.0}, {1.0, 0.0}};
    return x;
}

}  // namespace

TEST_CASE("canonical_form: idempotence, ordering, and orthogonality") {
    // E¹E¹ -> E¹
    auto r = canonical_form({E(0, 0), E(0, 0)});
    REQUIRE_FALSE(r.zero);
    REQUIRE(r.seq == OperatorSequence{E(0, 0)});
    // F¹E¹ -> E¹F¹ (parties commute)
    r = canonical_form({F(0, 0), E(0, 0)});
    REQUIRE_FALSE(r.zero);
    REQUIRE(r.seq == OperatorSequence{E(0, 0), F(0, 0)});
    // Orthogonal outcomes of the same measurement annihilate.
    r = canonical_form({E(0, 0), E(0, 1)});
    REQUIRE(r.zero);
    // Commuting a B symbol through does not hide an orthogonality clash.
    r = canonical_form({E(0, 0), F(0, 0), E(0, 1)});
    REQUIRE(r.zero);
    // Canonical form is a fixed point.
    std::mt19937 rng(17);
    for (int t = 0; t < 200; ++t) {
        OperatorSequence s;
        const std::size_t len = 1 + rng() % 5;
        for (std::size_t k = 0; k < len; ++k)
            s.push_back({int(rng() % 2), std::size_t(rng() % 3), std::size_t(rng() % 2)});
        auto c1 = canonical_form(s);
        if (c1.zero) continue;
        auto c2 = canonical_form(c1.seq);
        REQUIRE_FALSE(c2.zero);
        REQUIRE(c2.seq == c1.seq);
    }
}

TEST_CASE("sequence sets have the expected sizes") {
    const GeneralScenario chsh = GeneralScenario::binary(Scenario(2, 2));
    REQUIRE(build_sequences(chsh, NpaLevel::one).size() == 5);
    REQUIRE(build_sequences(chsh, NpaLevel::one_ab).size() == 9);
    REQUIRE(build_sequences(chsh, NpaLevel::two).size() == 13);
    const GeneralScenario s33 = GeneralScenario::binary(Scenario(3, 3));
    REQUIRE(build_sequences(s33, NpaLevel::one_ab).size() == 16);
}

TEST_CASE("moment matrix structure for the smallest scenario") {
    MomentProblem mp = build_moment_problem(GeneralScenario::binary(Scenario(1, 1)), NpaLevel::one);
    REQUIRE(mp.sequences.size() == 3);
    REQUIRE(mp.zero_cells.empty());
    // Γ[E,E] shares a class with Γ[I,E] (projector idempotence).
    const std::string key = detail::moment_key({E(0, 0)});
    REQUIRE(mp.classes.at(key).size() == 2);
}

TEST_CASE("relaxed maximum of the CHSH facet expression") {
    const double target = std::sqrt(2.0) - 1.0;
    NpaBoundResult r1 = npa_bound(chsh_functional_zero_one(), NpaLevel::one);
    REQUIRE(r1.matrix_size == 5);
    REQUIRE(r1.value == Catch::Approx(target).margin(2e-4));
    REQUIRE(r1.value >= target - 1e-6);
    NpaBoundResult r2 = npa_bound(chsh_functional_zero_one(), NpaLevel::one_ab);
    REQUIRE(r2.value == Catch::Approx(target).margin(2e-4));
    // Deeper levels never loosen the bound.
    REQUIRE(r2.value <= r1.value + 1e-5);
    NpaBoundResult rpm = npa_bound(chsh_functional_pm_one(), NpaLevel::one);
    REQUIRE(rpm.value == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-3));
}

TEST_CASE("zero objective and level monotonicity on random expressions") {
    BellFunctional z = BellFunctional::zero(Scenario(2, 2), Convention::zero_one);
    REQUIRE(npa_bound(z, NpaLevel::one).value == Catch::Approx(0.0).margin(1e-6));

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        BellFunctional f = BellFunctional::zero(Scenario(2, 2), Convention::zero_one);
        for (auto& c : f.coeff_a) c = u(rng);
        for (auto& c : f.coeff_b) c = u(rng);
        for (auto& row : f.coeff_joint)
            for (auto& c : row) c = u(rng);
        const double b1 = npa_bound(f, NpaLevel::one, 1e-7, 100000).value;
        const double b1ab = npa_bound(f, NpaLevel::one_ab, 1e-7, 100000).value;
        const double b2 = npa_bound(f, NpaLevel::two, 1e-7, 100000).value;
        REQUIRE(b1ab <= b1 + 1e-5);
        REQUIRE(b2 <= b1ab + 1e-5);
        // Every deterministic behavior stays below the relaxed maximum.
        ClassicalMax cm = classical_max(f);
        REQUIRE(cm.value <= b1 + 1e-5);
    }
}

TEST_CASE("membership: quantum point accepted, PR box rejected") {
    NpaMembership in = membership_check(quantum_chsh_point(), NpaLevel::one);
    REQUIRE(in.converged);
    REQUIRE(in.inside);
    NpaMembership out = membership_check(pr_box(), NpaLevel::one);
    REQUIRE(out.converged);
    REQUIRE_FALSE(out.inside);
    REQUIRE(out.lambda < -1e-3);
}

TEST_CASE("deterministic behaviors lie inside every level") {
    CorrelationOutcome x = deterministic_vertex(Scenario(2, 2), {1, 0, 0, 1});
    NpaMembership r = membership_check(x, NpaLevel::one_ab);
    REQUIRE(r.converged);
    REQUIRE(r.inside);
}

TEST_CASE("probability table validation catches bad inputs") {
    ProbabilityTable t = outcome_to_table(quantum_chsh_point());
    REQUIRE_NOTHROW(t.validate());
    ProbabilityTable bad = t;
    bad.pa[0] = {0.7, 0.7};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    ProbabilityTable sig = t;
    sig.pab[0][0][0][0] += 0.2;  // breaks the A-side marginal consistency
    REQUIRE_THROWS_AS(sig.validate(), std::invalid_argument);
}
