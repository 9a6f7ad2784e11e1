// End-to-end acceptance checks for the correlation toolkit. Each numbered
// criterion prints one PASS/FAIL line; the process exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "qcorr/npa.hpp"
#include "qcorr/realization.hpp"
#include "qcorr/sdp.hpp"
#include "qcorr/stabilizer.hpp"

using namespace qcorr;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%2d. %-34s %s%s%s\n", number, name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  [", detail.empty() ? "" : (detail + "]").c_str());
    if (!ok) ++g_failures;
}

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

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Three-setting inequality of Collins–Gisin form, expressed over marginals
// and disagreement probabilities: classical maximum 0, quantum value ~0.25.
BellFunctional three_setting_functional() {
    BellFunctional f = BellFunctional::zero(Scenario(3, 3), Convention::zero_one);
    f.coeff_a = {0.5, 0.5, 0.0};
    f.coeff_b = {-0.5, -0.5, 0.0};
    f.coeff_joint = {{-0.5, -0.5, -0.5}, {-0.5, -0.5, 0.5}, {-0.5, 0.5, 0.0}};
    f.constant = 0.0;
    f.classical_bound = 0.0;
    return f;
}

}  // namespace

int main() {
    const double chsh_target = std::sqrt(2.0) - 1.0;

    // 1. Elliptope (suspension) upper bound on the CHSH facet expression.
    double ell_value = 0.0;
    {
        BoundResult r = elliptope_suspension_bound(chsh_functional_zero_one());
        ell_value = r.value;
        report(1, "CHSH elliptope bound", r.converged && std::abs(r.value - chsh_target) <= 1e-3,
               fmt(r.value));
    }

    // 2. Elliptope intersected with the no-signalling inequalities agrees.
    {
        BoundResult r = upper_bound_nc(chsh_functional_zero_one());
        report(2, "CHSH elliptope+RMet bound",
               r.converged && std::abs(r.value - ell_value) <= 1e-3, fmt(r.value));
    }

    // 3. Exact classical maxima in both conventions.
    {
        const double v01 = classical_max(chsh_functional_zero_one()).value;
        const double vpm = classical_max(chsh_functional_pm_one()).value;
        report(3, "CHSH classical maxima", v01 == 0.0 && vpm == 2.0,
               fmt(v01) + ", " + fmt(vpm));
    }

    // 4. Realization round trip: random systems and the worked CHSH vectors.
    std::vector<QuantumRealization> realizations;
    std::vector<std::size_t> ranks;
    {
        bool ok = true;
        double worst = 0.0;
        std::mt19937 rng(101);
        for (int t = 0; t < 200 && ok; ++t) {
            const std::size_t xi = 1 + rng() % 6;
            const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
            GramSystem g;
            g.dim = xi;
            for (std::size_t i = 0; i < m; ++i) g.u.push_back(random_unit(rng, xi));
            for (std::size_t j = 0; j < n; ++j) g.v.push_back(random_unit(rng, xi));
            QuantumRealization r = realize(g);
            const double dev = verify_against_gram(r, g);
            worst = std::max(worst, dev);
            if (dev > 1e-9) ok = false;
            realizations.push_back(std::move(r));
            ranks.push_back(project_span(g).rank);
        }
        const QuantumRealization r = realize(chsh_vectors());
        const double s = 1.0 / std::sqrt(2.0);
        const double grid[2][2] = {{s, s}, {s, -s}};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                if (std::abs(expectation(r, i, j) - grid[i][j]) > 1e-12) ok = false;
        // Cross expectation of the explicit two-dimensional observables.
        DenseMatrix op = kron(two_dim_observable(0.0, 1.0), two_dim_observable(s, s));
        const auto psi = build_state(1);
        const auto tpsi = op.apply(psi);
        cplx val(0.0, 0.0);
        for (std::size_t k = 0; k < 4; ++k) val += std::conj(psi[k]) * tpsi[k];
        if (std::abs(val - cplx(s, 0.0)) > 1e-12) ok = false;
        report(4, "realization round trip", ok, "max deviation " + fmt(worst));
    }

    // 5. Binary-symplectic transform and transformed-graph-state signs, nu<=5.
    {
        bool ok = true;
        std::string detail;
        for (std::size_t nu = 1; nu <= 5 && ok; ++nu) {
            const TransformReport rep = verify_transform(nu);
            if (!rep.ok) {
                ok = false;
                detail = "transform nu=" + std::to_string(nu) + ": " + rep.message;
                break;
            }
            Gf2Matrix theta(2 * nu, 2 * nu);
            for (std::size_t k = 0; k < nu; ++k) {
                theta.set(k, nu + k, 1);
                theta.set(nu + k, k, 1);
            }
            const std::vector<cplx> psi =
                apply_local_clifford_L(graph_state(GraphAdjacency(theta)), nu);
            const EigenSignReport signs =
                eigen_sign_check(psi, weyl_brauer(nu, GeneratorForm::z_form));
            std::vector<int> expected(2 * nu + 1, 0);
            for (std::size_t k = nu; k < 2 * nu; ++k) expected[k] = 1;
            if (signs.signs != expected || signs.max_residual > 1e-10) {
                ok = false;
                detail = "sign pattern nu=" + std::to_string(nu);
            }
        }
        report(5, "stabilizer pipeline nu<=5", ok, detail);
    }

    // 6. Orthogonality identity of the paired generators, both forms, nu<=4.
    {
        bool ok = true;
        double worst = 0.0;
        for (std::size_t nu = 1; nu <= 4; ++nu) {
            const auto psi = build_state(nu);
            for (GeneratorForm form : {GeneratorForm::z_form, GeneratorForm::x_form}) {
                GeneratorSet g = weyl_brauer(nu, form);
                for (std::size_t k = 0; k < 2 * nu + 1; ++k)
                    for (std::size_t l = 0; l < 2 * nu + 1; ++l) {
                        const PauliString op = g.generators[k].tensor(g.generators[l]);
                        const cplx got = state_dot(psi, op.apply(psi));
                        const double a_l = (l >= nu && l < 2 * nu) ? 1.0 : 0.0;
                        const double expect = k == l ? (a_l == 1.0 ? -1.0 : 1.0) : 0.0;
                        worst = std::max(worst, std::abs(got - cplx(expect, 0.0)));
                    }
            }
        }
        if (worst > 1e-10) ok = false;
        report(6, "orthogonality identity", ok, "max deviation " + fmt(worst));
    }

    // 7. No-signalling counterexamples from the biased one- and two-setting
    //    outcomes.
    {
        CorrelationOutcome bad;
        bad.scenario = Scenario(1, 1);
        bad.marginals_a = {0.75};
        bad.marginals_b = {0.75};
        bad.joint = {{0.75}};
        const NoSignallingReport rep = no_signalling_check(bad);
        bool ok = rep.violations.size() == 1 && rep.violations[0].inequality == 0;

        const double r2 = std::sqrt(2.0);
        CorrelationOutcome biased;
        biased.scenario = Scenario(2, 2);
        biased.marginals_a = {1.0 / (2.0 * r2), 1.0 / (2.0 * r2)};
        biased.marginals_b = {0.5, 0.5};
        biased.joint = {{(2.0 + r2) / 4.0, (2.0 - r2) / 4.0},
                        {(2.0 - r2) / 4.0, (2.0 - r2) / 4.0}};
        if (!no_signalling_check(biased).ok()) ok = false;
        const ElliptopeMembership em = correlation_elliptope_membership(biased);
        if (!(em.converged && em.inside)) ok = false;
        report(7, "no-signalling counterexamples", ok);
    }

    // 8. Moment-hierarchy bounds: CHSH value, level monotonicity, PR box.
    {
        bool ok = true;
        std::string detail;
        const double b1chsh = npa_bound(chsh_functional_zero_one(), NpaLevel::one).value;
        if (std::abs(b1chsh - chsh_target) > 1e-3) {
            ok = false;
            detail = "chsh level 1 " + fmt(b1chsh);
        }
        std::mt19937 rng(103);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int t = 0; t < 50 && ok; ++t) {
            BellFunctional f = BellFunctional::zero(Scenario(2, 2), Convention::zero_one);
            for (auto& c : f.coeff_a) c = u(rng);
            for (auto& c : f.coeff_b) c = u(rng);
            for (auto& row : f.coeff_joint)
                for (auto& c : row) c = u(rng);
            const double b1 = npa_bound(f, NpaLevel::one, 1e-7, 100000).value;
            const double b1ab = npa_bound(f, NpaLevel::one_ab, 1e-7, 100000).value;
            const double b2 = npa_bound(f, NpaLevel::two, 1e-7, 100000).value;
            if (b1ab > b1 + 1e-5 || b2 > b1ab + 1e-5) {
                ok = false;
                detail = "monotonicity broken at trial " + std::to_string(t);
            }
        }
        CorrelationOutcome pr;
        pr.scenario = Scenario(2, 2);
        pr.marginals_a = {0.5, 0.5};
        pr.marginals_b = {0.5, 0.5};
        pr.joint = {{1.0, 0.0}, {0.0, 0.0}};  // perfect disagreement on (1,1) only
        const NpaMembership m = membership_check(pr, NpaLevel::one);
        if (!m.converged || m.inside) {
            ok = false;
            detail = "PR box not rejected";
        }
        report(8, "moment-hierarchy checks", ok, detail);
    }

    // 9. Three-setting inequality: bound values in their reference windows.
    {
        BellFunctional f = three_setting_functional();
        bool ok = classical_max(f).value == 0.0;
        std::string detail;
        const BoundResult nc = upper_bound_nc(f, 1e-8, 400000);
        if (!nc.converged || std::abs(nc.value - 0.3660) > 2e-3) {
            ok = false;
            detail = "rmet bound " + fmt(nc.value);
        }
        const NpaBoundResult npa = npa_bound(f, NpaLevel::one_ab, 1e-8, 400000);
        if (npa.value < 0.25 - 1e-6 || npa.value > 0.2509 + 1e-3) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("hierarchy bound ") +
                      fmt(npa.value);
        }
        report(9, "three-setting inequality bounds", ok,
               detail.empty() ? fmt(nc.value) + ", " + fmt(npa.value) : detail);
    }

    // 10. Random-projection reduction with a realization cross-check.
    {
        bool ok = jl_dimension(0.5, 100) == 222;
        std::string detail;
        std::mt19937 rng(107);
        // 50 unit vectors confined to an 8-dimensional subspace of R^300 so
        // the reduced system stays realizable.
        GramSystem g;
        g.dim = 300;
        for (int t = 0; t < 50; ++t) {
            std::vector<double> w(300, 0.0);
            const auto small = random_unit(rng, 8);
            for (std::size_t k = 0; k < 8; ++k) w[k] = small[k];
            if (t < 25) g.u.push_back(w); else g.v.push_back(w);
        }
        const JlResult jl = jl_reduce(g, 0.5, 11);
        if (!jl.reduced || jl.max_norm_distortion > 0.5) {
            ok = false;
            detail = "norm distortion " + fmt(jl.max_norm_distortion);
        }
        // Scale into the unit ball, realize, and compare against the original
        // inner products within the reported additive error.
        GramSystem scaled = jl.system;
        for (auto& w : scaled.u)
            for (auto& c : w) c *= 0.8;
        for (auto& w : scaled.v)
            for (auto& c : w) c *= 0.8;
        const QuantumRealization r = realize(scaled);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.u.size(); ++i)
            for (std::size_t j = 0; j < g.v.size(); ++j)
                worst = std::max(worst, std::abs(expectation(r, i, j) -
                                                 0.64 * dot(g.u[i], g.v[j])));
        if (worst > 0.64 * jl.max_inner_product_error + 1e-6) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("expectation error ") +
                      fmt(worst);
        }
        report(10, "random projection + realize", ok,
               detail.empty() ? "expectation error " + fmt(worst) : detail);
    }

    // 11. Entanglement entropy across the A/B cut equals floor(xi/2).
    {
        bool ok = true;
        double worst = 0.0;
        for (std::size_t t = 0; t < realizations.size(); ++t) {
            const QuantumRealization& r = realizations[t];
            const double entropy =
                r.nu == 0 ? 0.0 : entanglement_entropy(r.state, r.nu, r.nu);
            worst = std::max(worst, std::abs(entropy - double(ranks[t] / 2)));
        }
        if (realizations.empty() || worst > 1e-8) ok = false;
        report(11, "entanglement entropy = floor(xi/2)", ok, "max deviation " + fmt(worst));
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
