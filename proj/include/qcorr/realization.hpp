#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/clifford.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/pauli.hpp"

namespace qcorr {

/// Observable as a real linear combination of Pauli strings on the full
/// register (kept in operator form so large registers never materialize a
/// dense matrix).
struct PauliSum {
    std::vector<std::pair<double, PauliString>> terms;

    std::vector<cplx> apply(const std::vector<cplx>& psi) const {
        std::vector<cplx> out(psi.size(), cplx(0.0, 0.0));
        for (const auto& [c, p] : terms) {
            std::vector<cplx> t = p.apply(psi);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * t[k];
        }
        return out;
    }

    DenseMatrix to_matrix() const {
        if (terms.empty()) throw std::invalid_argument("PauliSum: empty operator");
        DenseMatrix M = terms[0].second.to_matrix() * cplx(terms[0].first, 0.0);
        for (std::size_t k = 1; k < terms.size(); ++k)
            M = M + terms[k].second.to_matrix() * cplx(terms[k].first, 0.0);
        return M;
    }
};

struct QuantumRealization {
    std::size_t nu = 0;        // EPR pairs; register has 2*nu qubits
    std::size_t xi = 0;        // rank of the vector system realized
    std::size_t n_qubits = 0;  // 2*nu (0 for the trivial one-dimensional case)
    std::vector<cplx> state;
    std::vector<PauliSum> observables_a;
    std::vector<PauliSum> observables_b;
};

/// Orthonormal-basis coordinates of a vector system (modified Gram-Schmidt
/// with greedy residual pivoting). Inner products are preserved exactly up
/// to rounding; the output dimension is the numerical rank.
struct SpanProjection {
    GramSystem system;  // same vectors expressed in R^rank
    std::size_t rank = 0;
};

namespace detail {

/// Orthonormal basis of the span of a vector set (modified Gram-Schmidt
/// with greedy residual pivoting; residuals below tol count as zero).
inline std::vector<std::vector<double>> orthonormal_span(
    const std::vector<std::vector<double>>& vecs, std::size_t dim, double tol) {
    std::vector<std::vector<double>> basis;
    std::vector<std::vector<double>> residual = vecs;
    std::vector<bool> used(vecs.size(), false);
    while (basis.size() < std::min(vecs.size(), dim)) {
        std::size_t pick = vecs.size();
        double best = tol;
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            if (used[i]) continue;
            const double nrm = std::sqrt(dot(residual[i], residual[i]));
            if (nrm > best) {
                best = nrm;
                pick = i;
            }
        }
        if (pick == vecs.size()) break;
        used[pick] = true;
        std::vector<double> q = residual[pick];
        const double nrm = std::sqrt(dot(q, q));
        for (double& t : q) t /= nrm;
        basis.push_back(q);
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            if (used[i]) continue;
            const double c = dot(residual[i], q);
            for (std::size_t k = 0; k < dim; ++k) residual[i][k] -= c * q[k];
        }
    }
    return basis;
}

}  // namespace detail

inline SpanProjection project_span(const GramSystem& g, double tol = 1e-10) {
    g.validate();
    for (const auto& w : g.u)
        if (dot(w, w) > 1.0 + 2e-9) throw std::invalid_argument("project_span: vector norm > 1");
    for (const auto& w : g.v)
        if (dot(w, w) > 1.0 + 2e-9) throw std::invalid_argument("project_span: vector norm > 1");
    const auto basis_u = detail::orthonormal_span(g.u, g.dim, tol);
    const auto basis_v = detail::orthonormal_span(g.v, g.dim, tol);
    // Project both sides onto the smaller span; cross inner products are
    // unchanged because one side lies inside it.
    const auto& basis = basis_u.size() <= basis_v.size() ? basis_u : basis_v;
    SpanProjection out;
    out.rank = basis.size();
    if (out.rank == 0) throw std::invalid_argument("project_span: all-zero vector system");
    out.system.dim = out.rank;
    auto coords = [&](const std::vector<double>& w) {
        std::vector<double> c(out.system.dim, 0.0);
        for (std::size_t k = 0; k < basis.size(); ++k) c[k] = dot(w, basis[k]);
        return c;
    };
    for (const auto& w : g.u) out.system.u.push_back(coords(w));
    for (const auto& w : g.v) out.system.v.push_back(coords(w));
    return out;
}

/// |Φ+⟩^{⊗nu} with all A-side qubits first: amplitude 2^{-nu/2} on basis
/// states whose A half equals the B half.
inline std::vector<cplx> build_state(std::size_t nu) {
    if (nu == 0) return {cplx(1.0, 0.0)};
    const std::size_t dim = std::size_t(1) << (2 * nu);
    std::vector<cplx> psi(dim, cplx(0.0, 0.0));
    const double amp = std::pow(2.0, -double(nu) / 2.0);
    for (std::size_t a = 0; a < (std::size_t(1) << nu); ++a)
        psi[(a << nu) | a] = cplx(amp, 0.0);
    return psi;
}

namespace detail {

inline PauliString identity_string(std::size_t n) {
    return PauliString(n);
}

}  // namespace detail

/// A_i = sum_k u_ik (X_k ⊗ I), B_j = sum_k s_k v_jk (I ⊗ X_k) with the
/// maximally entangled state correcting transposition signs s_k (-1 on the
/// generators containing a Y factor).
inline QuantumRealization build_observables(const GramSystem& coords, std::size_t rank) {
    const std::size_t xi = std::max<std::size_t>(rank, 1);
    const std::size_t nu = xi / 2;
    if (nu > 10) throw std::invalid_argument("build_observables: rank too large (nu > 10)");
    QuantumRealization r;
    r.nu = nu;
    r.xi = xi;
    r.n_qubits = 2 * nu;
    r.state = build_state(nu);

    std::vector<PauliString> gen_a, gen_b;
    std::vector<int> sign(xi, 1);
    if (nu == 0) {
        gen_a.push_back(PauliString(0));
        gen_b.push_back(PauliString(0));
    } else {
        GeneratorSet gs = weyl_brauer(nu, GeneratorForm::x_form);
        const PauliString id = detail::identity_string(nu);
        for (std::size_t k = 0; k < xi; ++k) {
            gen_a.push_back(gs.generators[k].tensor(id));
            gen_b.push_back(id.tensor(gs.generators[k]));
            if (k >= nu && k < 2 * nu) sign[k] = -1;  // the Y-bearing generators
        }
    }
    auto make = [&](const std::vector<double>& w, bool b_side) {
        PauliSum s;
        for (std::size_t k = 0; k < xi; ++k) {
            const double c = b_side ? sign[k] * w[k] : w[k];
            if (c != 0.0) s.terms.push_back({c, b_side ? gen_b[k] : gen_a[k]});
        }
        if (s.terms.empty()) s.terms.push_back({0.0, nu == 0 ? PauliString(0) : gen_a[0]});
        return s;
    };
    for (const auto& w : coords.u) r.observables_a.push_back(make(w, false));
    for (const auto& w : coords.v) r.observables_b.push_back(make(w, true));
    return r;
}

/// Full pipeline: orthonormalize the vector system, pick nu = floor(xi/2)
/// EPR pairs, build anticommuting observables reproducing all the inner
/// products as correlations.
inline QuantumRealization realize(const GramSystem& g, double rank_tol = 1e-10) {
    SpanProjection sp = project_span(g, rank_tol);
    return build_observables(sp.system, sp.rank);
}

inline double state_inner_real(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s.real();
}

/// ⟨ψ| A_i B_j |ψ⟩ (real for Hermitian A, B).
inline double expectation(const QuantumRealization& r, std::size_t i, std::size_t j) {
    if (i >= r.observables_a.size() || j >= r.observables_b.size())
        throw std::invalid_argument("expectation: index out of range");
    return state_inner_real(r.observables_a[i].apply(r.state), r.observables_b[j].apply(r.state));
}

inline double expectation_a(const QuantumRealization& r, std::size_t i) {
    return state_inner_real(r.state, r.observables_a[i].apply(r.state));
}

inline double expectation_b(const QuantumRealization& r, std::size_t j) {
    return state_inner_real(r.state, r.observables_b[j].apply(r.state));
}

/// All expectations, packaged as a ±1-convention outcome.
inline CorrelationOutcome realized_outcome(const QuantumRealization& r) {
    CorrelationOutcome x;
    x.scenario = Scenario(r.observables_a.size(), r.observables_b.size());
    x.convention = Convention::pm_one;
    x.marginals_a.resize(x.scenario.m);
    x.marginals_b.resize(x.scenario.n);
    x.joint.assign(x.scenario.m, std::vector<double>(x.scenario.n, 0.0));
    std::vector<std::vector<cplx>> psa, psb;
    for (const auto& A : r.observables_a) psa.push_back(A.apply(r.state));
    for (const auto& B : r.observables_b) psb.push_back(B.apply(r.state));
    for (std::size_t i = 0; i < x.scenario.m; ++i)
        x.marginals_a[i] = state_inner_real(r.state, psa[i]);
    for (std::size_t j = 0; j < x.scenario.n; ++j)
        x.marginals_b[j] = state_inner_real(r.state, psb[j]);
    for (std::size_t i = 0; i < x.scenario.m; ++i)
        for (std::size_t j = 0; j < x.scenario.n; ++j)
            x.joint[i][j] = state_inner_real(psa[i], psb[j]);
    return x;
}

/// Max deviation between the realized correlations and a target outcome
/// (converted to ±1 if needed).
inline double verify_realization(const QuantumRealization& r, const CorrelationOutcome& target) {
    const CorrelationOutcome t =
        target.convention == Convention::pm_one ? target : convert_convention(target);
    const CorrelationOutcome got = realized_outcome(r);
    if (!(t.scenario == got.scenario))
        throw std::invalid_argument("verify_realization: scenario mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < t.scenario.m; ++i)
        for (std::size_t j = 0; j < t.scenario.n; ++j)
            dev = std::max(dev, std::abs(t.joint[i][j] - got.joint[i][j]));
    for (std::size_t i = 0; i < t.scenario.m; ++i)
        dev = std::max(dev, std::abs(t.marginals_a[i] - got.marginals_a[i]));
    for (std::size_t j = 0; j < t.scenario.n; ++j)
        dev = std::max(dev, std::abs(t.marginals_b[j] - got.marginals_b[j]));
    return dev;
}

/// Max deviation of ⟨A_i B_j⟩ from the inner products of a vector system.
inline double verify_against_gram(const QuantumRealization& r, const GramSystem& g) {
    g.validate();
    if (g.u.size() != r.observables_a.size() || g.v.size() != r.observables_b.size())
        throw std::invalid_argument("verify_against_gram: size mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < g.u.size(); ++i)
        for (std::size_t j = 0; j < g.v.size(); ++j)
            dev = std::max(dev, std::abs(expectation(r, i, j) - dot(g.u[i], g.v[j])));
    return dev;
}

/// Entanglement entropy (base 2) across the A|B cut: Schmidt spectrum of
/// the amplitude matrix with A-side bits as rows.
inline double entanglement_entropy(const std::vector<cplx>& psi, std::size_t n_qubits_a,
                                   std::size_t n_qubits_b) {
    const std::size_t ra = std::size_t(1) << n_qubits_a;
    const std::size_t rb = std::size_t(1) << n_qubits_b;
    if (psi.size() != ra * rb) throw std::invalid_argument("entanglement_entropy: size mismatch");
    const Eigen::Index era = Eigen::Index(ra), erb = Eigen::Index(rb);
    Eigen::MatrixXcd M(era, erb);
    for (std::size_t a = 0; a < ra; ++a)
        for (std::size_t b = 0; b < rb; ++b)
            M(Eigen::Index(a), Eigen::Index(b)) = psi[(a << n_qubits_b) | b];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    double h = 0.0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double p = svd.singularValues()[k] * svd.singularValues()[k];
        if (p > 1e-14) h -= p * std::log2(p);
    }
    return h;
}

/// Two-outcome qubit observable for a unit vector z in R^2:
/// C(z) = z1 Z + z2 X, so ⟨Φ+| C(u) ⊗ C(v) |Φ+⟩ = ⟨u|v⟩.
inline DenseMatrix two_dim_observable(double z1, double z2) {
    DenseMatrix M(2, 2);
    M(0, 0) = cplx(z1, 0.0);
    M(0, 1) = cplx(z2, 0.0);
    M(1, 0) = cplx(z2, 0.0);
    M(1, 1) = cplx(-z1, 0.0);
    return M;
}

// ---------------------------------------------------------------------------
// Dimension reduction (random projection).
// ---------------------------------------------------------------------------

/// Smallest target dimension K with ceil(4 ln N / (eps^2/2 - eps^3/3)).
inline std::size_t jl_dimension(double eps, std::size_t n_points) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("jl_dimension: eps must be in (0,1)");
    if (n_points < 2) throw std::invalid_argument("jl_dimension: need at least two points");
    const double denom = eps * eps / 2.0 - eps * eps * eps / 3.0;
    return std::size_t(std::ceil(4.0 * std::log(double(n_points)) / denom));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based standard normal: two hashed uniforms through Box-Muller.
/// Reproducible across platforms for a fixed (seed, counter).
inline double gaussian_at(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h1 = splitmix64(seed ^ splitmix64(2 * counter));
    const std::uint64_t h2 = splitmix64(seed ^ splitmix64(2 * counter + 1));
    const double u1 = (double(h1 >> 11) + 0.5) * 0x1.0p-53;  // in (0,1)
    const double u2 = double(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace detail

struct JlResult {
    GramSystem system;
    std::size_t target_dim = 0;
    std::uint64_t seed_used = 0;
    std::size_t attempts = 0;
    bool reduced = false;              // false when the input was already small
    double max_norm_distortion = 0.0;  // max |‖w'‖²/‖w‖² - 1|
    double max_distance_distortion = 0.0;
    double max_inner_product_error = 0.0;  // additive, reported not enforced
};

/// Gaussian random projection to jl_dimension(eps, m+n) coordinates.
/// Retries deterministically (seed, seed+1, ...) until every norm and
/// pairwise distance is preserved within the multiplicative eps band;
/// gives up after 100 attempts.
inline JlResult jl_reduce(const GramSystem& g, double eps, std::uint64_t seed) {
    g.validate();
    std::vector<std::vector<double>> pts;
    for (const auto& w : g.u) pts.push_back(w);
    for (const auto& w : g.v) pts.push_back(w);
    const std::size_t N = pts.size(), D = g.dim;
    JlResult out;
    out.target_dim = jl_dimension(eps, N);
    if (out.target_dim >= D) {
        out.system = g;
        out.seed_used = seed;
        out.reduced = false;
        return out;
    }
    const std::size_t K = out.target_dim;
    for (std::size_t attempt = 0; attempt < 100; ++attempt) {
        const std::uint64_t s = seed + attempt;
        const double scale = 1.0 / std::sqrt(double(K));
        std::vector<std::vector<double>> proj(N, std::vector<double>(K, 0.0));
        for (std::size_t r = 0; r < K; ++r)
            for (std::size_t c = 0; c < D; ++c) {
                const double gval = detail::gaussian_at(s, std::uint64_t(r * D + c)) * scale;
                if (gval == 0.0) continue;
                for (std::size_t i = 0; i < N; ++i) proj[i][r] += gval * pts[i][c];
            }
        double nd = 0.0, dd = 0.0, ip = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i) {
            const double before = dot(pts[i], pts[i]);
            const double after = dot(proj[i], proj[i]);
            if (before > 1e-14) {
                const double rel = std::abs(after / before - 1.0);
                nd = std::max(nd, rel);
                if (rel > eps) ok = false;
            }
        }
        for (std::size_t i = 0; i < N && ok; ++i)
            for (std::size_t j = i + 1; j < N && ok; ++j) {
                double before = 0.0, after = 0.0;
                for (std::size_t k = 0; k < D; ++k) {
                    const double d = pts[i][k] - pts[j][k];
                    before += d * d;
                }
                for (std::size_t k = 0; k < K; ++k) {
                    const double d = proj[i][k] - proj[j][k];
                    after += d * d;
                }
                if (before > 1e-14) {
                    const double rel = std::abs(after / before - 1.0);
                    dd = std::max(dd, rel);
                    if (rel > eps) ok = false;
                }
                ip = std::max(ip, std::abs(dot(proj[i], proj[j]) - dot(pts[i], pts[j])));
            }
        out.attempts = attempt + 1;
        if (ok) {
            out.system.dim = K;
            for (std::size_t i = 0; i < g.u.size(); ++i) out.system.u.push_back(proj[i]);
            for (std::size_t j = 0; j < g.v.size(); ++j)
                out.system.v.push_back(proj[g.u.size() + j]);
            out.seed_used = s;
            out.reduced = true;
            out.max_norm_distortion = nd;
            out.max_distance_distortion = dd;
            out.max_inner_product_error = ip;
            return out;
        }
    }
    throw std::runtime_error("jl_reduce: no projection met the distortion bound after 100 seeds");
}

}  // namespace qcorr
