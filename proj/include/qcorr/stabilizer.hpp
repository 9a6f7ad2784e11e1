#pragma once

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/clifford.hpp"
#include "qcorr/gf2.hpp"
#include "qcorr/pauli.hpp"

namespace qcorr {

/// Columns encode Pauli strings in (Z_A | Z_B | X_A | X_B) block order;
/// phases are tracked separately (the binary encoding drops them).
struct GeneratorMatrix {
    Gf2Matrix bits;               // 2N × k
    std::vector<int> phase_exps;  // per column, power of i
};

/// Symmetric GF(2) adjacency matrix with zero diagonal.
struct GraphAdjacency {
    Gf2Matrix theta;

    explicit GraphAdjacency(Gf2Matrix t) : theta(std::move(t)) {
        if (theta.rows() != theta.cols()) throw std::invalid_argument("GraphAdjacency: not square");
        for (std::size_t i = 0; i < theta.rows(); ++i) {
            if (theta.get(i, i)) throw std::invalid_argument("GraphAdjacency: nonzero diagonal");
            for (std::size_t j = 0; j < theta.cols(); ++j)
                if (theta.get(i, j) != theta.get(j, i))
                    throw std::invalid_argument("GraphAdjacency: not symmetric");
        }
    }
};

/// Generator matrix E of the stabilizer group {X_k ⊗ X_k} for the z_form
/// Weyl-Brauer generators: 4ν × 2ν, column k = encode(X_k ⊗ X_k).
inline GeneratorMatrix generator_matrix_E(std::size_t nu) {
    if (nu == 0) throw std::invalid_argument("generator_matrix_E: nu must be >= 1");
    const GeneratorSet g = weyl_brauer(nu, GeneratorForm::z_form);
    GeneratorMatrix out;
    out.bits = Gf2Matrix(4 * nu, 2 * nu);
    for (std::size_t k = 0; k < 2 * nu; ++k) {
        const PauliString t = g.generators[k].tensor(g.generators[k]);
        const auto e = pauli_encode(t);
        for (std::size_t i = 0; i < 4 * nu; ++i) out.bits.set(i, k, e[i]);
        out.phase_exps.push_back(t.phase_exp);
    }
    return out;
}

struct TransformTarget {
    Gf2Matrix f;   // graph-state form [θ; I], θ = [[0,I],[I,0]]
    Gf2Matrix l;   // symplectic local-Clifford action (Hadamard on the B side)
    Gf2Matrix r2;  // invertible right factor with l·E·r2 = f
};

namespace detail {

inline Gf2Matrix graph_form_F(std::size_t nu) {
    Gf2Matrix f(4 * nu, 2 * nu);
    for (std::size_t k = 0; k < nu; ++k) {
        // θ = [[0,I],[I,0]] stacked over I.
        f.set(nu + k, k, 1);          // Z on B_k for column A_k
        f.set(k, nu + k, 1);          // Z on A_k for column B_k
        f.set(2 * nu + k, k, 1);      // X on A_k
        f.set(3 * nu + k, nu + k, 1); // X on B_k
    }
    return f;
}

inline Gf2Matrix hadamard_B_side_L(std::size_t nu) {
    // Swaps the Z_B and X_B blocks: Hadamards on all B qubits.
    Gf2Matrix l(4 * nu, 4 * nu);
    for (std::size_t k = 0; k < nu; ++k) {
        l.set(k, k, 1);                      // Z_A fixed
        l.set(nu + k, 3 * nu + k, 1);        // Z_B ← X_B
        l.set(2 * nu + k, 2 * nu + k, 1);    // X_A fixed
        l.set(3 * nu + k, nu + k, 1);        // X_B ← Z_B
    }
    return l;
}

}  // namespace detail

/// Graph-state target F with θ = [[0,I],[I,0]], the symplectic L, and an
/// invertible right factor solving L·E·R = F. The right factor is obtained
/// by GF(2) elimination rather than from a closed-form block layout, which
/// keeps it invertible for every ν.
inline TransformTarget target_F_L_R2(std::size_t nu) {
    const GeneratorMatrix e = generator_matrix_E(nu);
    TransformTarget t{detail::graph_form_F(nu), detail::hadamard_B_side_L(nu), Gf2Matrix()};
    const Gf2Matrix le = t.l * e.bits;
    auto r = le.solve(t.f);
    if (!r) throw std::runtime_error("target_F_L_R2: no right factor exists");
    if (!r->inverse()) throw std::runtime_error("target_F_L_R2: right factor not invertible");
    t.r2 = *r;
    return t;
}

struct TransformReport {
    bool ok = false;
    Gf2Matrix l, r;
    std::string message;
};

/// Certifies L·E·R = F over GF(2) for the ν-singlet pipeline, with L
/// symplectic and R invertible.
inline TransformReport verify_transform(std::size_t nu) {
    TransformReport rep;
    const GeneratorMatrix e = generator_matrix_E(nu);
    TransformTarget t;
    try {
        t = target_F_L_R2(nu);
    } catch (const std::exception& ex) {
        rep.message = ex.what();
        return rep;
    }
    rep.l = t.l;
    rep.r = t.r2;
    if (!(t.l * e.bits * t.r2 == t.f)) { rep.message = "product mismatch"; return rep; }
    if (!t.l.is_symplectic()) { rep.message = "L not symplectic"; return rep; }
    if (!t.r2.inverse()) { rep.message = "R not invertible"; return rep; }
    rep.ok = true;
    return rep;
}

/// Certifies a generic pair: symplectic l and invertible r with l·e·r = f.
inline TransformReport verify_transform(const Gf2Matrix& e, const Gf2Matrix& f) {
    TransformReport rep;
    std::optional<Gf2BasisChange> bc;
    try {
        bc = gf2_solve_basis_change(e, f);
    } catch (const std::exception& ex) {
        rep.message = ex.what();
        return rep;
    }
    if (!bc) { rep.message = "not local-Clifford-basis-change equivalent"; return rep; }
    rep.ok = true;
    rep.l = bc->l;
    rep.r = bc->r;
    return rep;
}

inline double state_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline cplx state_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Stabilizer state of the graph generators K_j = X^{(j)} ∏_k Z^{(k)}^{θ_kj},
/// computed by applying the projector ∏ (I+K_j)/2 to a seed vector.
inline std::vector<cplx> graph_state(const GraphAdjacency& adj) {
    const std::size_t n = adj.theta.rows();
    if (n > 12) throw std::invalid_argument("graph_state: more than 12 qubits");
    const std::size_t dim = std::size_t(1) << n;

    std::vector<PauliString> gens;
    for (std::size_t j = 0; j < n; ++j) {
        PauliString k(n);
        k.v[j] = 1;
        for (std::size_t q = 0; q < n; ++q) k.u[q] = (unsigned char)adj.theta.get(q, j);
        gens.push_back(k);
    }

    uint64_t lcg = 0x9e3779b97f4a7c15ull;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<cplx> psi(dim, cplx(0.0, 0.0));
        if (attempt == 0) {
            psi[0] = 1.0;
        } else {
            for (auto& x : psi) {
                lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
                x = cplx(double(int64_t(lcg >> 33)) / double(1ull << 31), 0.0);
            }
        }
        for (const auto& k : gens) {
            const auto kp = k.apply(psi);
            for (std::size_t i = 0; i < dim; ++i) psi[i] = 0.5 * (psi[i] + kp[i]);
        }
        const double nrm = state_norm(psi);
        if (nrm > 1e-8) {
            for (auto& x : psi) x /= nrm;
            return psi;
        }
    }
    throw std::runtime_error("graph_state: projector annihilated every seed");
}

/// Applies a single-qubit gate to qubit q (qubit 0 = most significant bit).
inline void apply_single_qubit(std::vector<cplx>& psi, std::size_t n_qubits, std::size_t q,
                               const DenseMatrix& gate) {
    const std::size_t dim = psi.size();
    const std::size_t bit = std::size_t(1) << (n_qubits - 1 - q);
    for (std::size_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        const cplx a0 = psi[b], a1 = psi[b | bit];
        psi[b] = gate(0, 0) * a0 + gate(0, 1) * a1;
        psi[b | bit] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
}

/// The local Clifford ℒ = I^{⊗ν} ⊗ H^{⊗ν}: Hadamard on every B-side qubit.
inline std::vector<cplx> apply_local_clifford_L(std::vector<cplx> psi, std::size_t nu) {
    const DenseMatrix h = hadamard_matrix();
    for (std::size_t q = nu; q < 2 * nu; ++q) apply_single_qubit(psi, 2 * nu, q, h);
    return psi;
}

struct EigenSignReport {
    std::vector<int> signs;      // a_k bits
    double max_residual = 0.0;
};

/// Signs a_k with X_k ⊗ X_k |Ψ⟩ = (-1)^{a_k} |Ψ⟩ for every generator;
/// throws if the state fails to be an eigenvector within tol.
inline EigenSignReport eigen_sign_check(const std::vector<cplx>& psi, const GeneratorSet& g,
                                        double tol = 1e-8) {
    EigenSignReport rep;
    for (const auto& x : g.generators) {
        const PauliString op = x.tensor(x);
        const auto t = op.apply(psi);
        const double overlap = state_dot(psi, t).real();
        const int sign = overlap >= 0.0 ? 1 : -1;
        std::vector<cplx> resid(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) resid[i] = t[i] - double(sign) * psi[i];
        const double r = state_norm(resid);
        if (r > tol) {
            std::ostringstream os;
            os << "eigen_sign_check: not an eigenvector, residual " << r;
            throw std::runtime_error(os.str());
        }
        rep.max_residual = std::max(rep.max_residual, r);
        rep.signs.push_back(sign > 0 ? 0 : 1);
    }
    return rep;
}

/// Text dump: one row of 0/1 characters per matrix row (columns = generators).
inline std::string gf2_dump(const Gf2Matrix& m) {
    std::string s;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.get(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

}  // namespace qcorr
