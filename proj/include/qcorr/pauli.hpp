#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/dense.hpp"
#include "qcorr/gf2.hpp"

namespace qcorr {

/// Pauli string with exact phase in {+1, -1, +i, -i} and the (u|v)
/// binary-symplectic encoding: per qubit, I=σ00, X=σ01, Y=σ11, Z=σ10.
/// The binary encoding alone is not faithful (phase is dropped), so the
/// phase exponent is carried alongside it.
struct PauliString {
    std::size_t n = 0;              // qubit count
    int phase_exp = 0;              // phase = i^phase_exp, mod 4
    std::vector<unsigned char> u;   // Z-part bits, one per qubit
    std::vector<unsigned char> v;   // X-part bits

    PauliString() = default;
    explicit PauliString(std::size_t qubits)
        : n(qubits), phase_exp(0), u(qubits, 0), v(qubits, 0) {}

    static PauliString identity(std::size_t qubits) { return PauliString(qubits); }

    /// Builds from a letter string like "XIZ" (qubit 0 first).
    static PauliString from_letters(const std::string& s, int phase_exp = 0) {
        PauliString p(s.size());
        p.phase_exp = ((phase_exp % 4) + 4) % 4;
        for (std::size_t q = 0; q < s.size(); ++q) {
            switch (s[q]) {
                case 'I': break;
                case 'X': p.v[q] = 1; break;
                case 'Y': p.u[q] = 1; p.v[q] = 1; break;
                case 'Z': p.u[q] = 1; break;
                default: throw std::invalid_argument("PauliString: unknown letter");
            }
        }
        return p;
    }

    /// Letter string "XIZY…" (qubit 0 first); the phase is not included.
    std::string letters() const {
        std::string s(n, 'I');
        for (std::size_t q = 0; q < n; ++q) {
            const int code = 2 * u[q] + v[q];
            s[q] = code == 0 ? 'I' : code == 1 ? 'X' : code == 2 ? 'Z' : 'Y';
        }
        return s;
    }

    cplx phase() const {
        static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[((phase_exp % 4) + 4) % 4];
    }

    bool same_letters(const PauliString& o) const { return n == o.n && u == o.u && v == o.v; }
    bool operator==(const PauliString& o) const {
        return same_letters(o) && ((phase_exp - o.phase_exp) % 4 + 4) % 4 == 0;
    }

    PauliString operator*(const PauliString& o) const {
        if (n != o.n) throw std::invalid_argument("PauliString: qubit count mismatch");
        PauliString r(n);
        int ph = phase_exp + o.phase_exp;
        for (std::size_t q = 0; q < n; ++q) {
            const int a = 2 * u[q] + v[q], b = 2 * o.u[q] + o.v[q];
            // i-exponent of the single-qubit product: cyclic X→Y→Z gives +i.
            static const int tab[4][4] = {
                {0, 0, 0, 0},
                {0, 0, 3, 1},   // X·X=I, X·Z=-iY, X·Y=iZ
                {0, 1, 0, 3},   // Z·X=iY, Z·Z=I, Z·Y=-iX
                {0, 3, 1, 0}};  // Y·X=-iZ, Y·Z=iX, Y·Y=I
            ph += tab[a][b];
            r.u[q] = u[q] ^ o.u[q];
            r.v[q] = v[q] ^ o.v[q];
        }
        r.phase_exp = ((ph % 4) + 4) % 4;
        return r;
    }

    /// Tensor product: this on the first block of qubits, o on the second.
    PauliString tensor(const PauliString& o) const {
        PauliString r(n + o.n);
        r.phase_exp = ((phase_exp + o.phase_exp) % 4 + 4) % 4;
        for (std::size_t q = 0; q < n; ++q) { r.u[q] = u[q]; r.v[q] = v[q]; }
        for (std::size_t q = 0; q < o.n; ++q) { r.u[n + q] = o.u[q]; r.v[n + q] = o.v[q]; }
        return r;
    }

    PauliString negated() const {
        PauliString r = *this;
        r.phase_exp = (r.phase_exp + 2) % 4;
        return r;
    }

    bool commutes_with(const PauliString& o) const {
        int s = 0;
        for (std::size_t q = 0; q < n; ++q) s ^= (u[q] & o.v[q]) ^ (v[q] & o.u[q]);
        return s == 0;
    }

    /// Applies to a state vector of length 2^n (qubit 0 = most significant bit).
    std::vector<cplx> apply(const std::vector<cplx>& psi) const {
        const std::size_t dim = std::size_t(1) << n;
        if (psi.size() != dim) throw std::invalid_argument("PauliString: state length mismatch");
        uint64_t zmask = 0, xmask = 0;
        int ycount = 0;
        for (std::size_t q = 0; q < n; ++q) {
            const uint64_t bit = uint64_t(1) << (n - 1 - q);
            if (u[q]) zmask |= bit;
            if (v[q]) xmask |= bit;
            if (u[q] && v[q]) ++ycount;
        }
        std::vector<cplx> out(dim);
        static const cplx itab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (std::size_t b = 0; b < dim; ++b) {
            const int texp = (phase_exp + ycount) % 4;
            cplx coef = itab[texp];
            if (__builtin_popcountll(zmask & b) & 1) coef = -coef;
            out[b ^ xmask] += coef * psi[b];
        }
        return out;
    }

    DenseMatrix to_matrix() const {
        static const auto mk = [](cplx a, cplx b, cplx c, cplx d) {
            DenseMatrix m(2, 2);
            m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
            return m;
        };
        static const DenseMatrix I = mk(1, 0, 0, 1);
        static const DenseMatrix X = mk(0, 1, 1, 0);
        static const DenseMatrix Y = mk(0, cplx(0, -1), cplx(0, 1), 0);
        static const DenseMatrix Z = mk(1, 0, 0, -1);
        DenseMatrix m(1, 1);
        m(0, 0) = phase();
        for (std::size_t q = 0; q < n; ++q) {
            const int code = 2 * u[q] + v[q];
            const DenseMatrix* f = code == 0 ? &I : code == 1 ? &X : code == 2 ? &Z : &Y;
            m = kron(m, *f);
        }
        return m;
    }
};

/// σ01→X mapping: phaseless binary encoding (u_1…u_N | v_1…v_N).
inline std::vector<unsigned char> pauli_encode(const PauliString& p) {
    std::vector<unsigned char> e(2 * p.n);
    for (std::size_t q = 0; q < p.n; ++q) { e[q] = p.u[q]; e[p.n + q] = p.v[q]; }
    return e;
}

/// Inverse of pauli_encode; phase fixed to +1.
inline PauliString pauli_decode(const std::vector<unsigned char>& bits) {
    if (bits.size() % 2) throw std::invalid_argument("pauli_decode: odd length");
    PauliString p(bits.size() / 2);
    for (std::size_t q = 0; q < p.n; ++q) { p.u[q] = bits[q]; p.v[q] = bits[p.n + q]; }
    return p;
}

/// Symplectic inner product of two encoded Pauli strings; 0 iff they commute.
inline int symplectic_product(const std::vector<unsigned char>& e, const std::vector<unsigned char>& f) {
    if (e.size() != f.size() || e.size() % 2)
        throw std::invalid_argument("symplectic_product: length mismatch");
    const std::size_t h = e.size() / 2;
    int s = 0;
    for (std::size_t i = 0; i < h; ++i) s ^= (e[i] & f[h + i]) ^ (e[h + i] & f[i]);
    return s;
}

inline DenseMatrix pauli_to_matrix(const PauliString& p) { return p.to_matrix(); }

}  // namespace qcorr
