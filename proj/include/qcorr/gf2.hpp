#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qcorr {

/// Matrix over GF(2) with packed bit rows.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {}

    static Gf2Matrix identity(std::size_t n) {
        Gf2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    int get(std::size_t i, std::size_t j) const {
        return int((bits_[i * wpr_ + j / 64] >> (j % 64)) & 1u);
    }
    void set(std::size_t i, std::size_t j, int b) {
        uint64_t& w = bits_[i * wpr_ + j / 64];
        const uint64_t mask = uint64_t(1) << (j % 64);
        if (b) w |= mask; else w &= ~mask;
    }

    void xor_row(std::size_t dst, std::size_t src) {
        for (std::size_t w = 0; w < wpr_; ++w) bits_[dst * wpr_ + w] ^= bits_[src * wpr_ + w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(bits_[a * wpr_ + w], bits_[b * wpr_ + w]);
    }

    Gf2Matrix operator*(const Gf2Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Gf2Matrix: dimension mismatch in product");
        Gf2Matrix m(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                if (get(i, k))
                    for (std::size_t w = 0; w < o.wpr_; ++w)
                        m.bits_[i * m.wpr_ + w] ^= o.bits_[k * o.wpr_ + w];
        return m;
    }

    Gf2Matrix operator+(const Gf2Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Gf2Matrix: shape mismatch");
        Gf2Matrix m = *this;
        for (std::size_t i = 0; i < bits_.size(); ++i) m.bits_[i] ^= o.bits_[i];
        return m;
    }

    bool operator==(const Gf2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

    Gf2Matrix transpose() const {
        Gf2Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j)) m.set(j, i, 1);
        return m;
    }

    bool is_zero() const {
        for (uint64_t w : bits_) if (w) return false;
        return true;
    }

    std::size_t rank() const {
        Gf2Matrix m = *this;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && !m.get(p, c)) ++p;
            if (p == rows_) continue;
            m.swap_rows(p, r);
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != r && m.get(i, c)) m.xor_row(i, r);
            ++r;
        }
        return r;
    }

    /// Inverse of a square matrix; nullopt if singular.
    std::optional<Gf2Matrix> inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Gf2Matrix: inverse of non-square matrix");
        Gf2Matrix m = *this;
        Gf2Matrix inv = identity(rows_);
        for (std::size_t c = 0; c < cols_; ++c) {
            std::size_t p = c;
            while (p < rows_ && !m.get(p, c)) ++p;
            if (p == rows_) return std::nullopt;
            m.swap_rows(p, c);
            inv.swap_rows(p, c);
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != c && m.get(i, c)) { m.xor_row(i, c); inv.xor_row(i, c); }
        }
        return inv;
    }

    /// Solves A X = B for X; nullopt if inconsistent or underdetermined
    /// columns are hit (A is assumed to have full column rank).
    std::optional<Gf2Matrix> solve(const Gf2Matrix& b) const {
        if (rows_ != b.rows_) throw std::invalid_argument("Gf2Matrix: solve shape mismatch");
        // Eliminate on the augmented system [A | B].
        Gf2Matrix a = *this;
        Gf2Matrix rhs = b;
        std::vector<std::size_t> pivot_row(cols_, SIZE_MAX);
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && !a.get(p, c)) ++p;
            if (p == rows_) continue;
            a.swap_rows(p, r);
            rhs.swap_rows(p, r);
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != r && a.get(i, c)) { a.xor_row(i, r); rhs.xor_row(i, r); }
            pivot_row[c] = r;
            ++r;
        }
        for (std::size_t c = 0; c < cols_; ++c)
            if (pivot_row[c] == SIZE_MAX) return std::nullopt;  // rank deficient
        // Consistency: rows of the eliminated A that are zero must have zero rhs.
        for (std::size_t i = r; i < rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (rhs.get(i, j)) return std::nullopt;
        Gf2Matrix x(cols_, b.cols_);
        for (std::size_t c = 0; c < cols_; ++c)
            for (std::size_t j = 0; j < b.cols_; ++j)
                x.set(c, j, rhs.get(pivot_row[c], j));
        return x;
    }

    /// Standard symplectic form P = [[0,I],[I,0]] on an even dimension.
    static Gf2Matrix symplectic_form(std::size_t dim) {
        if (dim % 2) throw std::invalid_argument("symplectic_form: odd dimension");
        Gf2Matrix p(dim, dim);
        const std::size_t h = dim / 2;
        for (std::size_t i = 0; i < h; ++i) { p.set(i, h + i, 1); p.set(h + i, i, 1); }
        return p;
    }

    bool is_symplectic() const {
        if (rows_ != cols_ || rows_ % 2) return false;
        const Gf2Matrix p = symplectic_form(rows_);
        return transpose() * p * *this == p;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> bits_;
};

namespace detail {

using Bits = std::vector<unsigned char>;

inline Bits column(const Gf2Matrix& m, std::size_t j) {
    Bits v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = (unsigned char)m.get(i, j);
    return v;
}

/// Symplectic inner product vᵀ P w with P = [[0,I],[I,0]].
inline int sprod(const Bits& v, const Bits& w) {
    const std::size_t h = v.size() / 2;
    int s = 0;
    for (std::size_t i = 0; i < h; ++i) s ^= (v[i] & w[h + i]) ^ (v[h + i] & w[i]);
    return s;
}

inline Bits bxor(const Bits& a, const Bits& b) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

/// Symplectic transvection x ↦ x + ⟨x,h⟩ h applied in place.
inline void transvect(Bits& x, const Bits& h) {
    if (sprod(x, h)) x = bxor(x, h);
}

/// Reduces an alternating GF(2) form G to hyperbolic standard form:
/// returns invertible Q with Qᵀ G Q = diag([[0,1],[1,0]], ..., 0, ..., 0).
inline Gf2Matrix alternating_standard_basis(const Gf2Matrix& g) {
    const std::size_t n = g.rows();
    // Basis vectors as columns of q; greedy hyperbolic pairing.
    std::vector<Bits> basis(n, Bits(n, 0));
    for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1;
    auto form = [&](const Bits& a, const Bits& b) {
        int s = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (a[i])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[j] && g.get(i, j)) s ^= 1;
        return s;
    };
    std::vector<Bits> ordered;
    std::vector<Bits> pool = basis;
    while (true) {
        // Find a non-orthogonal pair in the remaining pool.
        std::size_t ia = SIZE_MAX, ib = SIZE_MAX;
        for (std::size_t a = 0; a < pool.size() && ia == SIZE_MAX; ++a)
            for (std::size_t b = a + 1; b < pool.size(); ++b)
                if (form(pool[a], pool[b])) { ia = a; ib = b; break; }
        if (ia == SIZE_MAX) break;
        Bits ea = pool[ia], eb = pool[ib];
        ordered.push_back(ea);
        ordered.push_back(eb);
        std::vector<Bits> next;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            if (k == ia || k == ib) continue;
            Bits v = pool[k];
            if (form(v, eb)) v = bxor(v, ea);
            if (form(v, ea)) v = bxor(v, eb);
            next.push_back(v);
        }
        pool = next;
    }
    for (const auto& v : pool) ordered.push_back(v);  // radical part
    Gf2Matrix q(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q.set(i, j, ordered[j][i]);
    return q;
}

}  // namespace detail

struct Gf2BasisChange {
    Gf2Matrix l;  // symplectic
    Gf2Matrix r;  // invertible
};

/// Finds symplectic l and invertible r with l·e·r = f over GF(2).
/// e and f are 2N×k with linearly independent columns (Pauli-string
/// encodings in (Z|X) halves). Throws if the preconditions fail; returns
/// nullopt when no such pair exists.
inline std::optional<Gf2BasisChange> gf2_solve_basis_change(const Gf2Matrix& e, const Gf2Matrix& f) {
    using namespace detail;
    if (e.rows() != f.rows() || e.cols() != f.cols())
        throw std::invalid_argument("gf2_solve_basis_change: shape mismatch");
    if (e.rows() % 2) throw std::invalid_argument("gf2_solve_basis_change: odd ambient dimension");
    const std::size_t dim = e.rows(), m = e.cols();
    if (e.rank() != m || f.rank() != m)
        throw std::invalid_argument("gf2_solve_basis_change: columns must be linearly independent");

    const Gf2Matrix p = Gf2Matrix::symplectic_form(dim);
    const Gf2Matrix ge = e.transpose() * p * e;
    const Gf2Matrix gf = f.transpose() * p * f;

    // Align the symplectic Gram matrices by a right basis change on f.
    Gf2Matrix s = Gf2Matrix::identity(m);
    Gf2Matrix ftarget = f;
    if (!(ge == gf)) {
        if (ge.rank() != gf.rank()) return std::nullopt;  // non-congruent forms
        const Gf2Matrix qe = alternating_standard_basis(ge);
        const Gf2Matrix qf = alternating_standard_basis(gf);
        auto qe_inv = qe.inverse();
        if (!qe_inv) return std::nullopt;
        s = qf * *qe_inv;
        if (!(s.transpose() * gf * s == ge)) return std::nullopt;
        ftarget = f * s;
    }

    // Map columns of e onto columns of ftarget with symplectic transvections,
    // preserving already-mapped columns (their pairings match by construction).
    std::vector<Bits> cur(m), tgt(m);
    for (std::size_t j = 0; j < m; ++j) { cur[j] = column(e, j); tgt[j] = column(ftarget, j); }
    Gf2Matrix l = Gf2Matrix::identity(dim);
    auto apply = [&](const Bits& h) {
        for (auto& c : cur) transvect(c, h);
        // l ← (I + h (Ph)ᵀ) l : row update via explicit multiply.
        Gf2Matrix t = Gf2Matrix::identity(dim);
        const std::size_t half = dim / 2;
        for (std::size_t i = 0; i < dim; ++i)
            if (h[i])
                for (std::size_t j = 0; j < dim; ++j) {
                    const int ph_j = h[j < half ? j + half : j - half];
                    if (ph_j) t.set(i, j, t.get(i, j) ^ 1);
                }
        l = t * l;
    };
    for (std::size_t k = 0; k < m; ++k) {
        const Bits a = cur[k];
        const Bits& b = tgt[k];
        if (a == b) continue;
        if (sprod(a, b)) {
            apply(bxor(a, b));
            continue;
        }
        // Need c with ⟨a,c⟩ = 1, ⟨b,c⟩ = 1, ⟨tgt_i,c⟩ = ⟨tgt_i,a⟩ for i < k.
        Gf2Matrix sys(k + 2, dim);
        Gf2Matrix rhs(k + 2, 1);
        auto load_row = [&](std::size_t row, const Bits& v, int want) {
            const std::size_t half = dim / 2;
            for (std::size_t j = 0; j < dim; ++j)
                sys.set(row, j, v[j < half ? j + half : j - half]);  // (Pv)ᵀ c
            rhs.set(row, 0, want);
        };
        load_row(0, a, 1);
        load_row(1, b, 1);
        for (std::size_t i = 0; i < k; ++i) load_row(2 + i, tgt[i], sprod(tgt[i], a));
        // Any particular solution of the (underdetermined) system.
        Gf2Matrix aug = sys;
        Gf2Matrix r2 = rhs;
        std::vector<std::size_t> piv(dim, SIZE_MAX);
        std::size_t rr = 0;
        for (std::size_t c = 0; c < dim && rr < aug.rows(); ++c) {
            std::size_t pi = rr;
            while (pi < aug.rows() && !aug.get(pi, c)) ++pi;
            if (pi == aug.rows()) continue;
            aug.swap_rows(pi, rr);
            r2.swap_rows(pi, rr);
            for (std::size_t i = 0; i < aug.rows(); ++i)
                if (i != rr && aug.get(i, c)) { aug.xor_row(i, rr); r2.xor_row(i, rr); }
            piv[c] = rr;
            ++rr;
        }
        bool bad = false;
        for (std::size_t i = rr; i < aug.rows(); ++i)
            if (r2.get(i, 0)) bad = true;
        if (bad) return std::nullopt;
        Bits c(dim, 0);
        for (std::size_t col = 0; col < dim; ++col)
            if (piv[col] != SIZE_MAX) c[col] = (unsigned char)r2.get(piv[col], 0);
        apply(bxor(a, c));
        apply(bxor(c, b));
    }

    // cur now equals tgt = f·s, i.e. l·e = f·s, so l·e·s⁻¹... r = s⁻¹.
    auto s_inv = s.inverse();
    if (!s_inv) return std::nullopt;
    Gf2BasisChange out{l, *s_inv};
    if (!(out.l * e * out.r == f)) return std::nullopt;
    if (!out.l.is_symplectic()) return std::nullopt;
    return out;
}

}  // namespace qcorr
