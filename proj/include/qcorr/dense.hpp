#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Used for all operator-level work:
/// observables, stabilizer verification, PSD projection inside the SDP
/// solver and Gram factorization.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    DenseMatrix adjoint() const {
        DenseMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    DenseMatrix operator*(const DenseMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("DenseMatrix: dimension mismatch in product");
        DenseMatrix m(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) += aik * o(k, j);
            }
        return m;
    }

    DenseMatrix operator+(const DenseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("DenseMatrix: shape mismatch");
        DenseMatrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
        return m;
    }

    DenseMatrix operator-(const DenseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("DenseMatrix: shape mismatch");
        DenseMatrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
        return m;
    }

    DenseMatrix operator*(cplx s) const {
        DenseMatrix m = *this;
        for (auto& x : m.a_) x *= s;
        return m;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("DenseMatrix: vector length mismatch");
        std::vector<cplx> w(rows_, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) w[i] += (*this)(i, j) * v[j];
        return w;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    Eigen::MatrixXcd to_eigen() const {
        Eigen::MatrixXcd m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    static DenseMatrix from_eigen(const Eigen::MatrixXcd& e) {
        DenseMatrix m(e.rows(), e.cols());
        for (Eigen::Index i = 0; i < e.rows(); ++i)
            for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

/// Kronecker product; dims multiply.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return m;
}

struct EigResult {
    std::vector<double> eigenvalues;   // sorted descending
    DenseMatrix eigenvectors;          // columns matching eigenvalues
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
inline EigResult hermitian_eig(const DenseMatrix& m) {
    if (!m.is_hermitian(1e-10)) throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.to_eigen());
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: decomposition failed");
    const std::size_t n = m.rows();
    EigResult r;
    r.eigenvalues.resize(n);
    r.eigenvectors = DenseMatrix(n, n);
    // Eigen sorts ascending; flip to descending.
    for (std::size_t k = 0; k < n; ++k) {
        r.eigenvalues[k] = es.eigenvalues()(n - 1 - k);
        for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, k) = es.eigenvectors()(i, n - 1 - k);
    }
    return r;
}

/// Nearest PSD matrix in Frobenius norm: eigenvalue clipping at zero.
inline DenseMatrix psd_project(const DenseMatrix& m) {
    EigResult e = hermitian_eig(m);
    const std::size_t n = m.rows();
    DenseMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(0.0, e.eigenvalues[k]);
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += lam * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
    }
    return out;
}

inline double operator_norm(const DenseMatrix& m) {
    EigResult e = hermitian_eig(m);
    double r = 0.0;
    for (double lam : e.eigenvalues) r = std::max(r, std::abs(lam));
    return r;
}

}  // namespace qcorr
