#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/correlation.hpp"

namespace qcorr {

/// One coefficient of a linear expression over block-diagonal symmetric
/// matrix variables: coeff * X_block[i][j] (entries are symmetric, so
/// (i,j) and (j,i) refer to the same scalar).
struct SdpTerm {
    std::size_t block = 0, i = 0, j = 0;
    double coeff = 0.0;
};

struct LinearExpr {
    std::vector<SdpTerm> terms;
    void add(std::size_t block, std::size_t i, std::size_t j, double c) {
        terms.push_back({block, i, j, c});
    }
};

/// maximize objective(X) subject to eq_k(X) = rhs_k, ineq_k(X) >= rhs_k,
/// X_b symmetric PSD for every block b.
struct SdpProblem {
    std::vector<std::size_t> blocks;
    LinearExpr objective;
    std::vector<std::pair<LinearExpr, double>> eq;
    std::vector<std::pair<LinearExpr, double>> ineq;
};

struct SdpSolution {
    std::vector<Eigen::MatrixXd> X;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string status;
};

namespace detail {

/// svec layout for one block: entries (i,j), i <= j, row-major in i;
/// off-diagonal entries carry a factor sqrt(2) so dot products of svecs
/// equal trace inner products.
inline std::size_t svec_size(std::size_t d) { return d * (d + 1) / 2; }

inline std::size_t svec_index(std::size_t d, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * d - i * (i - 1) / 2 + (j - i);
}

}  // namespace detail

/// Alternating-projection (ADMM) solver for the block SDP above.
/// Deterministic: fixed initialization, fixed penalty-update schedule.
inline SdpSolution solve_sdp(const SdpProblem& p, double tol = 1e-8,
                             std::size_t max_iter = 200000) {
    const double rt2 = std::sqrt(2.0);
    std::vector<std::size_t> offset(p.blocks.size());
    std::size_t nvec = 0;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        offset[b] = nvec;
        nvec += detail::svec_size(p.blocks[b]);
    }
    const std::size_t nslack = p.ineq.size();
    const std::size_t nx = nvec + nslack;

    auto expr_to_row = [&](const LinearExpr& e, Eigen::VectorXd& row) {
        for (const auto& t : e.terms) {
            if (t.block >= p.blocks.size() || t.i >= p.blocks[t.block] || t.j >= p.blocks[t.block])
                throw std::invalid_argument("solve_sdp: term index out of range");
            const std::size_t k = offset[t.block] + detail::svec_index(p.blocks[t.block], t.i, t.j);
            row[k] += t.i == t.j ? t.coeff : t.coeff / rt2;
        }
    };

    const std::size_t neq = p.eq.size();
    const std::size_t ncon = neq + nslack;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ncon, nx);
    Eigen::VectorXd bvec = Eigen::VectorXd::Zero(ncon);
    for (std::size_t k = 0; k < neq; ++k) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nx);
        expr_to_row(p.eq[k].first, row);
        A.row(Eigen::Index(k)) = row;
        bvec[Eigen::Index(k)] = p.eq[k].second;
    }
    for (std::size_t k = 0; k < nslack; ++k) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nx);
        expr_to_row(p.ineq[k].first, row);
        row[Eigen::Index(nvec + k)] = -1.0;  // ineq(X) - slack = rhs
        A.row(Eigen::Index(neq + k)) = row;
        bvec[Eigen::Index(neq + k)] = p.ineq[k].second;
    }

    Eigen::VectorXd c = Eigen::VectorXd::Zero(nx);
    expr_to_row(p.objective, c);

    // Projection onto {x : Ax = b}: x - A^T (AA^T)^+ (Ax - b).
    Eigen::MatrixXd AAt = A * A.transpose();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AAt);
    auto project_affine = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
        return w - A.transpose() * cod.solve(A * w - bvec);
    };

    auto project_cone = [&](Eigen::VectorXd w) -> Eigen::VectorXd {
        for (std::size_t b = 0; b < p.blocks.size(); ++b) {
            const std::size_t d = p.blocks[b];
            Eigen::MatrixXd M(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j) {
                    const double v = w[Eigen::Index(offset[b] + detail::svec_index(d, i, j))];
                    M(Eigen::Index(i), Eigen::Index(j)) = i == j ? v : v / rt2;
                    M(Eigen::Index(j), Eigen::Index(i)) = M(Eigen::Index(i), Eigen::Index(j));
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            M = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j)
                    w[Eigen::Index(offset[b] + detail::svec_index(d, i, j))] =
                        i == j ? M(Eigen::Index(i), Eigen::Index(j))
                               : M(Eigen::Index(i), Eigen::Index(j)) * rt2;
        }
        for (std::size_t k = 0; k < nslack; ++k)
            w[Eigen::Index(nvec + k)] = std::max(0.0, w[Eigen::Index(nvec + k)]);
        return w;
    };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nx);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(nx);
    double rho = 1.0;

    SdpSolution sol;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        x = project_affine(z - u + c / rho);
        Eigen::VectorXd z_prev = z;
        z = project_cone(x + u);
        u += x - z;

        const double pr = (x - z).lpNorm<Eigen::Infinity>();
        const double dr = rho * (z - z_prev).lpNorm<Eigen::Infinity>();
        sol.iterations = iter;
        if (pr < tol && dr < tol) {
            sol.converged = true;
            sol.status = "converged";
            break;
        }
        if (iter % 100 == 0) {
            if (pr > 10.0 * dr && rho < 1e6) {
                rho *= 2.0;
                u /= 2.0;
            } else if (dr > 10.0 * pr && rho > 1e-6) {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    if (!sol.converged) sol.status = "max_iterations";

    sol.value = c.dot(z);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const std::size_t d = p.blocks[b];
        Eigen::MatrixXd M(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                const double v = z[Eigen::Index(offset[b] + detail::svec_index(d, i, j))];
                M(Eigen::Index(i), Eigen::Index(j)) = i == j ? v : v / rt2;
                M(Eigen::Index(j), Eigen::Index(i)) = M(Eigen::Index(i), Eigen::Index(j));
            }
        sol.X.push_back(M);
    }
    return sol;
}

struct BoundResult {
    double value = 0.0;
    Eigen::MatrixXd gram;  // optimal correlation Gram matrix
    bool converged = false;
    std::size_t iterations = 0;
};

/// Quantum maximum of a pure-correlation ±1 functional: maximize
/// sum c_ij <u_i|v_j> over unit vectors (the elliptope of K_{m,n}).
/// Rejects functionals with marginal terms.
inline BoundResult tsirelson_bound(const BellFunctional& fin, double tol = 1e-8,
                                   std::size_t max_iter = 200000) {
    const BellFunctional f =
        fin.convention == Convention::pm_one ? fin : convert_functional(fin);
    if (f.has_marginal_terms(1e-15))
        throw std::invalid_argument("tsirelson_bound: functional has marginal terms");
    const std::size_t m = f.scenario.m, n = f.scenario.n, N = m + n;
    SdpProblem p;
    p.blocks = {N};
    for (std::size_t i = 0; i < N; ++i) {
        LinearExpr e;
        e.add(0, i, i, 1.0);
        p.eq.push_back({e, 1.0});
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (f.coeff_joint[i][j] != 0.0) p.objective.add(0, i, m + j, f.coeff_joint[i][j]);
    SdpSolution s = solve_sdp(p, tol, max_iter);
    return {s.value + f.constant, s.X[0], s.converged, s.iterations};
}

namespace detail {

/// Suspension-graph SDP: Gram of (root, a_1..a_m, b_1..b_n) with unit
/// diagonal; root-to-vertex entries carry the marginals, cross entries the
/// joints. Optionally intersects with the rooted-semimetric inequalities
///   x_XA + x_XB + x_AB >= -1 and the three sign-flipped forms <= 1.
inline BoundResult suspension_bound(const BellFunctional& fin, bool with_rmet, double tol,
                                    std::size_t max_iter) {
    const BellFunctional f =
        fin.convention == Convention::pm_one ? fin : convert_functional(fin);
    const std::size_t m = f.scenario.m, n = f.scenario.n, N = 1 + m + n;
    SdpProblem p;
    p.blocks = {N};
    for (std::size_t i = 0; i < N; ++i) {
        LinearExpr e;
        e.add(0, i, i, 1.0);
        p.eq.push_back({e, 1.0});
    }
    for (std::size_t i = 0; i < m; ++i)
        if (f.coeff_a[i] != 0.0) p.objective.add(0, 0, 1 + i, f.coeff_a[i]);
    for (std::size_t j = 0; j < n; ++j)
        if (f.coeff_b[j] != 0.0) p.objective.add(0, 0, 1 + m + j, f.coeff_b[j]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (f.coeff_joint[i][j] != 0.0)
                p.objective.add(0, 1 + i, 1 + m + j, f.coeff_joint[i][j]);
    if (with_rmet) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t ai = 1 + i, bj = 1 + m + j;
                const int signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
                for (const auto& s : signs) {
                    LinearExpr e;  // s0*x_XA + s1*x_XB + s2*x_AB >= -1
                    e.add(0, 0, ai, s[0]);
                    e.add(0, 0, bj, s[1]);
                    e.add(0, ai, bj, s[2]);
                    p.ineq.push_back({e, -1.0});
                }
            }
        }
    }
    SdpSolution s = solve_sdp(p, tol, max_iter);
    return {s.value + f.constant, s.X[0], s.converged, s.iterations};
}

}  // namespace detail

/// Upper bound on the quantum value for functionals with marginal terms:
/// elliptope of the suspension graph intersected with the rooted-semimetric
/// inequalities.
inline BoundResult upper_bound_nc(const BellFunctional& f, double tol = 1e-8,
                                  std::size_t max_iter = 200000) {
    return detail::suspension_bound(f, true, tol, max_iter);
}

/// Same relaxation without the rooted-semimetric cuts (generally looser).
inline BoundResult elliptope_suspension_bound(const BellFunctional& f, double tol = 1e-8,
                                              std::size_t max_iter = 200000) {
    return detail::suspension_bound(f, false, tol, max_iter);
}

struct EigenFactorization {
    GramSystem system;       // rows of the factor split into u (first m) and v
    std::size_t rank = 0;
    double min_eigenvalue = 0.0;
};

/// Factor a PSD matrix M = V V^T by eigendecomposition; rows of V become
/// the Gram vectors. split = number of rows assigned to the u side.
/// Eigenvalues below -tol are an error; small negatives are clipped.
inline EigenFactorization gram_factorize(const Eigen::MatrixXd& M, std::size_t split,
                                         double tol = 1e-8) {
    if (M.rows() != M.cols()) throw std::invalid_argument("gram_factorize: square matrix required");
    const std::size_t N = std::size_t(M.rows());
    if (split > N) throw std::invalid_argument("gram_factorize: bad split");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    EigenFactorization out;
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    if (out.min_eigenvalue < -tol)
        throw std::invalid_argument("gram_factorize: matrix is not positive semidefinite");
    std::vector<std::size_t> keep;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()[k] > tol) keep.push_back(std::size_t(k));
    out.rank = keep.size();
    const std::size_t r = std::max<std::size_t>(out.rank, 1);
    out.system.dim = r;
    auto row_of = [&](std::size_t i) {
        std::vector<double> w(r, 0.0);
        for (std::size_t t = 0; t < keep.size(); ++t)
            w[t] = es.eigenvectors()(Eigen::Index(i), Eigen::Index(keep[t])) *
                   std::sqrt(es.eigenvalues()[Eigen::Index(keep[t])]);
        return w;
    };
    for (std::size_t i = 0; i < split; ++i) out.system.u.push_back(row_of(i));
    for (std::size_t i = split; i < N; ++i) out.system.v.push_back(row_of(i));
    return out;
}

struct ElliptopeMembership {
    bool inside = false;
    double margin = 0.0;          // max λ with completion - λI PSD
    Eigen::MatrixXd completion;   // valid PSD completion when inside
    bool converged = false;
};

/// PSD-completion feasibility for a ±1 outcome on the suspension graph:
/// root row = marginals, cross block = joints, same-side off-diagonals free.
/// Solved as max λ s.t. (completion) - λI ⪰ 0 via λ = λp - λm with two
/// auxiliary 1x1 PSD blocks.
inline ElliptopeMembership elliptope_membership(const CorrelationOutcome& input,
                                                double tol = 1e-8,
                                                std::size_t max_iter = 200000) {
    const CorrelationOutcome x =
        input.convention == Convention::pm_one ? input : convert_convention(input);
    x.validate();
    const std::size_t m = x.scenario.m, n = x.scenario.n, N = 1 + m + n;
    SdpProblem p;
    p.blocks = {N, 1, 1};  // Y = completion - λI, then λp, λm
    // Diagonal: Y_ii + λp - λm = 1.
    for (std::size_t i = 0; i < N; ++i) {
        LinearExpr e;
        e.add(0, i, i, 1.0);
        e.add(1, 0, 0, 1.0);
        e.add(2, 0, 0, -1.0);
        p.eq.push_back({e, 1.0});
    }
    auto fix = [&](std::size_t i, std::size_t j, double val) {
        LinearExpr e;
        e.add(0, i, j, 1.0);
        p.eq.push_back({e, val});
    };
    for (std::size_t i = 0; i < m; ++i) fix(0, 1 + i, x.marginals_a[i]);
    for (std::size_t j = 0; j < n; ++j) fix(0, 1 + m + j, x.marginals_b[j]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) fix(1 + i, 1 + m + j, x.joint[i][j]);
    p.objective.add(1, 0, 0, 1.0);
    p.objective.add(2, 0, 0, -1.0);
    SdpSolution s = solve_sdp(p, tol, max_iter);
    ElliptopeMembership out;
    out.margin = s.value;
    out.converged = s.converged;
    out.inside = s.value >= -10.0 * tol;
    if (out.inside) {
        out.completion = s.X[0] + s.value * Eigen::MatrixXd::Identity(Eigen::Index(N), Eigen::Index(N));
        // Re-impose the fixed entries exactly (ADMM leaves O(tol) residue).
        for (std::size_t i = 0; i < N; ++i) out.completion(Eigen::Index(i), Eigen::Index(i)) = 1.0;
        auto set2 = [&](std::size_t i, std::size_t j, double v) {
            out.completion(Eigen::Index(i), Eigen::Index(j)) = v;
            out.completion(Eigen::Index(j), Eigen::Index(i)) = v;
        };
        for (std::size_t i = 0; i < m; ++i) set2(0, 1 + i, x.marginals_a[i]);
        for (std::size_t j = 0; j < n; ++j) set2(0, 1 + m + j, x.marginals_b[j]);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) set2(1 + i, 1 + m + j, x.joint[i][j]);
    }
    return out;
}

/// PSD-completion feasibility for the joint block only (elliptope of
/// K_{m,n}): is the ±1 correlation function realizable by unit vectors?
/// Marginals are ignored.
inline ElliptopeMembership correlation_elliptope_membership(const CorrelationOutcome& input,
                                                            double tol = 1e-8,
                                                            std::size_t max_iter = 200000) {
    const CorrelationOutcome x =
        input.convention == Convention::pm_one ? input : convert_convention(input);
    x.validate();
    const std::size_t m = x.scenario.m, n = x.scenario.n, N = m + n;
    SdpProblem p;
    p.blocks = {N, 1, 1};
    for (std::size_t i = 0; i < N; ++i) {
        LinearExpr e;
        e.add(0, i, i, 1.0);
        e.add(1, 0, 0, 1.0);
        e.add(2, 0, 0, -1.0);
        p.eq.push_back({e, 1.0});
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            LinearExpr e;
            e.add(0, i, m + j, 1.0);
            p.eq.push_back({e, x.joint[i][j]});
        }
    p.objective.add(1, 0, 0, 1.0);
    p.objective.add(2, 0, 0, -1.0);
    SdpSolution s = solve_sdp(p, tol, max_iter);
    ElliptopeMembership out;
    out.margin = s.value;
    out.converged = s.converged;
    out.inside = s.value >= -10.0 * tol;
    if (out.inside)
        out.completion =
            s.X[0] + s.value * Eigen::MatrixXd::Identity(Eigen::Index(N), Eigen::Index(N));
    return out;
}

}  // namespace qcorr
