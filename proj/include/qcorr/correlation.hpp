#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

struct Scenario {
    std::size_t m = 0, n = 0;

    Scenario() = default;
    Scenario(std::size_t m_, std::size_t n_) : m(m_), n(n_) {
        if (m == 0 || n == 0) throw std::invalid_argument("Scenario: m and n must be >= 1");
    }
    bool operator==(const Scenario& o) const { return m == o.m && n == o.n; }
};

enum class Convention { zero_one, pm_one };

/// Correlation vector in the (marginals_a, marginals_b, joint) layout.
/// zero_one: marginals ⟨A_i⟩, joints ⟨A_i △ B_j⟩ (△ = disagreement indicator,
/// so the joint entry is the probability that the two outcomes differ).
/// pm_one:   marginals ⟨α_i⟩, joints ⟨α_i β_j⟩ with α = 1 - 2A.
struct CorrelationOutcome {
    Scenario scenario;
    Convention convention = Convention::zero_one;
    std::vector<double> marginals_a;          // m
    std::vector<double> marginals_b;          // n
    std::vector<std::vector<double>> joint;   // m × n

    void validate() const {
        if (marginals_a.size() != scenario.m || marginals_b.size() != scenario.n ||
            joint.size() != scenario.m)
            throw std::invalid_argument("CorrelationOutcome: shape mismatch");
        for (const auto& row : joint)
            if (row.size() != scenario.n) throw std::invalid_argument("CorrelationOutcome: shape mismatch");
        const double lo = convention == Convention::zero_one ? 0.0 : -1.0;
        auto in_range = [&](double x) { return x >= lo - 1e-12 && x <= 1.0 + 1e-12; };
        for (double x : marginals_a)
            if (!in_range(x)) throw std::invalid_argument("CorrelationOutcome: entry out of range");
        for (double x : marginals_b)
            if (!in_range(x)) throw std::invalid_argument("CorrelationOutcome: entry out of range");
        for (const auto& row : joint)
            for (double x : row)
                if (!in_range(x)) throw std::invalid_argument("CorrelationOutcome: entry out of range");
    }
};

/// Linear functional over an outcome plus an affine constant.
struct BellFunctional {
    Scenario scenario;
    Convention convention = Convention::zero_one;
    std::vector<double> coeff_a;               // m
    std::vector<double> coeff_b;               // n
    std::vector<std::vector<double>> coeff_joint;  // m × n
    double constant = 0.0;
    std::optional<double> classical_bound;

    static BellFunctional zero(Scenario s, Convention c) {
        BellFunctional f;
        f.scenario = s;
        f.convention = c;
        f.coeff_a.assign(s.m, 0.0);
        f.coeff_b.assign(s.n, 0.0);
        f.coeff_joint.assign(s.m, std::vector<double>(s.n, 0.0));
        return f;
    }

    double evaluate(const CorrelationOutcome& x) const {
        if (!(x.scenario == scenario) || x.convention != convention)
            throw std::invalid_argument("BellFunctional: scenario/convention mismatch");
        double s = constant;
        for (std::size_t i = 0; i < scenario.m; ++i) s += coeff_a[i] * x.marginals_a[i];
        for (std::size_t j = 0; j < scenario.n; ++j) s += coeff_b[j] * x.marginals_b[j];
        for (std::size_t i = 0; i < scenario.m; ++i)
            for (std::size_t j = 0; j < scenario.n; ++j) s += coeff_joint[i][j] * x.joint[i][j];
        return s;
    }

    bool has_marginal_terms(double tol = 0.0) const {
        for (double c : coeff_a) if (std::abs(c) > tol) return true;
        for (double c : coeff_b) if (std::abs(c) > tol) return true;
        return false;
    }
};

/// Vectors u^1..u^m, v^1..v^n realizing inner products / L1 / squared distances.
struct GramSystem {
    std::vector<std::vector<double>> u;  // m × dim
    std::vector<std::vector<double>> v;  // n × dim
    std::size_t dim = 0;

    void validate() const {
        for (const auto& w : u) if (w.size() != dim) throw std::invalid_argument("GramSystem: dim mismatch");
        for (const auto& w : v) if (w.size() != dim) throw std::invalid_argument("GramSystem: dim mismatch");
    }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Switches an outcome between the 0/1 and ±1 conventions. The 0/1 joint
/// entry is the disagreement probability P(a_i ≠ b_j), so every coordinate
/// maps through the same involution ⟨α⟩ = 1 - 2⟨A⟩, ⟨αβ⟩ = 1 - 2⟨A△B⟩.
inline CorrelationOutcome convert_convention(const CorrelationOutcome& x) {
    x.validate();
    CorrelationOutcome y = x;
    y.convention =
        x.convention == Convention::zero_one ? Convention::pm_one : Convention::zero_one;
    auto flip01 = [](double t) { return 1.0 - 2.0 * t; };
    auto flip10 = [](double t) { return (1.0 - t) / 2.0; };
    const bool fwd = x.convention == Convention::zero_one;
    for (auto& t : y.marginals_a) t = fwd ? flip01(t) : flip10(t);
    for (auto& t : y.marginals_b) t = fwd ? flip01(t) : flip10(t);
    for (auto& row : y.joint)
        for (auto& t : row) t = fwd ? flip01(t) : flip10(t);
    return y;
}

/// Affine change of variables so that f'(convert(x)) = f(x) pointwise.
inline BellFunctional convert_functional(const BellFunctional& f) {
    BellFunctional g = f;
    const std::size_t m = f.scenario.m, n = f.scenario.n;
    double sum_a = 0.0, sum_b = 0.0, sum_j = 0.0;
    for (double c : f.coeff_a) sum_a += c;
    for (double c : f.coeff_b) sum_b += c;
    for (const auto& row : f.coeff_joint) for (double c : row) sum_j += c;
    if (f.convention == Convention::zero_one) {
        // Every coordinate substitutes A = (1-α)/2, △ = (1-αβ)/2.
        g.convention = Convention::pm_one;
        for (std::size_t i = 0; i < m; ++i) g.coeff_a[i] = -f.coeff_a[i] / 2.0;
        for (std::size_t j = 0; j < n; ++j) g.coeff_b[j] = -f.coeff_b[j] / 2.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) g.coeff_joint[i][j] = -f.coeff_joint[i][j] / 2.0;
        g.constant = f.constant + (sum_a + sum_b + sum_j) / 2.0;
    } else {
        // α = 1-2A, αβ = 1-2△.
        g.convention = Convention::zero_one;
        for (std::size_t i = 0; i < m; ++i) g.coeff_a[i] = -2.0 * f.coeff_a[i];
        for (std::size_t j = 0; j < n; ++j) g.coeff_b[j] = -2.0 * f.coeff_b[j];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) g.coeff_joint[i][j] = -2.0 * f.coeff_joint[i][j];
        g.constant = f.constant + sum_a + sum_b + sum_j;
    }
    return g;
}

struct NoSignallingViolation {
    std::size_t i = 0, j = 0;
    int inequality = 0;    // 0: x_i+x_j+x_ij ≤ 2; 1..3: the three ≥ 0 forms
    double value = 0.0;
    double slack = 0.0;    // negative amount by which the inequality fails
};

struct NoSignallingReport {
    std::vector<NoSignallingViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks the 4mn rooted-semimetric inequalities (0/1 form):
///   x_i + x_j + x_ij ≤ 2,  x_i + x_j - x_ij ≥ 0,
///   x_i - x_j + x_ij ≥ 0,  -x_i + x_j + x_ij ≥ 0.
inline NoSignallingReport no_signalling_check(const CorrelationOutcome& input, double tol = 1e-9) {
    const CorrelationOutcome x =
        input.convention == Convention::zero_one ? input : convert_convention(input);
    NoSignallingReport rep;
    for (std::size_t i = 0; i < x.scenario.m; ++i) {
        for (std::size_t j = 0; j < x.scenario.n; ++j) {
            const double a = x.marginals_a[i], b = x.marginals_b[j], c = x.joint[i][j];
            const double vals[4] = {2.0 - (a + b + c), a + b - c, a - b + c, -a + b + c};
            for (int k = 0; k < 4; ++k) {
                if (vals[k] < -tol)
                    rep.violations.push_back({i, j, k, k == 0 ? a + b + c : vals[k], vals[k]});
            }
        }
    }
    return rep;
}

/// Deterministic 0/1 vertex: marginals are the bits, joint_ij = [a_i ≠ b_j].
inline CorrelationOutcome deterministic_vertex(const Scenario& s, const std::vector<int>& bits) {
    if (bits.size() != s.m + s.n) throw std::invalid_argument("deterministic_vertex: bit count mismatch");
    CorrelationOutcome x;
    x.scenario = s;
    x.convention = Convention::zero_one;
    x.marginals_a.assign(s.m, 0.0);
    x.marginals_b.assign(s.n, 0.0);
    x.joint.assign(s.m, std::vector<double>(s.n, 0.0));
    for (std::size_t i = 0; i < s.m; ++i) x.marginals_a[i] = bits[i];
    for (std::size_t j = 0; j < s.n; ++j) x.marginals_b[j] = bits[s.m + j];
    for (std::size_t i = 0; i < s.m; ++i)
        for (std::size_t j = 0; j < s.n; ++j)
            x.joint[i][j] = bits[i] != bits[s.m + j] ? 1.0 : 0.0;
    return x;
}

struct MembershipVerdict {
    bool inside = false;
    // Separating functional for outside verdicts: g(z) = coeffs·z + constant
    // with g(vertex) ≤ 0 for every deterministic vertex and g(x) > 0.
    BellFunctional certificate;
    double separation = 0.0;
};

/// LP feasibility over the 2^{m+n} deterministic vertices (phase-I simplex
/// on dense columns). Tolerance 1e-9: near-boundary points count as inside.
inline MembershipVerdict bell_polytope_membership(const CorrelationOutcome& input, double tol = 1e-9) {
    const CorrelationOutcome x =
        input.convention == Convention::zero_one ? input : convert_convention(input);
    x.validate();
    const std::size_t m = x.scenario.m, n = x.scenario.n;
    if (m + n > 16) throw std::invalid_argument("bell_polytope_membership: scenario too large");
    const std::size_t nv = std::size_t(1) << (m + n);
    const std::size_t nrows = m + n + m * n + 1;  // outcome coordinates + convexity
    const std::size_t ncols = nv + nrows;         // vertex columns + artificials

    // Dense tableau, basis starts as the artificial identity block.
    std::vector<std::vector<double>> T(nrows, std::vector<double>(ncols, 0.0));
    std::vector<double> rhs(nrows, 0.0);
    for (std::size_t c = 0; c < nv; ++c) {
        std::size_t r = 0;
        for (std::size_t i = 0; i < m; ++i) T[r++][c] = double((c >> (m + n - 1 - i)) & 1);
        for (std::size_t j = 0; j < n; ++j) T[r++][c] = double((c >> (n - 1 - j)) & 1);
        for (std::size_t i = 0; i < m; ++i) {
            const int ai = int((c >> (m + n - 1 - i)) & 1);
            for (std::size_t j = 0; j < n; ++j) {
                const int bj = int((c >> (n - 1 - j)) & 1);
                T[r++][c] = ai != bj ? 1.0 : 0.0;
            }
        }
        T[r][c] = 1.0;
    }
    for (std::size_t r = 0; r < nrows; ++r) T[r][nv + r] = 1.0;
    {
        std::size_t r = 0;
        for (std::size_t i = 0; i < m; ++i) rhs[r++] = x.marginals_a[i];
        for (std::size_t j = 0; j < n; ++j) rhs[r++] = x.marginals_b[j];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) rhs[r++] = x.joint[i][j];
        rhs[r] = 1.0;
    }

    // Phase-I reduced costs: ĉ_j = -Σ_r T_rj for structural columns, 0 for artificials.
    std::vector<double> cost(ncols, 0.0);
    double z = 0.0;
    for (std::size_t c = 0; c < nv; ++c)
        for (std::size_t r = 0; r < nrows; ++r) cost[c] -= T[r][c];
    for (double b : rhs) z -= b;  // z = -(phase-I objective)

    std::vector<std::size_t> basis(nrows);
    for (std::size_t r = 0; r < nrows; ++r) basis[r] = nv + r;

    const double eps = 1e-11;
    const std::size_t max_iters = 50000;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Entering column: Dantzig rule with a Bland fallback late in the run.
        std::size_t enter = SIZE_MAX;
        if (iter < max_iters / 2) {
            double best = -eps;
            for (std::size_t c = 0; c < ncols; ++c)
                if (cost[c] < best) { best = cost[c]; enter = c; }
        } else {
            for (std::size_t c = 0; c < ncols; ++c)
                if (cost[c] < -eps) { enter = c; break; }
        }
        if (enter == SIZE_MAX) break;
        std::size_t leave = SIZE_MAX;
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (T[r][enter] > eps) {
                const double ratio = rhs[r] / T[r][enter];
                if (leave == SIZE_MAX || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == SIZE_MAX) break;  // unbounded cannot happen here
        const double piv = T[leave][enter];
        for (std::size_t c = 0; c < ncols; ++c) T[leave][c] /= piv;
        rhs[leave] /= piv;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == leave) continue;
            const double f = T[r][enter];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < ncols; ++c) T[r][c] -= f * T[leave][c];
            rhs[r] -= f * rhs[leave];
        }
        const double fc = cost[enter];
        for (std::size_t c = 0; c < ncols; ++c) cost[c] -= fc * T[leave][c];
        z -= fc * rhs[leave];
        basis[leave] = enter;
    }

    MembershipVerdict verdict;
    const double infeas = -z;  // phase-I objective value
    if (infeas <= tol) {
        verdict.inside = true;
        return verdict;
    }
    // Dual prices from artificial reduced costs: y_r = 1 - ĉ_{a_r}.
    std::vector<double> y(nrows);
    for (std::size_t r = 0; r < nrows; ++r) y[r] = 1.0 - cost[nv + r];
    BellFunctional g = BellFunctional::zero(x.scenario, Convention::zero_one);
    std::size_t r = 0;
    for (std::size_t i = 0; i < m; ++i) g.coeff_a[i] = y[r++];
    for (std::size_t j = 0; j < n; ++j) g.coeff_b[j] = y[r++];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) g.coeff_joint[i][j] = y[r++];
    g.constant = y[r];
    verdict.inside = false;
    verdict.certificate = g;
    verdict.separation = infeas;
    return verdict;
}

struct ClassicalMax {
    double value = 0.0;
    std::vector<int> argmax;  // lexicographically smallest maximizing bits
};

/// Exact maximum over the 2^{m+n} deterministic assignments.
inline ClassicalMax classical_max(const BellFunctional& f) {
    const std::size_t m = f.scenario.m, n = f.scenario.n;
    if (m + n > 24) throw std::invalid_argument("classical_max: scenario too large");
    const std::size_t nv = std::size_t(1) << (m + n);
    ClassicalMax best;
    bool first = true;
    std::vector<int> bits(m + n);
    for (std::size_t c = 0; c < nv; ++c) {
        for (std::size_t t = 0; t < m + n; ++t) bits[t] = int((c >> (m + n - 1 - t)) & 1);
        double val = f.constant;
        if (f.convention == Convention::zero_one) {
            for (std::size_t i = 0; i < m; ++i) val += f.coeff_a[i] * bits[i];
            for (std::size_t j = 0; j < n; ++j) val += f.coeff_b[j] * bits[m + j];
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (bits[i] != bits[m + j]) val += f.coeff_joint[i][j];
        } else {
            for (std::size_t i = 0; i < m; ++i) val += f.coeff_a[i] * (1 - 2 * bits[i]);
            for (std::size_t j = 0; j < n; ++j) val += f.coeff_b[j] * (1 - 2 * bits[m + j]);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    val += f.coeff_joint[i][j] * (1 - 2 * bits[i]) * (1 - 2 * bits[m + j]);
        }
        if (first || val > best.value) {
            best.value = val;
            best.argmax = bits;
            first = false;
        }
    }
    return best;
}

/// Max deviation of an L1 embedding from a 0/1 outcome:
/// x_i vs ‖u^i‖₁, x_{m+j} vs ‖v^j‖₁, x_ij vs ‖u^i - v^j‖₁.
inline double l1_verify(const GramSystem& g, const CorrelationOutcome& x) {
    if (x.convention != Convention::zero_one)
        throw std::invalid_argument("l1_verify: 0/1 convention required");
    g.validate();
    if (g.u.size() != x.scenario.m || g.v.size() != x.scenario.n)
        throw std::invalid_argument("l1_verify: dimension mismatch");
    auto l1 = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double t : w) s += std::abs(t);
        return s;
    };
    double dev = 0.0;
    for (std::size_t i = 0; i < g.u.size(); ++i)
        dev = std::max(dev, std::abs(x.marginals_a[i] - l1(g.u[i])));
    for (std::size_t j = 0; j < g.v.size(); ++j)
        dev = std::max(dev, std::abs(x.marginals_b[j] - l1(g.v[j])));
    for (std::size_t i = 0; i < g.u.size(); ++i)
        for (std::size_t j = 0; j < g.v.size(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < g.dim; ++k) s += std::abs(g.u[i][k] - g.v[j][k]);
            dev = std::max(dev, std::abs(x.joint[i][j] - s));
        }
    return dev;
}

enum class GramMode { inner_product, squared_distance };

/// Max deviation of a Gram realization from an outcome. squared_distance
/// matches the 0/1 convention (x_i = ‖u^i‖², x_ij = ‖u^i - v^j‖²);
/// inner_product matches the ±1 joints (c_ij = ⟨u^i|v^j⟩).
inline double gram_verify(const GramSystem& g, const CorrelationOutcome& x, GramMode mode) {
    g.validate();
    if (g.u.size() != x.scenario.m || g.v.size() != x.scenario.n)
        throw std::invalid_argument("gram_verify: dimension mismatch");
    if (mode == GramMode::squared_distance && x.convention != Convention::zero_one)
        throw std::invalid_argument("gram_verify: squared_distance requires 0/1 convention");
    if (mode == GramMode::inner_product && x.convention != Convention::pm_one)
        throw std::invalid_argument("gram_verify: inner_product requires ±1 convention");
    double dev = 0.0;
    if (mode == GramMode::squared_distance) {
        for (std::size_t i = 0; i < g.u.size(); ++i)
            dev = std::max(dev, std::abs(x.marginals_a[i] - dot(g.u[i], g.u[i])));
        for (std::size_t j = 0; j < g.v.size(); ++j)
            dev = std::max(dev, std::abs(x.marginals_b[j] - dot(g.v[j], g.v[j])));
        for (std::size_t i = 0; i < g.u.size(); ++i)
            for (std::size_t j = 0; j < g.v.size(); ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < g.dim; ++k) {
                    const double d = g.u[i][k] - g.v[j][k];
                    s += d * d;
                }
                dev = std::max(dev, std::abs(x.joint[i][j] - s));
            }
    } else {
        for (std::size_t i = 0; i < g.u.size(); ++i)
            for (std::size_t j = 0; j < g.v.size(); ++j)
                dev = std::max(dev, std::abs(x.joint[i][j] - dot(g.u[i], g.v[j])));
    }
    return dev;
}

/// The CHSH facet x_11 - x_12 - x_21 - x_22 ≤ 0 in the 0/1 convention.
inline BellFunctional chsh_functional_zero_one() {
    BellFunctional f = BellFunctional::zero(Scenario(2, 2), Convention::zero_one);
    f.coeff_joint = {{1.0, -1.0}, {-1.0, -1.0}};
    f.classical_bound = 0.0;
    return f;
}

/// Plain ±1 CHSH expression y_11 - y_12 - y_21 - y_22 (classical max 2).
inline BellFunctional chsh_functional_pm_one() {
    BellFunctional f = BellFunctional::zero(Scenario(2, 2), Convention::pm_one);
    f.coeff_joint = {{1.0, -1.0}, {-1.0, -1.0}};
    f.classical_bound = 2.0;
    return f;
}

}  // namespace qcorr
