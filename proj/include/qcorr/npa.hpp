#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/correlation.hpp"
#include "qcorr/sdp.hpp"

namespace qcorr {

/// Two-party scenario with arbitrary outcome counts per measurement.
struct GeneralScenario {
    std::size_t m = 0, n = 0;
    std::vector<std::size_t> outcomes_a;  // per A measurement, each >= 2
    std::vector<std::size_t> outcomes_b;

    static GeneralScenario binary(const Scenario& s) {
        GeneralScenario g;
        g.m = s.m;
        g.n = s.n;
        g.outcomes_a.assign(s.m, 2);
        g.outcomes_b.assign(s.n, 2);
        return g;
    }

    void validate() const {
        if (m == 0 || n == 0 || outcomes_a.size() != m || outcomes_b.size() != n)
            throw std::invalid_argument("GeneralScenario: shape mismatch");
        for (std::size_t d : outcomes_a)
            if (d < 2) throw std::invalid_argument("GeneralScenario: outcome count < 2");
        for (std::size_t d : outcomes_b)
            if (d < 2) throw std::invalid_argument("GeneralScenario: outcome count < 2");
    }
};

/// One projector symbol: party 0 = A-side E, party 1 = B-side F. Only the
/// first (outcomes-1) outcomes of each measurement get a symbol; the last
/// is implicit through completeness.
struct ProjectorSymbol {
    int party = 0;
    std::size_t meas = 0;
    std::size_t outcome = 0;

    bool operator==(const ProjectorSymbol& o) const {
        return party == o.party && meas == o.meas && outcome == o.outcome;
    }
    bool operator<(const ProjectorSymbol& o) const {
        if (party != o.party) return party < o.party;
        if (meas != o.meas) return meas < o.meas;
        return outcome < o.outcome;
    }
};

using OperatorSequence = std::vector<ProjectorSymbol>;  // empty = identity

struct CanonicalResult {
    bool zero = false;
    OperatorSequence seq;
};

/// Rewrites a product of projectors to canonical form: commute all B-side
/// symbols to the right of A-side symbols, then collapse adjacent symbols
/// from the same measurement (same outcome: idempotent; different outcome:
/// orthogonal, whole product vanishes).
inline CanonicalResult canonical_form(const OperatorSequence& in) {
    OperatorSequence seq;
    for (const auto& s : in)
        if (s.party == 0) seq.push_back(s);
    for (const auto& s : in)
        if (s.party == 1) seq.push_back(s);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
            if (seq[k].party == seq[k + 1].party && seq[k].meas == seq[k + 1].meas) {
                if (seq[k].outcome != seq[k + 1].outcome) return {true, {}};
                seq.erase(seq.begin() + std::ptrdiff_t(k) + 1);
                changed = true;
                break;
            }
        }
    }
    return {false, seq};
}

inline OperatorSequence adjoint_sequence(OperatorSequence s) {
    std::reverse(s.begin(), s.end());
    return s;
}

namespace detail {

inline std::string seq_key(const OperatorSequence& s) {
    std::string k;
    for (const auto& p : s) {
        k += p.party == 0 ? 'E' : 'F';
        k += std::to_string(p.meas) + "." + std::to_string(p.outcome) + ";";
    }
    return k;
}

/// Symmetric class key of a moment: min over the sequence and the canonical
/// form of its adjoint. The adjoint pair ⟨S⟩, ⟨S†⟩ are complex conjugates,
/// so their shared real part is one variable of the real relaxation.
inline std::string moment_key(const OperatorSequence& s) {
    const std::string a = seq_key(s);
    const CanonicalResult c = canonical_form(adjoint_sequence(s));
    const std::string b = seq_key(c.seq);
    return a < b ? a : b;
}

}  // namespace detail

enum class NpaLevel { one, one_ab, two };

inline NpaLevel parse_npa_level(const std::string& s) {
    if (s == "1") return NpaLevel::one;
    if (s == "1ab" || s == "one_ab") return NpaLevel::one_ab;
    if (s == "2") return NpaLevel::two;
    throw std::invalid_argument("unknown moment-hierarchy level: " + s);
}

/// Sequence index set for a hierarchy level. Deterministic order: identity,
/// A-side singles, B-side singles, then products in lexicographic order.
inline std::vector<OperatorSequence> build_sequences(const GeneralScenario& s, NpaLevel level) {
    s.validate();
    std::vector<OperatorSequence> out;
    out.push_back({});  // identity
    std::vector<ProjectorSymbol> singles_a, singles_b;
    for (std::size_t i = 0; i < s.m; ++i)
        for (std::size_t a = 0; a + 1 < s.outcomes_a[i]; ++a)
            singles_a.push_back({0, i, a});
    for (std::size_t j = 0; j < s.n; ++j)
        for (std::size_t b = 0; b + 1 < s.outcomes_b[j]; ++b)
            singles_b.push_back({1, j, b});
    for (const auto& p : singles_a) out.push_back({p});
    for (const auto& p : singles_b) out.push_back({p});

    auto add_products = [&](const std::vector<ProjectorSymbol>& lhs,
                            const std::vector<ProjectorSymbol>& rhs) {
        std::map<std::string, OperatorSequence> seen;
        for (const auto& x : lhs)
            for (const auto& y : rhs) {
                CanonicalResult c = canonical_form({x, y});
                if (c.zero || c.seq.size() < 2) continue;  // collapses to a shorter sequence
                seen.emplace(detail::seq_key(c.seq), c.seq);
            }
        for (auto& [k, v] : seen) out.push_back(v);
    };
    if (level == NpaLevel::one_ab) {
        add_products(singles_a, singles_b);
    } else if (level == NpaLevel::two) {
        add_products(singles_a, singles_a);
        add_products(singles_a, singles_b);
        add_products(singles_b, singles_b);
    }
    if (out.size() > 2000) throw std::invalid_argument("build_sequences: size cap exceeded");
    return out;
}

struct MomentProblem {
    GeneralScenario scenario;
    std::vector<OperatorSequence> sequences;
    // class key -> cells (k <= l) sharing one moment variable
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> classes;
    std::vector<std::pair<std::size_t, std::size_t>> zero_cells;
    // canonical class key of short moments -> representative cell
    std::map<std::string, std::pair<std::size_t, std::size_t>> symbol_cell;
};

inline MomentProblem build_moment_problem(const GeneralScenario& s, NpaLevel level) {
    MomentProblem mp;
    mp.scenario = s;
    mp.sequences = build_sequences(s, level);
    const std::size_t N = mp.sequences.size();
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k; l < N; ++l) {
            OperatorSequence prod = adjoint_sequence(mp.sequences[k]);
            prod.insert(prod.end(), mp.sequences[l].begin(), mp.sequences[l].end());
            CanonicalResult c = canonical_form(prod);
            if (c.zero) {
                mp.zero_cells.push_back({k, l});
                continue;
            }
            const std::string key = detail::moment_key(c.seq);
            mp.classes[key].push_back({k, l});
            if (!mp.symbol_cell.count(key)) mp.symbol_cell[key] = {k, l};
        }
    }
    return mp;
}

/// Probability coefficients of a generalized Bell expression:
/// g(P) = sum V[i][j][a][b] P(a,b|i,j) + sum Va[i][a] P(a|i)
///      + sum Vb[j][b] P(b|j) + constant.
struct CoefficientTable {
    GeneralScenario scenario;
    std::vector<std::vector<std::vector<std::vector<double>>>> V;  // [i][j][a][b]
    std::vector<std::vector<double>> Va;                           // [i][a]
    std::vector<std::vector<double>> Vb;                           // [j][b]
    double constant = 0.0;

    static CoefficientTable zero(const GeneralScenario& s) {
        s.validate();
        CoefficientTable t;
        t.scenario = s;
        t.V.resize(s.m);
        for (std::size_t i = 0; i < s.m; ++i) {
            t.V[i].resize(s.n);
            for (std::size_t j = 0; j < s.n; ++j)
                t.V[i][j].assign(s.outcomes_a[i], std::vector<double>(s.outcomes_b[j], 0.0));
        }
        t.Va.resize(s.m);
        for (std::size_t i = 0; i < s.m; ++i) t.Va[i].assign(s.outcomes_a[i], 0.0);
        t.Vb.resize(s.n);
        for (std::size_t j = 0; j < s.n; ++j) t.Vb[j].assign(s.outcomes_b[j], 0.0);
        return t;
    }
};

/// Binary-scenario functional -> probability coefficients. In the 0/1
/// convention ⟨A_i⟩ = P(1|i) and ⟨A△B⟩ = P(0,1)+P(1,0); ±1 functionals
/// take the 0/1 route first.
inline CoefficientTable to_coefficient_table(const BellFunctional& fin) {
    const BellFunctional f =
        fin.convention == Convention::zero_one ? fin : convert_functional(fin);
    CoefficientTable t = CoefficientTable::zero(GeneralScenario::binary(f.scenario));
    t.constant = f.constant;
    for (std::size_t i = 0; i < f.scenario.m; ++i) t.Va[i][1] = f.coeff_a[i];
    for (std::size_t j = 0; j < f.scenario.n; ++j) t.Vb[j][1] = f.coeff_b[j];
    for (std::size_t i = 0; i < f.scenario.m; ++i)
        for (std::size_t j = 0; j < f.scenario.n; ++j) {
            t.V[i][j][0][1] += f.coeff_joint[i][j];
            t.V[i][j][1][0] += f.coeff_joint[i][j];
        }
    return t;
}

namespace detail {

/// Accumulates the coefficient table into moment-symbol coefficients
/// (symbols: ⟨E⟩, ⟨F⟩, ⟨EF⟩ over the retained outcomes) plus a constant,
/// using completeness to eliminate the last outcome of every measurement.
struct MomentObjective {
    std::map<std::string, double> symbol_coeff;
    double constant = 0.0;

    void add_symbol(const OperatorSequence& s, double c) {
        if (c == 0.0) return;
        if (s.empty()) {
            constant += c;
            return;
        }
        symbol_coeff[moment_key(s)] += c;
    }

    // P(a|i) in terms of retained A projectors.
    void add_pa(const GeneralScenario& sc, std::size_t i, std::size_t a, double c) {
        if (c == 0.0) return;
        if (a + 1 < sc.outcomes_a[i]) {
            add_symbol({ProjectorSymbol{0, i, a}}, c);
        } else {
            constant += c;
            for (std::size_t ap = 0; ap + 1 < sc.outcomes_a[i]; ++ap)
                add_symbol({ProjectorSymbol{0, i, ap}}, -c);
        }
    }

    void add_pb(const GeneralScenario& sc, std::size_t j, std::size_t b, double c) {
        if (c == 0.0) return;
        if (b + 1 < sc.outcomes_b[j]) {
            add_symbol({ProjectorSymbol{1, j, b}}, c);
        } else {
            constant += c;
            for (std::size_t bp = 0; bp + 1 < sc.outcomes_b[j]; ++bp)
                add_symbol({ProjectorSymbol{1, j, bp}}, -c);
        }
    }

    void add_pab(const GeneralScenario& sc, std::size_t i, std::size_t j, std::size_t a,
                 std::size_t b, double c) {
        if (c == 0.0) return;
        const bool a_kept = a + 1 < sc.outcomes_a[i];
        const bool b_kept = b + 1 < sc.outcomes_b[j];
        if (a_kept && b_kept) {
            add_symbol({ProjectorSymbol{0, i, a}, ProjectorSymbol{1, j, b}}, c);
        } else if (a_kept) {
            // P(a, last) = P(a|i) - sum_b' P(a, b')
            add_pa(sc, i, a, c);
            for (std::size_t bp = 0; bp + 1 < sc.outcomes_b[j]; ++bp)
                add_symbol({ProjectorSymbol{0, i, a}, ProjectorSymbol{1, j, bp}}, -c);
        } else if (b_kept) {
            add_pb(sc, j, b, c);
            for (std::size_t ap = 0; ap + 1 < sc.outcomes_a[i]; ++ap)
                add_symbol({ProjectorSymbol{0, i, ap}, ProjectorSymbol{1, j, b}}, -c);
        } else {
            // P(last, last) = 1 - sum P(a') - sum P(b') + sum sum P(a',b')
            constant += c;
            for (std::size_t ap = 0; ap + 1 < sc.outcomes_a[i]; ++ap) add_pa(sc, i, ap, -c);
            for (std::size_t bp = 0; bp + 1 < sc.outcomes_b[j]; ++bp) add_pb(sc, j, bp, -c);
            for (std::size_t ap = 0; ap + 1 < sc.outcomes_a[i]; ++ap)
                for (std::size_t bp = 0; bp + 1 < sc.outcomes_b[j]; ++bp)
                    add_symbol({ProjectorSymbol{0, i, ap}, ProjectorSymbol{1, j, bp}}, c);
        }
    }
};

inline MomentObjective expand_objective(const CoefficientTable& t) {
    MomentObjective obj;
    obj.constant += t.constant;
    const GeneralScenario& sc = t.scenario;
    for (std::size_t i = 0; i < sc.m; ++i)
        for (std::size_t a = 0; a < sc.outcomes_a[i]; ++a) obj.add_pa(sc, i, a, t.Va[i][a]);
    for (std::size_t j = 0; j < sc.n; ++j)
        for (std::size_t b = 0; b < sc.outcomes_b[j]; ++b) obj.add_pb(sc, j, b, t.Vb[j][b]);
    for (std::size_t i = 0; i < sc.m; ++i)
        for (std::size_t j = 0; j < sc.n; ++j)
            for (std::size_t a = 0; a < sc.outcomes_a[i]; ++a)
                for (std::size_t b = 0; b < sc.outcomes_b[j]; ++b)
                    obj.add_pab(sc, i, j, a, b, t.V[i][j][a][b]);
    return obj;
}

/// Shared equality structure of the moment matrix expressed over block 0
/// of an SdpProblem (with or without the λ-shift auxiliary blocks).
inline void add_structure_constraints(SdpProblem& p, const MomentProblem& mp, bool with_lambda) {
    auto entry = [&](LinearExpr& e, std::size_t k, std::size_t l, double c) {
        e.add(0, k, l, c);
        if (with_lambda && k == l) {
            e.add(1, 0, 0, c);
            e.add(2, 0, 0, -c);
        }
    };
    {
        LinearExpr e;
        entry(e, 0, 0, 1.0);
        p.eq.push_back({e, 1.0});
    }
    for (const auto& [key, cells] : mp.classes) {
        for (std::size_t t = 1; t < cells.size(); ++t) {
            LinearExpr e;
            entry(e, cells[t].first, cells[t].second, 1.0);
            entry(e, cells[0].first, cells[0].second, -1.0);
            p.eq.push_back({e, 0.0});
        }
    }
    for (const auto& [k, l] : mp.zero_cells) {
        LinearExpr e;
        entry(e, k, l, 1.0);
        p.eq.push_back({e, 0.0});
    }
}

}  // namespace detail

struct NpaBoundResult {
    double value = 0.0;
    std::size_t matrix_size = 0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Maximum of a Bell expression over the level-c moment relaxation of the
/// quantum set (upper bound on the true quantum maximum).
inline NpaBoundResult npa_bound(const CoefficientTable& t, NpaLevel level, double tol = 1e-8,
                                std::size_t max_iter = 200000) {
    MomentProblem mp = build_moment_problem(t.scenario, level);
    SdpProblem p;
    p.blocks = {mp.sequences.size()};
    detail::add_structure_constraints(p, mp, false);
    detail::MomentObjective obj = detail::expand_objective(t);
    for (const auto& [key, c] : obj.symbol_coeff) {
        auto it = mp.symbol_cell.find(key);
        if (it == mp.symbol_cell.end())
            throw std::invalid_argument("npa_bound: probability symbol missing from moment matrix");
        p.objective.add(0, it->second.first, it->second.second, c);
    }
    SdpSolution s = solve_sdp(p, tol, max_iter);
    if (!s.converged) throw std::runtime_error("npa_bound: SDP did not converge");
    return {s.value + obj.constant, mp.sequences.size(), s.converged, s.iterations};
}

inline NpaBoundResult npa_bound(const BellFunctional& f, NpaLevel level, double tol = 1e-8,
                                std::size_t max_iter = 200000) {
    return npa_bound(to_coefficient_table(f), level, tol, max_iter);
}

/// Full conditional probability table P(a,b|i,j) with marginals.
struct ProbabilityTable {
    GeneralScenario scenario;
    std::vector<std::vector<double>> pa;  // [i][a]
    std::vector<std::vector<double>> pb;  // [j][b]
    std::vector<std::vector<std::vector<std::vector<double>>>> pab;  // [i][j][a][b]

    void validate(double tol = 1e-6) const {
        scenario.validate();
        if (pa.size() != scenario.m || pb.size() != scenario.n || pab.size() != scenario.m)
            throw std::invalid_argument("ProbabilityTable: shape mismatch");
        for (std::size_t i = 0; i < scenario.m; ++i) {
            if (pa[i].size() != scenario.outcomes_a[i])
                throw std::invalid_argument("ProbabilityTable: shape mismatch");
            double s = 0.0;
            for (double x : pa[i]) {
                if (x < -tol || x > 1.0 + tol)
                    throw std::invalid_argument("ProbabilityTable: probability out of range");
                s += x;
            }
            if (std::abs(s - 1.0) > tol)
                throw std::invalid_argument("ProbabilityTable: A marginal not normalized");
        }
        for (std::size_t j = 0; j < scenario.n; ++j) {
            if (pb[j].size() != scenario.outcomes_b[j])
                throw std::invalid_argument("ProbabilityTable: shape mismatch");
            double s = 0.0;
            for (double x : pb[j]) {
                if (x < -tol || x > 1.0 + tol)
                    throw std::invalid_argument("ProbabilityTable: probability out of range");
                s += x;
            }
            if (std::abs(s - 1.0) > tol)
                throw std::invalid_argument("ProbabilityTable: B marginal not normalized");
        }
        for (std::size_t i = 0; i < scenario.m; ++i) {
            if (pab[i].size() != scenario.n)
                throw std::invalid_argument("ProbabilityTable: shape mismatch");
            for (std::size_t j = 0; j < scenario.n; ++j) {
                for (std::size_t a = 0; a < scenario.outcomes_a[i]; ++a) {
                    double s = 0.0;
                    for (std::size_t b = 0; b < scenario.outcomes_b[j]; ++b) s += pab[i][j][a][b];
                    if (std::abs(s - pa[i][a]) > tol)
                        throw std::invalid_argument("ProbabilityTable: no-signalling violated (A)");
                }
                for (std::size_t b = 0; b < scenario.outcomes_b[j]; ++b) {
                    double s = 0.0;
                    for (std::size_t a = 0; a < scenario.outcomes_a[i]; ++a) s += pab[i][j][a][b];
                    if (std::abs(s - pb[j][b]) > tol)
                        throw std::invalid_argument("ProbabilityTable: no-signalling violated (B)");
                }
            }
        }
    }
};

/// Binary 0/1 outcome -> full probability table.
inline ProbabilityTable outcome_to_table(const CorrelationOutcome& input) {
    const CorrelationOutcome x =
        input.convention == Convention::zero_one ? input : convert_convention(input);
    ProbabilityTable t;
    t.scenario = GeneralScenario::binary(x.scenario);
    const std::size_t m = x.scenario.m, n = x.scenario.n;
    t.pa.resize(m);
    t.pb.resize(n);
    for (std::size_t i = 0; i < m; ++i) t.pa[i] = {1.0 - x.marginals_a[i], x.marginals_a[i]};
    for (std::size_t j = 0; j < n; ++j) t.pb[j] = {1.0 - x.marginals_b[j], x.marginals_b[j]};
    t.pab.assign(m, std::vector<std::vector<std::vector<double>>>(
                        n, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0))));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double xa = x.marginals_a[i], xb = x.marginals_b[j], dis = x.joint[i][j];
            t.pab[i][j][0][0] = 1.0 - (xa + xb + dis) / 2.0;
            t.pab[i][j][1][1] = (xa + xb - dis) / 2.0;
            t.pab[i][j][1][0] = xa - t.pab[i][j][1][1];
            t.pab[i][j][0][1] = xb - t.pab[i][j][1][1];
        }
    return t;
}

struct NpaMembership {
    bool inside = false;
    double lambda = 0.0;  // max λ with Γ - λI PSD under the cell constraints
    bool converged = false;
};

/// Membership test against the level-c relaxation: fixes every cell whose
/// moment is a probability symbol of P and maximizes the smallest
/// eigenvalue shift λ; P is in Q_c iff λ* ≥ -1e-8 (scaled by tol).
inline NpaMembership membership_check(const ProbabilityTable& tab, NpaLevel level,
                                      double tol = 1e-8, std::size_t max_iter = 200000) {
    tab.validate();
    const GeneralScenario& sc = tab.scenario;
    MomentProblem mp = build_moment_problem(sc, level);
    SdpProblem p;
    p.blocks = {mp.sequences.size(), 1, 1};
    detail::add_structure_constraints(p, mp, true);
    auto fix_symbol = [&](const OperatorSequence& s, double val) {
        auto it = mp.symbol_cell.find(detail::moment_key(s));
        if (it == mp.symbol_cell.end())
            throw std::invalid_argument("membership_check: symbol missing from moment matrix");
        LinearExpr e;
        e.add(0, it->second.first, it->second.second, 1.0);
        if (it->second.first == it->second.second) {
            e.add(1, 0, 0, 1.0);
            e.add(2, 0, 0, -1.0);
        }
        p.eq.push_back({e, val});
    };
    for (std::size_t i = 0; i < sc.m; ++i)
        for (std::size_t a = 0; a + 1 < sc.outcomes_a[i]; ++a)
            fix_symbol({ProjectorSymbol{0, i, a}}, tab.pa[i][a]);
    for (std::size_t j = 0; j < sc.n; ++j)
        for (std::size_t b = 0; b + 1 < sc.outcomes_b[j]; ++b)
            fix_symbol({ProjectorSymbol{1, j, b}}, tab.pb[j][b]);
    for (std::size_t i = 0; i < sc.m; ++i)
        for (std::size_t j = 0; j < sc.n; ++j)
            for (std::size_t a = 0; a + 1 < sc.outcomes_a[i]; ++a)
                for (std::size_t b = 0; b + 1 < sc.outcomes_b[j]; ++b)
                    fix_symbol({ProjectorSymbol{0, i, a}, ProjectorSymbol{1, j, b}},
                               tab.pab[i][j][a][b]);
    p.objective.add(1, 0, 0, 1.0);
    p.objective.add(2, 0, 0, -1.0);
    SdpSolution s = solve_sdp(p, tol, max_iter);
    NpaMembership out;
    out.lambda = s.value;
    out.converged = s.converged;
    out.inside = s.value >= -10.0 * tol;
    return out;
}

inline NpaMembership membership_check(const CorrelationOutcome& x, NpaLevel level,
                                      double tol = 1e-8, std::size_t max_iter = 200000) {
    return membership_check(outcome_to_table(x), level, tol, max_iter);
}

}  // namespace qcorr
