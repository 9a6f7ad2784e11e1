#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/npa.hpp"
#include "qcorr/realization.hpp"

namespace qcorr {

using nlohmann::json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

inline Convention convention_from_string(const std::string& s) {
    if (s == "zero_one") return Convention::zero_one;
    if (s == "pm_one") return Convention::pm_one;
    throw std::invalid_argument("unknown convention: " + s);
}

inline std::string convention_to_string(Convention c) {
    return c == Convention::zero_one ? "zero_one" : "pm_one";
}

// ---------------------------------------------------------------------------
// Outcome / functional documents.
// ---------------------------------------------------------------------------

inline CorrelationOutcome outcome_from_json(const json& j) {
    CorrelationOutcome x;
    x.scenario = Scenario(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>());
    x.convention = convention_from_string(j.at("convention").get<std::string>());
    x.marginals_a = j.at("marginals_a").get<std::vector<double>>();
    x.marginals_b = j.at("marginals_b").get<std::vector<double>>();
    x.joint = j.at("joint").get<std::vector<std::vector<double>>>();
    x.validate();
    return x;
}

inline json outcome_to_json(const CorrelationOutcome& x) {
    return json{{"m", x.scenario.m},
                {"n", x.scenario.n},
                {"convention", convention_to_string(x.convention)},
                {"marginals_a", x.marginals_a},
                {"marginals_b", x.marginals_b},
                {"joint", x.joint}};
}

inline BellFunctional functional_from_json(const json& j) {
    BellFunctional f;
    f.scenario = Scenario(j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>());
    f.convention = convention_from_string(j.at("convention").get<std::string>());
    f.coeff_a = j.at("marginals_a").get<std::vector<double>>();
    f.coeff_b = j.at("marginals_b").get<std::vector<double>>();
    f.coeff_joint = j.at("joint").get<std::vector<std::vector<double>>>();
    f.constant = j.value("constant", 0.0);
    if (j.contains("classical_bound")) f.classical_bound = j.at("classical_bound").get<double>();
    if (f.coeff_a.size() != f.scenario.m || f.coeff_b.size() != f.scenario.n ||
        f.coeff_joint.size() != f.scenario.m)
        throw std::invalid_argument("functional document: shape mismatch");
    for (const auto& row : f.coeff_joint)
        if (row.size() != f.scenario.n)
            throw std::invalid_argument("functional document: shape mismatch");
    return f;
}

inline json functional_to_json(const BellFunctional& f) {
    json j{{"m", f.scenario.m},
           {"n", f.scenario.n},
           {"convention", convention_to_string(f.convention)},
           {"marginals_a", f.coeff_a},
           {"marginals_b", f.coeff_b},
           {"joint", f.coeff_joint},
           {"constant", f.constant}};
    if (f.classical_bound) j["classical_bound"] = *f.classical_bound;
    return j;
}

// ---------------------------------------------------------------------------
// Gram system documents.
// ---------------------------------------------------------------------------

inline GramSystem gram_from_json(const json& j) {
    GramSystem g;
    g.u = j.at("u").get<std::vector<std::vector<double>>>();
    g.v = j.at("v").get<std::vector<std::vector<double>>>();
    if (g.u.empty() && g.v.empty()) throw std::invalid_argument("gram document: empty system");
    g.dim = !g.u.empty() ? g.u[0].size() : g.v[0].size();
    g.validate();
    return g;
}

inline json gram_to_json(const GramSystem& g) {
    return json{{"u", g.u}, {"v", g.v}};
}

// ---------------------------------------------------------------------------
// Realization documents. The Pauli decomposition is the authoritative,
// lossless representation; dense matrices are included only for small
// registers as a human-readable extra.
// ---------------------------------------------------------------------------

inline json pauli_sum_to_json(const PauliSum& s) {
    json terms = json::array();
    for (const auto& [c, p] : s.terms) {
        double coeff = c;
        if (p.phase_exp == 2) coeff = -coeff;
        else if (p.phase_exp != 0)
            throw std::invalid_argument("realization document: non-real Pauli term");
        terms.push_back(json{{"coeff", coeff}, {"pauli", p.letters()}});
    }
    return terms;
}

inline PauliSum pauli_sum_from_json(const json& j, std::size_t n_qubits) {
    PauliSum s;
    for (const auto& t : j) {
        PauliString p = PauliString::from_letters(t.at("pauli").get<std::string>());
        if (p.n != n_qubits) throw std::invalid_argument("realization document: pauli length mismatch");
        s.terms.push_back({t.at("coeff").get<double>(), p});
    }
    if (s.terms.empty()) throw std::invalid_argument("realization document: empty observable");
    return s;
}

inline json realization_to_json(const QuantumRealization& r) {
    json state = json::array();
    for (const auto& a : r.state) state.push_back(json::array({a.real(), a.imag()}));
    json da = json::array(), db = json::array();
    for (const auto& o : r.observables_a) da.push_back(pauli_sum_to_json(o));
    for (const auto& o : r.observables_b) db.push_back(pauli_sum_to_json(o));
    std::vector<int> signs(r.xi, 1);
    for (std::size_t k = r.nu; k < 2 * r.nu && k < r.xi; ++k) signs[k] = -1;
    json j{{"nu", r.nu},
           {"xi", r.xi},
           {"n_qubits", r.n_qubits},
           {"state", state},
           {"pauli_decomp", json{{"observables_a", da}, {"observables_b", db}}},
           {"signs", signs}};
    if (r.n_qubits <= 6) {
        auto dense = [&](const std::vector<PauliSum>& obs) {
            json arr = json::array();
            for (const auto& o : obs) {
                DenseMatrix M = o.to_matrix();
                json rows = json::array();
                for (std::size_t i = 0; i < M.rows(); ++i) {
                    json row = json::array();
                    for (std::size_t c = 0; c < M.cols(); ++c)
                        row.push_back(json::array({M(i, c).real(), M(i, c).imag()}));
                    rows.push_back(row);
                }
                arr.push_back(rows);
            }
            return arr;
        };
        j["observables_a"] = dense(r.observables_a);
        j["observables_b"] = dense(r.observables_b);
    }
    return j;
}

inline QuantumRealization realization_from_json(const json& j) {
    QuantumRealization r;
    r.nu = j.at("nu").get<std::size_t>();
    r.xi = j.at("xi").get<std::size_t>();
    r.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& a : j.at("state"))
        r.state.push_back(cplx(a.at(0).get<double>(), a.at(1).get<double>()));
    if (r.state.size() != (std::size_t(1) << r.n_qubits))
        throw std::invalid_argument("realization document: state length mismatch");
    const json& pd = j.at("pauli_decomp");
    for (const auto& o : pd.at("observables_a"))
        r.observables_a.push_back(pauli_sum_from_json(o, r.n_qubits));
    for (const auto& o : pd.at("observables_b"))
        r.observables_b.push_back(pauli_sum_from_json(o, r.n_qubits));
    return r;
}

// ---------------------------------------------------------------------------
// Probability and coefficient tables (generalized scenarios).
// ---------------------------------------------------------------------------

inline GeneralScenario general_scenario_from_json(const json& j) {
    GeneralScenario s;
    s.outcomes_a = j.at("outcomes_a").get<std::vector<std::size_t>>();
    s.outcomes_b = j.at("outcomes_b").get<std::vector<std::size_t>>();
    s.m = s.outcomes_a.size();
    s.n = s.outcomes_b.size();
    s.validate();
    return s;
}

inline ProbabilityTable probability_table_from_json(const json& j) {
    ProbabilityTable t;
    t.scenario = general_scenario_from_json(j);
    const json& P = j.at("P");
    t.pa = P.at("a|i").get<std::vector<std::vector<double>>>();
    t.pb = P.at("b|j").get<std::vector<std::vector<double>>>();
    t.pab = P.at("ab|ij").get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
    t.validate();
    return t;
}

inline json probability_table_to_json(const ProbabilityTable& t) {
    return json{{"outcomes_a", t.scenario.outcomes_a},
                {"outcomes_b", t.scenario.outcomes_b},
                {"P", json{{"a|i", t.pa}, {"b|j", t.pb}, {"ab|ij", t.pab}}}};
}

inline CoefficientTable coefficient_table_from_json(const json& j) {
    CoefficientTable t = CoefficientTable::zero(general_scenario_from_json(j));
    t.V = j.at("V").get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
    if (j.contains("Va")) t.Va = j.at("Va").get<std::vector<std::vector<double>>>();
    if (j.contains("Vb")) t.Vb = j.at("Vb").get<std::vector<std::vector<double>>>();
    t.constant = j.value("constant", 0.0);
    if (t.V.size() != t.scenario.m || t.Va.size() != t.scenario.m || t.Vb.size() != t.scenario.n)
        throw std::invalid_argument("coefficient table: shape mismatch");
    return t;
}

}  // namespace qcorr
