#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/pauli.hpp"

namespace qcorr {

enum class GeneratorForm { z_form, x_form };

/// 2ν+1 anticommuting, self-inverse Pauli strings on ν qubits: the
/// Weyl-Brauer representation of the Clifford-algebra generators.
struct GeneratorSet {
    std::size_t nu = 0;
    GeneratorForm form = GeneratorForm::z_form;
    std::vector<PauliString> generators;  // size 2ν+1
};

/// z_form: X_k = Z…Z X I…I, X_{k+ν} = -Z…Z Y I…I, X_{2ν+1} = Z^{⊗ν}.
/// x_form: X_k = X…X Z I…I, X_{k+ν} =  X…X Y I…I, X_{2ν+1} = X^{⊗ν}.
/// The sign_flip flag yields the second inequivalent odd-dimensional
/// representation (X_k ↦ -X_k for k ≤ ν).
inline GeneratorSet weyl_brauer(std::size_t nu, GeneratorForm form, bool sign_flip = false) {
    if (nu == 0) throw std::invalid_argument("weyl_brauer: nu must be >= 1");
    GeneratorSet g;
    g.nu = nu;
    g.form = form;
    const char lead = form == GeneratorForm::z_form ? 'Z' : 'X';
    const char mid_a = form == GeneratorForm::z_form ? 'X' : 'Z';
    auto make = [&](std::size_t k, char mid, int phase_exp) {
        std::string s(nu, 'I');
        for (std::size_t q = 0; q + 1 < k; ++q) s[q] = lead;
        s[k - 1] = mid;
        return PauliString::from_letters(s, phase_exp);
    };
    for (std::size_t k = 1; k <= nu; ++k)
        g.generators.push_back(make(k, mid_a, sign_flip ? 2 : 0));
    for (std::size_t k = 1; k <= nu; ++k)
        g.generators.push_back(make(k, 'Y', form == GeneratorForm::z_form ? 2 : 0));
    g.generators.push_back(PauliString::from_letters(std::string(nu, lead)));
    return g;
}

/// Max-norm deviation from X_iX_j + X_jX_i = 2δ_ij I over all pairs.
/// Exact (Pauli algebra over {±1, ±i} phases): anticommuting pairs and
/// unit squares contribute 0; a commuting off-diagonal pair contributes 2.
inline double anticommutation_check(const GeneratorSet& g) {
    double worst = 0.0;
    const std::size_t m = g.generators.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const PauliString& a = g.generators[i];
            const PauliString& b = g.generators[j];
            const PauliString ab = a * b;
            if (i == j) {
                // ‖2X² - 2I‖: zero iff X² = +I.
                worst = std::max(worst, ab.phase_exp == 0 ? 0.0 : 4.0);
            } else {
                // ab + ba is 0 iff they anticommute, else 2ab.
                worst = std::max(worst, a.commutes_with(b) ? 2.0 : 0.0);
            }
        }
    }
    return worst;
}

/// Phase-corrected product of the first 2ν generators. In the z_form the
/// raw product ∏ X_k equals (-i)^{ν mod 2} Z⊗…⊗Z, so multiplying by
/// i^{ν mod 2} recovers the last generator: X_{2ν+1} = i^{ν mod 2} ∏ X_k.
inline PauliString generator_product(const GeneratorSet& g) {
    PauliString p = PauliString::identity(g.nu);
    for (std::size_t k = 0; k < 2 * g.nu; ++k) p = p * g.generators[k];
    p.phase_exp = (p.phase_exp + int(g.nu % 2)) % 4;
    return p;
}

inline DenseMatrix hadamard_matrix() {
    DenseMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h(0, 0) = s; h(0, 1) = s; h(1, 0) = s; h(1, 1) = -s;
    return h;
}

}  // namespace qcorr
