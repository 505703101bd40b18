#pragma once

#include "ncdp/brackets.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// Contraction on the form side

// Reduced contraction against the tautological double derivation dual to
// x_j: necklace-cut of the form at its d(x_j) symbols.
Elem iota_partial(int gen, const Elem& form);

// r x r matrix of omega^sharp over A (x) A^op: iota_{d_j}(omega) expanded in
// the basis dx_i; entry [i][j] is the A^e coefficient.
std::vector<std::vector<Tensor>> sharp_matrix(const CycElem& omega2);

// Strict / fiberwise invertibility of omega_2^sharp (for forms).
CheckReport form_nondeg_check(const PreBisym& omega);

// ---------------------------------------------------------------------------
// mu / nu

// mu(-, pi): morphism of graded algebras DR(A) -> Pol(A, n) with
// mu(x) = x and mu(dx) = {pi, x}^smile.
Elem mu(const Elem& alpha, const CycElem& Pi);
CycElem mu_cyc(const CycElem& alpha, const CycElem& Pi);

// nu(-, pi, b): the derivation over mu(-, pi) with nu(x) = 0 and
// nu(dx) = {b, x}^smile, normalized by the epsilon-expansion
// mu(omega, pi + b eps) = mu(omega, pi) + nu(omega, pi, b) eps.
Elem nu(const Elem& alpha, const CycElem& Pi, const CycElem& b);

// kappa(pi) = {delta, pi} + 1/2 {pi, pi} (the Maurer-Cartan defect).
CycElem kappa(const CycElem& Pi);

// Both identities of the key lemma, evaluated exactly:
//   {pi, mu(w,pi)}^sm = mu(dw, pi) + 1/2 nu(w, pi, {pi,pi})
//   delta_pi mu(w,pi) = mu(Dw, pi) + nu(w, pi, kappa(pi))
// pi need not be Maurer-Cartan.
CheckReport validate_key_identities(const Elem& omega, const CycElem& Pi);

// ---------------------------------------------------------------------------
// Compatible pairs

struct CompatWitness {
    PreBisym omega;
    DoublePoisson pi;
    std::optional<CycElem> homotopy;
};

// defect = tr mu(omega, pi) - sigma(pi); PASS-STRICT when 0, PASS-WITNESSED
// when equal to delta_pi(h) for the supplied h, otherwise FAIL.
CheckReport compat_check(const CompatWitness& w);

struct FlatMuResult {
    std::vector<std::vector<Tensor>> lhs;   // (tr mu(omega, pi))^flat
    std::vector<std::vector<Tensor>> rhs;   // pi^flat o omega^sharp o pi^flat
    bool equal = false;
};

// Example-level regression of all sign conventions:
// (tr mu(omega,pi))^flat = pi^flat o omega^sharp o pi^flat.
FlatMuResult flat_of_mu(const CycElem& omega2, const KBracket& pi2);

// ---------------------------------------------------------------------------
// Strict Legendre conversion (constant-coefficient non-degenerate case)

struct LegendreToOmega {
    PreBisym omega;
    CheckReport prebisym;
    CheckReport compat;
};
LegendreToOmega legendre_pi_to_omega(const DoublePoisson& pi);

struct LegendreToPi {
    DoublePoisson pi;
    CheckReport mc;
    CheckReport compat;
};
LegendreToPi legendre_omega_to_pi(const PreBisym& omega);

}  // namespace ncdp
