#pragma once

#include "ncdp/forms.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// The necklace model of shifted non-commutative multiderivations: the free
// algebra on {x_i, theta_i} with |theta_i| = -|x_i| - n - 1, carrying the
// double Schouten bracket. Cyclic polyvectors are its necklace quotient.
//
// The differential on theta symbols is not declared: it is derived as the
// inner derivation {W, -}^smile of the weight-1 necklace
//     W = sum_i (-1)^{|x_i|+n} tr(theta_i . delta x_i),
// which is the statement that the polyvector algebra is the shifted
// cotangent of A. Construction asserts {W, x_k}^smile = delta(x_k) and
// {W, W} = 0, so delta^2 = 0 on polyvectors is inherited from A.

std::shared_ptr<const Space> poly_space(std::shared_ptr<const Presentation> p,
                                        int shift);

// The weight-1 necklace W with {W,-}^smile = delta.
CycElem poly_hamiltonian(const std::shared_ptr<const Space>& psp);

// Double Schouten bracket on the free algebra: the unique double bracket
// with {{x_i, theta_j}} = delta_ij 1 (x) 1, {{x,x}} = {{theta,theta}} = 0,
// a derivation in each slot; raises chain degree by shift + 1.
Tensor double_schouten(const Elem& P, const Elem& Q);

// Necklace projection (trace map Pol -> Pol_cyc).
CycElem trace(const Elem& P);

// {pi, Q}^smile = m({{lift pi, Q}}): a derivation in Q lifting the Lie
// bracket, with tr({pi,Q}^smile) = {pi, tr Q}.
Elem smile_bracket(const CycElem& pi, const Elem& Q);

// The DGLA bracket on necklaces.
CycElem dgla_bracket(const CycElem& pi, const CycElem& rho);

// sigma(pi) = sum_i (i-1) pi_i over theta-weights i >= 2.
CycElem sigma(const CycElem& pi);

// Embed an algebra element into the polyvector space (x ids agree).
Elem to_poly(const std::shared_ptr<const Space>& psp, const Elem& a);
Elem poly_to_algebra(const Elem& a);  // requires theta-weight 0

// theta-weight decomposition of a plain polyvector.
std::map<int, Elem> poly_by_weight(const Elem& P);

}  // namespace ncdp
