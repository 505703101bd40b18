#pragma once

#include "ncdp/poly.hpp"
#include "ncdp/ratmat.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// Shifted k-brackets as evaluable operators. The value table is stored on
// generator tuples only; evaluation is derived through the derivation rule
// in the last slot and the cyclic (anti)symmetry for the others.

struct KBracket {
    std::shared_ptr<const Presentation> pres;
    int arity = 2;
    int shift = 0;
    std::map<std::vector<int>, Tensor> table;  // values over the algebra space

    // Cyclic transport of a table entry to the rotated tuple.
    static std::pair<std::vector<int>, Tensor> rotate_entry(
        const Presentation& pres, int shift, const std::vector<int>& tuple,
        const Tensor& value);

    static KBracket make(std::shared_ptr<const Presentation> pres, int arity,
                         int shift, std::map<std::vector<int>, Tensor> raw,
                         bool symmetrize = true);

    bool is_zero() const;
    Tensor evaluate(const std::vector<Elem>& args) const;
    Elem loday(const Elem& a, const Elem& b) const;  // arity 2
    bool operator==(const KBracket& o) const;
};

// Necklace <-> bracket dictionary.
KBracket to_bracket(const CycElem& P);                 // pure theta-weight p >= 1
CycElem encode_bracket(const KBracket& pi);            // inverse of to_bracket

// ---------------------------------------------------------------------------
// Double Poisson structures

struct DoublePoisson {
    std::shared_ptr<const Presentation> pres;
    int shift = 0;
    std::map<int, KBracket> brackets;  // arity -> pi_arity

    int top_weight() const;
    CycElem encode() const;  // over poly_space(pres, shift)
    static DoublePoisson from_cyc(std::shared_ptr<const Presentation> pres,
                                  int shift, const CycElem& total);
};

// Maurer-Cartan checker: residues of delta(pi) + 1/2 {pi, pi} per
// theta-weight up to 2N-2 for top declared weight N.
CheckReport mc_check(const DoublePoisson& pi);

// Independent expansion of the double Jacobi cyclic sum
//   sum_cyc tau^i {{a, {{b, c}}}}_L
// for an arity-2 bracket; cross-validates mc_check's weight-3 residue.
Tensor double_jacobi_oracle(const KBracket& pi, int ga, int gb, int gc);

// delta_pi = delta + {pi, -}^smile on polyvectors; requires MC.
Elem twisted_differential(const DoublePoisson& pi, const Elem& Q);

// Non-degeneracy of pi_2: STRICT (entries in Q.(1 (x) 1), invertible) or
// FIBERWISE (invertible at the augmentation sending all generators to 0).
CheckReport nondeg_check(const KBracket& pi2);

// The r x r matrix of pi_2^flat over A (x) A^op: entry[i][j] = pi(x_i, x_j).
std::vector<std::vector<Tensor>> flat_matrix(const KBracket& pi2);

// Rational matrix extraction: strict (all entries scalar) or augmented.
std::optional<RatMat> strict_matrix(const std::vector<std::vector<Tensor>>& m);
RatMat augmented_matrix(const std::vector<std::vector<Tensor>>& m);

}  // namespace ncdp
