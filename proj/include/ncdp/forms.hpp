#pragma once

#include "ncdp/algebra.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// Necklaces: rotation classes of words with Koszul-signed rotations.
//
// Canonical representative = lexicographically least rotation; the sign of
// rotating there is absorbed into the coefficient. Classes where some
// rotation fixes the word with sign -1 are identically zero and never stored.

// Returns (canonical word, sign) or nullopt for a sign-ambiguous class.
std::optional<std::pair<Word, int>> necklace_canon(const Space& sp, const Word& w);

// Element of the cyclic quotient (forms: DR_cyc; polyvectors: Pol_cyc).
// Keys are canonical representatives.
struct CycElem {
    std::shared_ptr<const Space> sp;
    std::map<Word, Rat> terms;

    CycElem() = default;
    explicit CycElem(std::shared_ptr<const Space> s) : sp(std::move(s)) {}

    bool is_zero() const { return terms.empty(); }
    void add_necklace(const Word& w, const Rat& c);  // canonicalizes

    CycElem& operator+=(const CycElem& o);
    CycElem operator+(const CycElem& o) const;
    CycElem operator-(const CycElem& o) const;
    CycElem operator-() const;
    CycElem scaled(const Rat& c) const;
    bool operator==(const CycElem& o) const;

    Elem lift() const;  // canonical representatives as a plain element
    std::optional<int> chain_degree() const;
    std::optional<int> weight() const;

    // Components by form/theta weight.
    std::map<int, CycElem> by_weight() const;
};

// Quotient map to the cyclic complex; kills graded commutators.
CycElem cyclic_project(const Elem& a);

// ---------------------------------------------------------------------------
// Differentials on forms

// de Rham differential: derivation with d(x) = dx, d(dx) = 0.
Elem de_rham_d(const Elem& a);

// Hochschild differential b(alpha da) = (-1)^p [alpha, a]; 0 on weight 0.
Elem hochschild_b(const Elem& a);

// Induced maps on necklaces (descend along cyclic_project).
CycElem de_rham_d(const CycElem& a);
CycElem apply_delta(const CycElem& a);

// Graded commutator [a,b] = ab - (-1)^{|a||b|} ba (sign degrees).
Elem graded_commutator(const Elem& a, const Elem& b);

// ---------------------------------------------------------------------------
// Pre-bisymplectic data

struct PreBisym {
    int shift = 0;
    std::map<int, CycElem> comps;  // weight i >= 2 -> omega_i

    static PreBisym from_cyc(int shift, const CycElem& total);
};

struct CheckLine {
    std::string what;
    bool ok = true;
    std::string residue;  // serialized nonzero residue on failure
};

struct CheckReport {
    std::string check;
    std::string mode;
    std::string verdict;  // PASS / PASS-STRICT / PASS-WITNESSED / FAIL / ERROR
    std::vector<CheckLine> lines;
    std::vector<std::string> notes;
    std::vector<std::vector<std::string>> matrix;  // optional serialized matrix

    bool passed() const { return verdict.rfind("PASS", 0) == 0; }
};

// Verifies the degree constraints and the closedness (d + delta)(sum) = 0
// componentwise: delta w_2 = 0, d w_i + delta w_{i+1} = 0, d w_N = 0.
CheckReport check_pre_bisymplectic(const PreBisym& omega);

// ---------------------------------------------------------------------------
// Morphisms and pullback

struct Morphism {
    std::shared_ptr<const Presentation> src;
    std::shared_ptr<const Presentation> tgt;
    std::vector<Elem> images;  // over the target algebra space

    static Morphism make(std::shared_ptr<const Presentation> src,
                         std::shared_ptr<const Presentation> tgt,
                         std::vector<Elem> images);  // validates
    static Morphism identity(std::shared_ptr<const Presentation> p);
    Morphism compose_after(const Morphism& inner) const;  // this o inner
};

// Pullback of forms along f: x -> f(x), dx -> d(f(x)); algebra morphism.
Elem pullback(const Morphism& f, const Elem& alpha);
CycElem pullback(const Morphism& f, const CycElem& alpha);

// Bi-isotropic check: lambda over B with D(lambda) = f^* omega componentwise.
CheckReport check_bi_isotropic(const PreBisym& omega, const Morphism& f,
                               const PreBisym& lambda);

}  // namespace ncdp
