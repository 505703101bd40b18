#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncdp {

// Exact rational scalar. Canonical form (reduced, positive denominator) is
// maintained by gmp's mpq_class.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    Rat q(n, d);
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q);

enum class Err {
    DuplicateGenerator,
    DegreeMismatch,
    DifferentialNotSquareZero,
    MixedPresentations,
    MixedAlgebras,
    MixedWeights,
    ArityMismatch,
    ShiftMismatch,
    WeightBelowTwo,
    NotMaurerCartan,
    NotStrictlyNondegenerate,
    HigherComponentsPresent,
    McFailure,
    DegeneratePairing,
    NonAssociativeStructureConstants,
    JacobiFailure,
    UnknownIdentifier,
    Internal,
};

struct Error : std::runtime_error {
    Err kind;
    Error(Err k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

const char* err_name(Err k);

// Koszul sign for moving a block of homogeneous items past another block:
// (-1)^{sum(left) * sum(right)}. The single sign authority of the engine.
inline int koszul_sign(long left_deg, long right_deg) {
    return ((left_deg & 1) && (right_deg & 1)) ? -1 : 1;
}

int koszul_sign(const std::vector<int>& left, const std::vector<int>& right);

enum class SymKind { X, DX, Theta };

struct SymbolInfo {
    std::string name;  // rendered name: "x", "d(x)", "theta(x)"
    int chain_deg;     // homological chain degree
    int sign_deg;      // degree fed to koszul_sign (chain degree + form weight)
    SymKind kind;
    int base;          // index of the underlying algebra generator
};

// A word in a free algebra: sequence of symbol ids. Empty word = unit.
using Word = std::vector<int>;

struct Generator {
    std::string name;
    int degree;
};

struct Space;
struct Presentation;

// Element of a free graded algebra: finitely supported Word -> Rat map.
// Stored sparse with no zero coefficients; std::map keeps iteration (and
// hence serialization) in lexicographic word order.
struct Elem {
    std::shared_ptr<const Space> sp;
    std::map<Word, Rat> terms;

    Elem() = default;
    explicit Elem(std::shared_ptr<const Space> s) : sp(std::move(s)) {}

    bool is_zero() const { return terms.empty(); }
    void add_term(const Word& w, const Rat& c);

    Elem& operator+=(const Elem& o);
    Elem& operator-=(const Elem& o);
    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator*(const Elem& o) const;  // concatenation product
    Elem operator-() const;
    Elem scaled(const Rat& c) const;
    bool operator==(const Elem& o) const;

    // Chain degree if homogeneous, nullopt otherwise (0 for the zero elem).
    std::optional<int> chain_degree() const;
    std::optional<int> form_weight() const;  // # of DX/Theta symbols
};

// Element of A^{\otimes k}: finitely supported (k-tuple of words) -> Rat.
struct Tensor {
    std::shared_ptr<const Space> sp;
    int arity = 1;
    std::map<std::vector<Word>, Rat> terms;

    Tensor() = default;
    Tensor(std::shared_ptr<const Space> s, int k) : sp(std::move(s)), arity(k) {}

    bool is_zero() const { return terms.empty(); }
    void add_term(const std::vector<Word>& f, const Rat& c);

    Tensor& operator+=(const Tensor& o);
    Tensor operator+(const Tensor& o) const;
    Tensor operator-(const Tensor& o) const;
    Tensor operator-() const;
    Tensor scaled(const Rat& c) const;
    bool operator==(const Tensor& o) const;

    Tensor left_mul(const Word& w) const;   // outer action on first factor
    Tensor right_mul(const Word& w) const;  // outer action on last factor

    // Move the last factor to the front, with the Koszul sign of carrying it
    // past the others. rotate_back is the inverse.
    Tensor rotate_fwd() const;
    Tensor rotate_back() const;
    Tensor swap2() const;  // arity-2 flip u (x) v -> +-(v (x) u)

    // Multiply the factors at positions i and i+1 into one (Loday collapse).
    Tensor glue(int i) const;
    Elem collapse() const;  // glue everything down to arity 1
};

// A free Z-graded associative presentation: named generators with degrees
// and a differential given on generators (validated square-zero).
struct Presentation {
    std::vector<Generator> gens;
    std::vector<Elem> diff;  // over the algebra space of this presentation
    std::shared_ptr<const Space> alg_space;

    int find(const std::string& name) const;  // -1 if absent
};

// A symbol space over a presentation: the plain algebra (x only), the form
// algebra (x, dx), or a shifted polyvector algebra (x, theta).
struct Space {
    enum class Kind { Algebra, Forms, Poly };
    Kind kind = Kind::Algebra;
    std::shared_ptr<const Presentation> pres;
    int shift = 0;  // Poly only
    std::vector<SymbolInfo> syms;

    // Poly only: differential on theta symbols, derived from the bracket
    // (see poly.cpp). Index = generator index.
    std::vector<Elem> theta_diff;

    int num_gens() const { return (int)pres->gens.size(); }
    int x_id(int gen) const { return gen; }
    int dx_id(int gen) const { return num_gens() + gen; }
    int theta_id(int gen) const { return num_gens() + gen; }
    bool is_x(int sym) const { return syms[sym].kind == SymKind::X; }

    int chain_deg(const Word& w) const;
    int sign_deg(const Word& w) const;
    int weight(const Word& w) const;  // # of DX/Theta symbols

    bool same_as(const Space& o) const {
        return kind == o.kind && pres == o.pres && shift == o.shift;
    }

    static std::shared_ptr<const Space> algebra(std::shared_ptr<const Presentation> p);
    static std::shared_ptr<const Space> forms(std::shared_ptr<const Presentation> p);
    static std::shared_ptr<const Space> poly(std::shared_ptr<const Presentation> p, int shift);
};

void require_same_space(const Elem& a, const Elem& b, Err kind = Err::MixedPresentations);

// make_algebra: validates name uniqueness, degree drop, and delta^2 = 0 on
// every generator (by full expansion).
std::shared_ptr<const Presentation> make_algebra(
    const std::vector<Generator>& gens,
    const std::map<std::string, Elem>& differential);

// Overload taking differential elements over a scratch presentation with the
// same generators (used by the DSL, which parses expressions before the
// final validated presentation exists).
std::shared_ptr<const Presentation> make_algebra_raw(
    const std::vector<Generator>& gens,
    const std::vector<std::map<Word, Rat>>& diff_terms);

Elem make_unit(std::shared_ptr<const Space> sp);
Elem make_gen(std::shared_ptr<const Space> sp, int sym_id);
Elem make_word(std::shared_ptr<const Space> sp, const Word& w, const Rat& c = Rat(1));

// Extends the generator differential as a degree -1 derivation (Koszul signs
// from sign degrees). Works on Algebra, Forms and Poly spaces.
Elem apply_delta(const Elem& a);

// Derivation extension helper: applies `f` to each symbol occurrence with
// the sign (-1)^{op_deg * sign_deg(prefix)}.
Elem extend_derivation(const Elem& a, int op_sign_deg,
                       const std::function<Elem(int sym)>& f);

}  // namespace ncdp
