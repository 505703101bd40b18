#include "ncdp/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace ncdp {

std::string rat_str(const Rat& q) {
    return q.get_str();
}

const char* err_name(Err k) {
    switch (k) {
        case Err::DuplicateGenerator: return "DuplicateGenerator";
        case Err::DegreeMismatch: return "DegreeMismatch";
        case Err::DifferentialNotSquareZero: return "DifferentialNotSquareZero";
        case Err::MixedPresentations: return "MixedPresentations";
        case Err::MixedAlgebras: return "MixedAlgebras";
        case Err::MixedWeights: return "MixedWeights";
        case Err::ArityMismatch: return "ArityMismatch";
        case Err::ShiftMismatch: return "ShiftMismatch";
        case Err::WeightBelowTwo: return "WeightBelowTwo";
        case Err::NotMaurerCartan: return "NotMaurerCartan";
        case Err::NotStrictlyNondegenerate: return "NotStrictlyNondegenerate";
        case Err::HigherComponentsPresent: return "HigherComponentsPresent";
        case Err::McFailure: return "McFailure";
        case Err::DegeneratePairing: return "DegeneratePairing";
        case Err::NonAssociativeStructureConstants: return "NonAssociativeStructureConstants";
        case Err::JacobiFailure: return "JacobiFailure";
        case Err::UnknownIdentifier: return "UnknownIdentifier";
        case Err::Internal: return "Internal";
    }
    return "Unknown";
}

int koszul_sign(const std::vector<int>& left, const std::vector<int>& right) {
    long l = 0, r = 0;
    for (int d : left) l += d;
    for (int d : right) r += d;
    return koszul_sign(l, r);
}

// ---------------------------------------------------------------------------
// Elem

void Elem::add_term(const Word& w, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
        terms.emplace(w, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

Elem& Elem::operator+=(const Elem& o) {
    for (const auto& [w, c] : o.terms) add_term(w, c);
    return *this;
}

Elem& Elem::operator-=(const Elem& o) {
    for (const auto& [w, c] : o.terms) add_term(w, -c);
    return *this;
}

Elem Elem::operator+(const Elem& o) const {
    Elem r = *this;
    r += o;
    return r;
}

Elem Elem::operator-(const Elem& o) const {
    Elem r = *this;
    r -= o;
    return r;
}

Elem Elem::operator-() const {
    Elem r(sp);
    for (const auto& [w, c] : terms) r.terms.emplace(w, -c);
    return r;
}

Elem Elem::scaled(const Rat& c) const {
    Elem r(sp);
    if (c == 0) return r;
    for (const auto& [w, q] : terms) r.terms.emplace(w, q * c);
    return r;
}

Elem Elem::operator*(const Elem& o) const {
    require_same_space(*this, o);
    Elem r(sp);
    for (const auto& [u, cu] : terms) {
        for (const auto& [v, cv] : o.terms) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            r.add_term(w, cu * cv);
        }
    }
    return r;
}

bool Elem::operator==(const Elem& o) const {
    return terms == o.terms;
}

std::optional<int> Elem::chain_degree() const {
    std::optional<int> d;
    for (const auto& [w, c] : terms) {
        int wd = sp->chain_deg(w);
        if (d && *d != wd) return std::nullopt;
        d = wd;
    }
    return terms.empty() ? std::optional<int>(0) : d;
}

std::optional<int> Elem::form_weight() const {
    std::optional<int> d;
    for (const auto& [w, c] : terms) {
        int wd = sp->weight(w);
        if (d && *d != wd) return std::nullopt;
        d = wd;
    }
    return terms.empty() ? std::optional<int>(0) : d;
}

// ---------------------------------------------------------------------------
// Tensor

void Tensor::add_term(const std::vector<Word>& f, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(f);
    if (it == terms.end()) {
        terms.emplace(f, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

Tensor& Tensor::operator+=(const Tensor& o) {
    for (const auto& [f, c] : o.terms) add_term(f, c);
    return *this;
}

Tensor Tensor::operator+(const Tensor& o) const {
    Tensor r = *this;
    r += o;
    return r;
}

Tensor Tensor::operator-(const Tensor& o) const {
    Tensor r = *this;
    for (const auto& [f, c] : o.terms) r.add_term(f, -c);
    return r;
}

Tensor Tensor::operator-() const {
    Tensor r(sp, arity);
    for (const auto& [f, c] : terms) r.terms.emplace(f, -c);
    return r;
}

Tensor Tensor::scaled(const Rat& c) const {
    Tensor r(sp, arity);
    if (c == 0) return r;
    for (const auto& [f, q] : terms) r.terms.emplace(f, q * c);
    return r;
}

bool Tensor::operator==(const Tensor& o) const {
    return arity == o.arity && terms == o.terms;
}

Tensor Tensor::left_mul(const Word& w) const {
    Tensor r(sp, arity);
    for (const auto& [f, c] : terms) {
        auto g = f;
        Word nw = w;
        nw.insert(nw.end(), g[0].begin(), g[0].end());
        g[0] = nw;
        r.add_term(g, c);
    }
    return r;
}

Tensor Tensor::right_mul(const Word& w) const {
    Tensor r(sp, arity);
    for (const auto& [f, c] : terms) {
        auto g = f;
        g[arity - 1].insert(g[arity - 1].end(), w.begin(), w.end());
        r.add_term(g, c);
    }
    return r;
}

Tensor Tensor::rotate_fwd() const {
    Tensor r(sp, arity);
    for (const auto& [f, c] : terms) {
        int last = sp->sign_deg(f[arity - 1]);
        int rest = 0;
        for (int i = 0; i + 1 < arity; ++i) rest += sp->sign_deg(f[i]);
        std::vector<Word> g;
        g.reserve(arity);
        g.push_back(f[arity - 1]);
        for (int i = 0; i + 1 < arity; ++i) g.push_back(f[i]);
        r.add_term(g, c * koszul_sign(last, rest));
    }
    return r;
}

Tensor Tensor::rotate_back() const {
    Tensor r(sp, arity);
    for (const auto& [f, c] : terms) {
        int first = sp->sign_deg(f[0]);
        int rest = 0;
        for (int i = 1; i < arity; ++i) rest += sp->sign_deg(f[i]);
        std::vector<Word> g;
        g.reserve(arity);
        for (int i = 1; i < arity; ++i) g.push_back(f[i]);
        g.push_back(f[0]);
        r.add_term(g, c * koszul_sign(first, rest));
    }
    return r;
}

Tensor Tensor::swap2() const {
    if (arity != 2) throw Error(Err::ArityMismatch, "swap2 requires arity 2");
    return rotate_fwd();
}

Tensor Tensor::glue(int i) const {
    Tensor r(sp, arity - 1);
    for (const auto& [f, c] : terms) {
        std::vector<Word> g;
        g.reserve(arity - 1);
        for (int j = 0; j < arity; ++j) {
            if (j == i + 1) {
                g.back().insert(g.back().end(), f[j].begin(), f[j].end());
            } else {
                g.push_back(f[j]);
            }
        }
        r.add_term(g, c);
    }
    return r;
}

Elem Tensor::collapse() const {
    Elem r(sp);
    for (const auto& [f, c] : terms) {
        Word w;
        for (const auto& part : f) w.insert(w.end(), part.begin(), part.end());
        r.add_term(w, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Space / Presentation

int Presentation::find(const std::string& name) const {
    for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return (int)i;
    return -1;
}

int Space::chain_deg(const Word& w) const {
    int d = 0;
    for (int s : w) d += syms[s].chain_deg;
    return d;
}

int Space::sign_deg(const Word& w) const {
    int d = 0;
    for (int s : w) d += syms[s].sign_deg;
    return d;
}

int Space::weight(const Word& w) const {
    int d = 0;
    for (int s : w) d += (syms[s].kind != SymKind::X) ? 1 : 0;
    return d;
}

std::shared_ptr<const Space> Space::algebra(std::shared_ptr<const Presentation> p) {
    if (p->alg_space) return p->alg_space;
    auto sp = std::make_shared<Space>();
    sp->kind = Kind::Algebra;
    sp->pres = p;
    for (size_t i = 0; i < p->gens.size(); ++i)
        sp->syms.push_back({p->gens[i].name, p->gens[i].degree, p->gens[i].degree,
                            SymKind::X, (int)i});
    return sp;
}

std::shared_ptr<const Space> Space::forms(std::shared_ptr<const Presentation> p) {
    auto sp = std::make_shared<Space>();
    sp->kind = Kind::Forms;
    sp->pres = p;
    for (size_t i = 0; i < p->gens.size(); ++i)
        sp->syms.push_back({p->gens[i].name, p->gens[i].degree, p->gens[i].degree,
                            SymKind::X, (int)i});
    for (size_t i = 0; i < p->gens.size(); ++i)
        sp->syms.push_back({"d(" + p->gens[i].name + ")", p->gens[i].degree,
                            p->gens[i].degree + 1, SymKind::DX, (int)i});
    return sp;
}

void require_same_space(const Elem& a, const Elem& b, Err kind) {
    if (!a.sp || !b.sp || !a.sp->same_as(*b.sp))
        throw Error(kind, "elements over different spaces");
}

Elem make_unit(std::shared_ptr<const Space> sp) {
    Elem e(std::move(sp));
    e.terms.emplace(Word{}, Rat(1));
    return e;
}

Elem make_gen(std::shared_ptr<const Space> sp, int sym_id) {
    Elem e(std::move(sp));
    e.terms.emplace(Word{sym_id}, Rat(1));
    return e;
}

Elem make_word(std::shared_ptr<const Space> sp, const Word& w, const Rat& c) {
    Elem e(std::move(sp));
    e.add_term(w, c);
    return e;
}

// ---------------------------------------------------------------------------
// Differential

Elem extend_derivation(const Elem& a, int op_sign_deg,
                       const std::function<Elem(int sym)>& f) {
    Elem out(a.sp);
    for (const auto& [w, c] : a.terms) {
        int prefix_deg = 0;
        for (size_t k = 0; k < w.size(); ++k) {
            Elem img = f(w[k]);
            if (!img.is_zero()) {
                int sgn = koszul_sign(op_sign_deg, prefix_deg);
                Word pre(w.begin(), w.begin() + k);
                Word post(w.begin() + k + 1, w.end());
                for (const auto& [m, cm] : img.terms) {
                    Word nw = pre;
                    nw.insert(nw.end(), m.begin(), m.end());
                    nw.insert(nw.end(), post.begin(), post.end());
                    out.add_term(nw, c * cm * sgn);
                }
            }
            prefix_deg += a.sp->syms[w[k]].sign_deg;
        }
    }
    return out;
}

Elem apply_delta(const Elem& a) {
    const auto sp = a.sp;
    const auto& pres = *sp->pres;
    return extend_derivation(a, 1, [&](int sym) -> Elem {
        const auto& si = sp->syms[sym];
        switch (si.kind) {
            case SymKind::X: {
                const Elem& dg = pres.diff[si.base];
                Elem out(sp);
                // re-key the algebra-space words into this space (x ids agree)
                for (const auto& [w, c] : dg.terms) out.add_term(w, c);
                return out;
            }
            case SymKind::DX: {
                // delta(dx) = -d(delta x): total-degree conventions make
                // d and delta anticommute, so (d + delta)^2 = 0.
                const Elem& dg = pres.diff[si.base];
                Elem out(sp);
                for (const auto& [w, c] : dg.terms) {
                    // d of an algebra word, as a Forms element
                    int prefix_deg = 0;
                    for (size_t k = 0; k < w.size(); ++k) {
                        Word nw(w.begin(), w.begin() + k);
                        nw.push_back(sp->dx_id(sp->syms[w[k]].base));
                        nw.insert(nw.end(), w.begin() + k + 1, w.end());
                        out.add_term(nw, -c * koszul_sign(1, prefix_deg));
                        prefix_deg += sp->syms[w[k]].sign_deg;
                    }
                }
                return out;
            }
            case SymKind::Theta:
                return sp->theta_diff[si.base];
        }
        return Elem(sp);
    });
}

// ---------------------------------------------------------------------------
// make_algebra

static std::shared_ptr<const Presentation> finish_algebra(
    std::shared_ptr<Presentation> pres) {
    auto sp = Space::algebra(pres);
    pres->alg_space = sp;

    // degree and square-zero validation
    for (size_t i = 0; i < pres->gens.size(); ++i) {
        Elem d = pres->diff[i];
        d.sp = sp;
        pres->diff[i] = d;
        if (!d.is_zero()) {
            auto deg = d.chain_degree();
            if (!deg || *deg != pres->gens[i].degree - 1)
                throw Error(Err::DegreeMismatch,
                            "differential of '" + pres->gens[i].name +
                                "' must be homogeneous of degree " +
                                std::to_string(pres->gens[i].degree - 1));
        }
    }
    for (size_t i = 0; i < pres->gens.size(); ++i) {
        Elem dd = apply_delta(pres->diff[i]);
        if (!dd.is_zero())
            throw Error(Err::DifferentialNotSquareZero,
                        "delta^2 != 0 on generator '" + pres->gens[i].name + "'");
    }
    return pres;
}

std::shared_ptr<const Presentation> make_algebra_raw(
    const std::vector<Generator>& gens,
    const std::vector<std::map<Word, Rat>>& diff_terms) {
    auto pres = std::make_shared<Presentation>();
    for (const auto& g : gens) {
        if (pres->find(g.name) >= 0)
            throw Error(Err::DuplicateGenerator, "duplicate generator '" + g.name + "'");
        pres->gens.push_back(g);
    }
    auto sp0 = Space::algebra(pres);
    for (size_t i = 0; i < gens.size(); ++i) {
        Elem e(sp0);
        if (i < diff_terms.size())
            for (const auto& [w, c] : diff_terms[i]) e.add_term(w, c);
        pres->diff.push_back(e);
    }
    return finish_algebra(pres);
}

std::shared_ptr<const Presentation> make_algebra(
    const std::vector<Generator>& gens,
    const std::map<std::string, Elem>& differential) {
    std::vector<std::map<Word, Rat>> diff_terms(gens.size());
    std::map<std::string, int> index;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (index.count(gens[i].name))
            throw Error(Err::DuplicateGenerator, "duplicate generator '" + gens[i].name + "'");
        index[gens[i].name] = (int)i;
    }
    for (const auto& [name, e] : differential) {
        auto it = index.find(name);
        if (it == index.end())
            throw Error(Err::UnknownIdentifier, "differential on unknown generator '" + name + "'");
        diff_terms[it->second] = e.terms;
    }
    return make_algebra_raw(gens, diff_terms);
}

}  // namespace ncdp
