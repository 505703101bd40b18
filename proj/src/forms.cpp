#include "ncdp/forms.hpp"

#include <algorithm>

#include "ncdp/serialize.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// Necklace canonicalization

std::optional<std::pair<Word, int>> necklace_canon(const Space& sp, const Word& w) {
    if (w.empty()) return std::make_pair(w, 1);
    Word cur = w;
    int sign = 1;
    int total = sp.sign_deg(w);
    std::map<Word, int> seen;
    seen.emplace(cur, sign);
    for (size_t r = 1; r < w.size(); ++r) {
        int last = sp.syms[cur.back()].sign_deg;
        sign *= koszul_sign(last, total - last);
        std::rotate(cur.rbegin(), cur.rbegin() + 1, cur.rend());
        auto [it, fresh] = seen.emplace(cur, sign);
        if (!fresh && it->second != sign) return std::nullopt;  // e.g. dx.dx
    }
    const auto& [best, best_sign] = *seen.begin();
    return std::make_pair(best, best_sign);
}

void CycElem::add_necklace(const Word& w, const Rat& c) {
    if (c == 0) return;
    auto canon = necklace_canon(*sp, w);
    if (!canon) return;
    auto it = terms.find(canon->first);
    Rat add = c * canon->second;
    if (it == terms.end()) {
        terms.emplace(canon->first, add);
    } else {
        it->second += add;
        if (it->second == 0) terms.erase(it);
    }
}

CycElem& CycElem::operator+=(const CycElem& o) {
    for (const auto& [w, c] : o.terms) add_necklace(w, c);
    return *this;
}

CycElem CycElem::operator+(const CycElem& o) const {
    CycElem r = *this;
    r += o;
    return r;
}

CycElem CycElem::operator-(const CycElem& o) const {
    CycElem r = *this;
    for (const auto& [w, c] : o.terms) r.add_necklace(w, -c);
    return r;
}

CycElem CycElem::operator-() const {
    CycElem r(sp);
    for (const auto& [w, c] : terms) r.terms.emplace(w, -c);
    return r;
}

CycElem CycElem::scaled(const Rat& c) const {
    CycElem r(sp);
    if (c == 0) return r;
    for (const auto& [w, q] : terms) r.terms.emplace(w, q * c);
    return r;
}

bool CycElem::operator==(const CycElem& o) const {
    return terms == o.terms;
}

Elem CycElem::lift() const {
    Elem e(sp);
    for (const auto& [w, c] : terms) e.add_term(w, c);
    return e;
}

std::optional<int> CycElem::chain_degree() const {
    return lift().chain_degree();
}

std::optional<int> CycElem::weight() const {
    return lift().form_weight();
}

std::map<int, CycElem> CycElem::by_weight() const {
    std::map<int, CycElem> out;
    for (const auto& [w, c] : terms) {
        int p = sp->weight(w);
        auto it = out.find(p);
        if (it == out.end()) {
            CycElem e(sp);
            e.terms.emplace(w, c);
            out.emplace(p, std::move(e));
        } else {
            it->second.terms.emplace(w, c);
        }
    }
    return out;
}

CycElem cyclic_project(const Elem& a) {
    CycElem r(a.sp);
    for (const auto& [w, c] : a.terms) r.add_necklace(w, c);
    return r;
}

// ---------------------------------------------------------------------------
// Differentials

Elem de_rham_d(const Elem& a) {
    const auto sp = a.sp;
    return extend_derivation(a, 1, [&](int sym) -> Elem {
        const auto& si = sp->syms[sym];
        if (si.kind == SymKind::X && sp->kind == Space::Kind::Forms)
            return make_gen(sp, sp->dx_id(si.base));
        return Elem(sp);  // d(dx) = 0
    });
}

Elem graded_commutator(const Elem& a, const Elem& b) {
    require_same_space(a, b);
    Elem r(a.sp);
    for (const auto& [u, cu] : a.terms) {
        for (const auto& [v, cv] : b.terms) {
            Word uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            Word vu = v;
            vu.insert(vu.end(), u.begin(), u.end());
            r.add_term(uv, cu * cv);
            r.add_term(vu, -cu * cv * koszul_sign(a.sp->sign_deg(u), a.sp->sign_deg(v)));
        }
    }
    return r;
}

// b on a single word; recursion shrinks the trailing x-block.
static Elem hochschild_b_word(const std::shared_ptr<const Space>& sp, const Word& w,
                              const Rat& coeff) {
    Elem out(sp);
    if (coeff == 0) return out;
    int p = sp->weight(w);
    if (p == 0) return out;
    size_t last_d = 0;
    for (size_t k = 0; k < w.size(); ++k)
        if (sp->syms[w[k]].kind == SymKind::DX) last_d = k;
    Word alpha(w.begin(), w.begin() + last_d);
    int g = w[last_d];
    Word tail(w.begin() + last_d + 1, w.end());  // x-symbols only

    // w = alpha . d(g) . tail = alpha . d(g tail) - (-1)^{|g|} alpha g d(tail)
    // b(alpha . d(a)) = (-1)^p [alpha, a]
    int psign = (p & 1) ? -1 : 1;
    Word a = {sp->x_id(sp->syms[g].base)};
    a.insert(a.end(), tail.begin(), tail.end());
    {
        Word uv = alpha;
        uv.insert(uv.end(), a.begin(), a.end());
        Word vu = a;
        vu.insert(vu.end(), alpha.begin(), alpha.end());
        out.add_term(uv, coeff * psign);
        out.add_term(vu, -coeff * psign *
                             koszul_sign(sp->sign_deg(alpha), sp->sign_deg(a)));
    }
    if (!tail.empty()) {
        // subtract b of (-1)^{|g|} alpha g d(tail), Leibniz-expanding d(tail)
        int gsign = koszul_sign(sp->syms[g].chain_deg, 1);
        Word head = alpha;
        head.push_back(sp->x_id(sp->syms[g].base));
        int prefix_deg = 0;
        for (size_t k = 0; k < tail.size(); ++k) {
            Word nw = head;
            nw.insert(nw.end(), tail.begin(), tail.begin() + k);
            nw.push_back(sp->dx_id(sp->syms[tail[k]].base));
            nw.insert(nw.end(), tail.begin() + k + 1, tail.end());
            int s = koszul_sign(1, prefix_deg);
            out += hochschild_b_word(sp, nw, -coeff * gsign * s);
            prefix_deg += sp->syms[tail[k]].sign_deg;
        }
    }
    return out;
}

Elem hochschild_b(const Elem& a) {
    Elem out(a.sp);
    for (const auto& [w, c] : a.terms) out += hochschild_b_word(a.sp, w, c);
    return out;
}

CycElem de_rham_d(const CycElem& a) {
    return cyclic_project(de_rham_d(a.lift()));
}

CycElem apply_delta(const CycElem& a) {
    return cyclic_project(apply_delta(a.lift()));
}

// ---------------------------------------------------------------------------
// Pre-bisymplectic check

PreBisym PreBisym::from_cyc(int shift, const CycElem& total) {
    PreBisym out;
    out.shift = shift;
    out.comps = total.by_weight();
    return out;
}

CheckReport check_pre_bisymplectic(const PreBisym& omega) {
    CheckReport rep;
    rep.check = "prebisymplectic";
    rep.verdict = "PASS";
    if (omega.comps.empty()) {
        rep.notes.push_back("empty datum");
        return rep;
    }
    const auto sp = omega.comps.begin()->second.sp;
    int N = 0;
    for (const auto& [i, wi] : omega.comps) {
        N = std::max(N, i);
        CheckLine line;
        line.what = "degree(omega_" + std::to_string(i) + ")";
        if (i < 2) {
            line.ok = false;
            line.residue = "component weight < 2";
        } else {
            auto deg = wi.chain_degree();
            auto wt = wi.weight();
            line.ok = wi.is_zero() ||
                      (deg && *deg == i - omega.shift - 2 && wt && *wt == i);
            if (!line.ok) line.residue = "expected chain degree " +
                                         std::to_string(i - omega.shift - 2);
        }
        if (!line.ok) rep.verdict = "FAIL";
        rep.lines.push_back(line);
    }
    // closedness: components of (d + delta)(sum w_i) per weight
    for (int i = 2; i <= N + 1; ++i) {
        CycElem res(sp);
        auto it = omega.comps.find(i);
        if (it != omega.comps.end()) res += apply_delta(it->second);
        auto prev = omega.comps.find(i - 1);
        if (prev != omega.comps.end()) res += de_rham_d(prev->second);
        CheckLine line;
        line.what = (i <= N) ? ("d omega_" + std::to_string(i - 1) + " + delta omega_" +
                                std::to_string(i))
                             : ("d omega_" + std::to_string(N));
        line.ok = res.is_zero();
        if (!line.ok) {
            line.residue = cyc_str(res);
            rep.verdict = "FAIL";
        }
        rep.lines.push_back(line);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Morphisms

Morphism Morphism::make(std::shared_ptr<const Presentation> src,
                        std::shared_ptr<const Presentation> tgt,
                        std::vector<Elem> images) {
    if (images.size() != src->gens.size())
        throw Error(Err::DegreeMismatch, "morphism must map every generator");
    Morphism f{std::move(src), std::move(tgt), std::move(images)};
    auto tsp = Space::algebra(f.tgt);
    for (size_t i = 0; i < f.src->gens.size(); ++i) {
        Elem img = f.images[i];
        img.sp = tsp;
        f.images[i] = img;
        if (!img.is_zero()) {
            auto deg = img.chain_degree();
            if (!deg || *deg != f.src->gens[i].degree)
                throw Error(Err::DegreeMismatch,
                            "morphism image of '" + f.src->gens[i].name +
                                "' has wrong degree");
        }
        // delta_tgt(f(x)) = f(delta_src(x))
        Elem lhs = apply_delta(img);
        Elem rhs(tsp);
        for (const auto& [w, c] : f.src->diff[i].terms) {
            Elem prod = make_unit(tsp);
            for (int s : w) prod = prod * f.images[f.src->alg_space->syms[s].base];
            rhs += prod.scaled(c);
        }
        if (!(lhs == rhs))
            throw Error(Err::DegreeMismatch,
                        "morphism does not intertwine differentials at '" +
                            f.src->gens[i].name + "'");
    }
    return f;
}

Morphism Morphism::identity(std::shared_ptr<const Presentation> p) {
    std::vector<Elem> images;
    auto sp = Space::algebra(p);
    for (size_t i = 0; i < p->gens.size(); ++i)
        images.push_back(make_gen(sp, (int)i));
    return Morphism{p, p, std::move(images)};
}

Morphism Morphism::compose_after(const Morphism& inner) const {
    std::vector<Elem> images;
    for (const auto& img : inner.images) images.push_back(pullback(*this, img));
    return Morphism{inner.src, tgt, std::move(images)};
}

Elem pullback(const Morphism& f, const Elem& alpha) {
    bool forms = alpha.sp->kind == Space::Kind::Forms;
    auto tsp = forms ? Space::forms(f.tgt) : Space::algebra(f.tgt);
    // images in the target form space (x ids agree between spaces)
    std::vector<Elem> ximg, dximg;
    for (const auto& img : f.images) {
        Elem e(tsp);
        for (const auto& [w, c] : img.terms) e.add_term(w, c);
        ximg.push_back(e);
        if (forms) dximg.push_back(de_rham_d(e));
    }
    Elem out(tsp);
    for (const auto& [w, c] : alpha.terms) {
        Elem prod = make_unit(tsp);
        for (int s : w) {
            const auto& si = alpha.sp->syms[s];
            prod = prod * (si.kind == SymKind::X ? ximg[si.base] : dximg[si.base]);
        }
        out += prod.scaled(c);
    }
    return out;
}

CycElem pullback(const Morphism& f, const CycElem& alpha) {
    return cyclic_project(pullback(f, alpha.lift()));
}

CheckReport check_bi_isotropic(const PreBisym& omega, const Morphism& f,
                               const PreBisym& lambda) {
    if (!lambda.comps.empty() && !omega.comps.empty() && lambda.shift != omega.shift)
        throw Error(Err::ShiftMismatch, "isotropic witness shift mismatch");
    CheckReport rep;
    rep.check = "isotropic";
    rep.verdict = "PASS";
    auto fsp = Space::forms(f.tgt);
    int N = 1;
    for (const auto& [i, c] : omega.comps) N = std::max(N, i);
    for (const auto& [i, c] : lambda.comps) N = std::max(N, i);
    for (int i = 2; i <= N + 1; ++i) {
        // residue_i = (f^* omega)_i - (d lambda_{i-1} + delta lambda_i)
        CycElem res(fsp);
        auto wi = omega.comps.find(i);
        if (wi != omega.comps.end()) res += pullback(f, wi->second);
        auto li = lambda.comps.find(i);
        if (li != lambda.comps.end()) res -= apply_delta(li->second);
        auto lp = lambda.comps.find(i - 1);
        if (lp != lambda.comps.end()) res -= de_rham_d(lp->second);
        CheckLine line;
        line.what = "weight " + std::to_string(i);
        line.ok = res.is_zero();
        if (!line.ok) {
            line.residue = cyc_str(res);
            rep.verdict = "FAIL";
        }
        rep.lines.push_back(line);
    }
    return rep;
}

}  // namespace ncdp
