#include "ncdp/poly.hpp"

#include "ncdp/serialize.hpp"

namespace ncdp {

// Antisymmetry dressing: {{P,Q}} = ds_swap_sign * swap({{Q,P}}) for
// homogeneous P, Q, with the vdB-style suspension by the bracket degree.
static int ds_swap_sign(int degP, int degQ, int shift) {
    return -koszul_sign(degP + shift + 1, degQ + shift + 1);
}

static Tensor ds_words(const std::shared_ptr<const Space>& sp, const Word& u,
                       const Word& v);

// {{u, g}} for a single symbol g.
static Tensor ds_word_gen(const std::shared_ptr<const Space>& sp, const Word& u,
                          int g) {
    const int n = sp->shift;
    if (u.size() == 1) {
        int a = u[0];
        Tensor out(sp, 2);
        const auto& sa = sp->syms[a];
        const auto& sg = sp->syms[g];
        if (sa.kind == SymKind::X && sg.kind == SymKind::Theta && sa.base == sg.base) {
            out.add_term({Word{}, Word{}}, Rat(1));
        } else if (sa.kind == SymKind::Theta && sg.kind == SymKind::X &&
                   sa.base == sg.base) {
            out.add_term({Word{}, Word{}},
                         Rat(ds_swap_sign(sg.chain_deg, sa.chain_deg, n)));
        }
        return out;
    }
    // decompose u through cyclic antisymmetry
    Tensor inner = ds_words(sp, Word{g}, u);
    int sgn = ds_swap_sign(sp->sign_deg(u), sp->syms[g].sign_deg, n);
    return inner.swap2().scaled(Rat(sgn));
}

// {{u, v}}: derivation in the last argument for the outer bimodule structure.
static Tensor ds_words(const std::shared_ptr<const Space>& sp, const Word& u,
                       const Word& v) {
    const int n = sp->shift;
    Tensor out(sp, 2);
    if (u.empty() || v.empty()) return out;
    if (v.size() == 1) return ds_word_gen(sp, u, v[0]);
    int op_deg = sp->sign_deg(u) + n + 1;
    int prefix_deg = 0;
    for (size_t k = 0; k < v.size(); ++k) {
        Tensor t = ds_word_gen(sp, u, v[k]);
        if (!t.is_zero()) {
            Word pre(v.begin(), v.begin() + k);
            Word post(v.begin() + k + 1, v.end());
            out += t.left_mul(pre).right_mul(post).scaled(
                Rat(koszul_sign(op_deg, prefix_deg)));
        }
        prefix_deg += sp->syms[v[k]].sign_deg;
    }
    return out;
}

Tensor double_schouten(const Elem& P, const Elem& Q) {
    require_same_space(P, Q, Err::MixedAlgebras);
    if (P.sp->kind != Space::Kind::Poly)
        throw Error(Err::MixedAlgebras, "double_schouten needs polyvector elements");
    Tensor out(P.sp, 2);
    for (const auto& [u, cu] : P.terms)
        for (const auto& [v, cv] : Q.terms)
            out += ds_words(P.sp, u, v).scaled(cu * cv);
    return out;
}

CycElem trace(const Elem& P) {
    return cyclic_project(P);
}

Elem smile_bracket(const CycElem& pi, const Elem& Q) {
    return double_schouten(pi.lift(), Q).collapse();
}

CycElem dgla_bracket(const CycElem& pi, const CycElem& rho) {
    if (!pi.sp->same_as(*rho.sp))
        throw Error(Err::MixedAlgebras, "dgla_bracket over different algebras");
    return cyclic_project(smile_bracket(pi, rho.lift()));
}

CycElem sigma(const CycElem& pi) {
    CycElem out(pi.sp);
    for (const auto& [w, c] : pi.terms) {
        int p = pi.sp->weight(w);
        if (p < 2)
            throw Error(Err::WeightBelowTwo,
                        "sigma needs theta-weight >= 2, found weight " +
                            std::to_string(p));
        out.terms.emplace(w, c * (p - 1));
    }
    return out;
}

Elem to_poly(const std::shared_ptr<const Space>& psp, const Elem& a) {
    if (a.sp->kind != Space::Kind::Algebra || a.sp->pres != psp->pres)
        throw Error(Err::MixedAlgebras, "to_poly needs an element of the base algebra");
    Elem out(psp);
    for (const auto& [w, c] : a.terms) out.add_term(w, c);
    return out;
}

Elem poly_to_algebra(const Elem& a) {
    auto asp = Space::algebra(a.sp->pres);
    Elem out(asp);
    for (const auto& [w, c] : a.terms) {
        if (a.sp->weight(w) != 0)
            throw Error(Err::MixedWeights, "element has theta symbols");
        out.add_term(w, c);
    }
    return out;
}

std::map<int, Elem> poly_by_weight(const Elem& P) {
    std::map<int, Elem> out;
    for (const auto& [w, c] : P.terms) {
        auto [it, fresh] = out.try_emplace(P.sp->weight(w), Elem(P.sp));
        it->second.add_term(w, c);
    }
    return out;
}

CycElem poly_hamiltonian(const std::shared_ptr<const Space>& psp) {
    const auto& pres = *psp->pres;
    Elem W(psp);
    for (int i = 0; i < psp->num_gens(); ++i) {
        int s = ((pres.gens[i].degree + psp->shift) & 1) ? -1 : 1;  // (-1)^{|x_i|+n}
        Elem term = make_gen(psp, psp->theta_id(i)) * to_poly(psp, pres.diff[i]);
        W += term.scaled(Rat(s));
    }
    return cyclic_project(W);
}

std::shared_ptr<const Space> poly_space(std::shared_ptr<const Presentation> p,
                                        int shift) {
    auto sp = std::make_shared<Space>();
    sp->kind = Space::Kind::Poly;
    sp->pres = p;
    sp->shift = shift;
    for (size_t i = 0; i < p->gens.size(); ++i)
        sp->syms.push_back({p->gens[i].name, p->gens[i].degree, p->gens[i].degree,
                            SymKind::X, (int)i});
    for (size_t i = 0; i < p->gens.size(); ++i) {
        int deg = -p->gens[i].degree - shift - 1;
        sp->syms.push_back({"theta(" + p->gens[i].name + ")", deg, deg,
                            SymKind::Theta, (int)i});
    }

    // derive the theta differential from the Hamiltonian necklace
    CycElem W = poly_hamiltonian(sp);
    for (size_t i = 0; i < p->gens.size(); ++i)
        sp->theta_diff.push_back(smile_bracket(W, make_gen(sp, sp->theta_id((int)i))));

    // canaries: {W, x}^smile must reproduce delta on A, and {W, W} = 0
    for (size_t i = 0; i < p->gens.size(); ++i) {
        Elem got = smile_bracket(W, make_gen(sp, (int)i));
        Elem want = to_poly(sp, p->diff[i]);
        if (!(got == want))
            throw Error(Err::Internal,
                        "polyvector differential does not extend delta at '" +
                            p->gens[i].name + "'");
    }
    if (!dgla_bracket(W, W).is_zero())
        throw Error(Err::Internal, "polyvector differential does not square to zero");
    return sp;
}

}  // namespace ncdp
