#include "ncdp/compat.hpp"

#include "ncdp/serialize.hpp"

namespace ncdp {

// ---------------------------------------------------------------------------
// Contraction

// i_phi for the dual of x_j: a double derivation on forms with
// i(x) = 0, i(d x_j) = 1 (x) 1; then reduced by (u (x) v) -> +- v.u.
Elem iota_partial(int gen, const Elem& form) {
    const auto sp = form.sp;
    if (sp->kind != Space::Kind::Forms)
        throw Error(Err::MixedAlgebras, "iota_partial acts on forms");
    int op_deg = sp->pres->gens[gen].degree + 1;  // parity of |dx_j|
    Elem out(sp);
    for (const auto& [w, c] : form.terms) {
        int prefix_deg = 0;
        for (size_t k = 0; k < w.size(); ++k) {
            const auto& si = sp->syms[w[k]];
            if (si.kind == SymKind::DX && si.base == gen) {
                Word u(w.begin(), w.begin() + k);
                Word v(w.begin() + k + 1, w.end());
                int sgn = koszul_sign(op_deg, prefix_deg) *
                          koszul_sign(sp->sign_deg(u), sp->sign_deg(v));
                Word vu = v;
                vu.insert(vu.end(), u.begin(), u.end());
                out.add_term(vu, c * sgn);
            }
            prefix_deg += si.sign_deg;
        }
    }
    return out;
}

// Decompose a 1-form as sum (u (x) v) . dx_i and collect A^e coefficients.
static std::vector<Tensor> one_form_coeffs(const Elem& a) {
    const auto sp = a.sp;
    auto asp = Space::algebra(sp->pres);
    int r = (int)sp->pres->gens.size();
    std::vector<Tensor> out(r, Tensor(asp, 2));
    for (const auto& [w, c] : a.terms) {
        int pos = -1;
        for (size_t k = 0; k < w.size(); ++k)
            if (sp->syms[w[k]].kind == SymKind::DX) {
                if (pos >= 0) throw Error(Err::Internal, "not a 1-form");
                pos = (int)k;
            }
        if (pos < 0) throw Error(Err::Internal, "not a 1-form");
        Word u(w.begin(), w.begin() + pos);
        Word v(w.begin() + pos + 1, w.end());
        out[sp->syms[w[pos]].base].add_term({u, v}, c);
    }
    return out;
}

std::vector<std::vector<Tensor>> sharp_matrix(const CycElem& omega2) {
    auto fsp = omega2.sp;
    if (fsp->kind != Space::Kind::Forms)
        throw Error(Err::MixedAlgebras, "sharp_matrix acts on cyclic forms");
    int r = (int)fsp->pres->gens.size();
    auto asp = Space::algebra(fsp->pres);
    std::vector<std::vector<Tensor>> m(r, std::vector<Tensor>(r, Tensor(asp, 2)));
    Elem rep = omega2.lift();
    for (int j = 0; j < r; ++j) {
        auto coeffs = one_form_coeffs(iota_partial(j, rep));
        for (int i = 0; i < r; ++i) m[i][j] = coeffs[i];
    }
    return m;
}

CheckReport form_nondeg_check(const PreBisym& omega) {
    CheckReport rep;
    rep.check = "nondeg-form";
    auto it = omega.comps.find(2);
    if (it == omega.comps.end() || it->second.is_zero()) {
        rep.mode = "strict";
        rep.verdict = "FAIL";
        rep.notes.push_back("omega_2 component is zero");
        return rep;
    }
    auto m = sharp_matrix(it->second);
    auto strict = strict_matrix(m);
    RatMat q = strict ? *strict : augmented_matrix(m);
    rep.mode = strict ? "strict" : "fiberwise";
    for (const auto& row : m) {
        std::vector<std::string> line;
        for (const auto& e : row) line.push_back(tensor_str(e));
        rep.matrix.push_back(line);
    }
    rep.verdict = rat_inverse(q) ? "PASS" : "FAIL";
    if (rep.verdict == "FAIL") rep.notes.push_back(rep.mode + " matrix is singular");
    return rep;
}

// ---------------------------------------------------------------------------
// mu / nu

Elem mu(const Elem& alpha, const CycElem& Pi) {
    const auto fsp = alpha.sp;
    const auto psp = Pi.sp;
    if (psp->kind != Space::Kind::Poly || fsp->pres != psp->pres)
        throw Error(Err::MixedAlgebras, "mu needs forms and polyvectors over one algebra");
    std::vector<Elem> dximg;
    for (int i = 0; i < (int)fsp->pres->gens.size(); ++i)
        dximg.push_back(smile_bracket(Pi, make_gen(psp, psp->x_id(i))));
    Elem out(psp);
    for (const auto& [w, c] : alpha.terms) {
        Elem prod = make_unit(psp);
        for (int s : w) {
            const auto& si = fsp->syms[s];
            prod = (si.kind == SymKind::X) ? prod * make_gen(psp, psp->x_id(si.base))
                                           : prod * dximg[si.base];
        }
        out += prod.scaled(c);
    }
    return out;
}

CycElem mu_cyc(const CycElem& alpha, const CycElem& Pi) {
    return cyclic_project(mu(alpha.lift(), Pi));
}

Elem nu(const Elem& alpha, const CycElem& Pi, const CycElem& b) {
    const auto fsp = alpha.sp;
    const auto psp = Pi.sp;
    if (psp->kind != Space::Kind::Poly || fsp->pres != psp->pres ||
        !psp->same_as(*b.sp))
        throw Error(Err::MixedAlgebras, "nu needs matching spaces");
    auto bparts = poly_by_weight(b.lift());  // split by chain degree below
    std::vector<Elem> dximg, nuimg_all;
    for (int i = 0; i < (int)fsp->pres->gens.size(); ++i) {
        dximg.push_back(smile_bracket(Pi, make_gen(psp, psp->x_id(i))));
        nuimg_all.push_back(smile_bracket(b, make_gen(psp, psp->x_id(i))));
    }
    // epsilon carries |Pi| - |b|; split b into homogeneous chain pieces
    std::map<int, std::vector<Elem>> nuimg_by_deg;
    {
        std::map<int, Elem> bdeg;
        for (const auto& [w, c] : b.terms) {
            auto [it, fresh] = bdeg.try_emplace(psp->chain_deg(w), Elem(psp));
            it->second.add_term(w, c);
        }
        for (const auto& [d, part] : bdeg) {
            std::vector<Elem> imgs;
            CycElem pc(psp);
            pc.terms = part.terms;
            for (int i = 0; i < (int)fsp->pres->gens.size(); ++i)
                imgs.push_back(smile_bracket(pc, make_gen(psp, psp->x_id(i))));
            nuimg_by_deg.emplace(d, std::move(imgs));
        }
    }
    int pi_deg = -psp->shift - 2;  // chain degree of a shift-n structure
    Elem out(psp);
    for (const auto& [w, c] : alpha.terms) {
        for (size_t k = 0; k < w.size(); ++k) {
            const auto& si = fsp->syms[w[k]];
            if (si.kind != SymKind::DX) continue;
            // suffix sign-degree parity survives mu
            int suffix_deg = 0;
            for (size_t j = k + 1; j < w.size(); ++j)
                suffix_deg += fsp->syms[w[j]].sign_deg;
            Elem pre = make_unit(psp);
            for (size_t j = 0; j < k; ++j) {
                const auto& sj = fsp->syms[w[j]];
                pre = (sj.kind == SymKind::X) ? pre * make_gen(psp, psp->x_id(sj.base))
                                              : pre * dximg[sj.base];
            }
            Elem post = make_unit(psp);
            for (size_t j = k + 1; j < w.size(); ++j) {
                const auto& sj = fsp->syms[w[j]];
                post = (sj.kind == SymKind::X) ? post * make_gen(psp, psp->x_id(sj.base))
                                               : post * dximg[sj.base];
            }
            for (const auto& [bd, imgs] : nuimg_by_deg) {
                int eps_deg = pi_deg - bd;
                int sgn = koszul_sign(eps_deg, suffix_deg);
                out += (pre * imgs[si.base] * post).scaled(c * sgn);
            }
        }
    }
    return out;
}

CycElem kappa(const CycElem& Pi) {
    return apply_delta(Pi) + dgla_bracket(Pi, Pi).scaled(Rat(1, 2));
}

CheckReport validate_key_identities(const Elem& omega, const CycElem& Pi) {
    CheckReport rep;
    rep.check = "keyidentities";
    rep.verdict = "PASS";
    CycElem pipi = dgla_bracket(Pi, Pi);
    CycElem kap = kappa(Pi);

    Elem mu_w = mu(omega, Pi);
    {
        Elem lhs = smile_bracket(Pi, mu_w);
        Elem rhs = mu(de_rham_d(omega), Pi) + nu(omega, Pi, pipi).scaled(Rat(1, 2));
        Elem res = lhs - rhs;
        CheckLine line;
        line.what = "{pi, mu(w,pi)}^sm = mu(dw,pi) + 1/2 nu(w,pi,{pi,pi})";
        line.ok = res.is_zero();
        if (!line.ok) {
            line.residue = elem_str(res);
            rep.verdict = "FAIL";
        }
        rep.lines.push_back(line);
    }
    {
        Elem lhs = apply_delta(mu_w) + smile_bracket(Pi, mu_w);
        Elem Dw = de_rham_d(omega) + apply_delta(omega);
        Elem rhs = mu(Dw, Pi) + nu(omega, Pi, kap);
        Elem res = lhs - rhs;
        CheckLine line;
        line.what = "delta_pi mu(w,pi) = mu(Dw,pi) + nu(w,pi,kappa(pi))";
        line.ok = res.is_zero();
        if (!line.ok) {
            line.residue = elem_str(res);
            rep.verdict = "FAIL";
        }
        rep.lines.push_back(line);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Compatibility

CheckReport compat_check(const CompatWitness& w) {
    CheckReport rep;
    rep.check = "compatible";
    if (!w.omega.comps.empty() && !w.pi.brackets.empty() &&
        w.omega.shift != w.pi.shift)
        throw Error(Err::ShiftMismatch, "omega and pi have different shifts");

    auto pre = check_pre_bisymplectic(w.omega);
    if (!pre.passed()) {
        rep.verdict = "ERROR";
        rep.notes.push_back("omega fails check_pre_bisymplectic");
        return rep;
    }
    auto mc = mc_check(w.pi);
    if (!mc.passed()) {
        rep.verdict = "ERROR";
        rep.notes.push_back("pi fails mc_check");
        return rep;
    }

    auto psp = poly_space(w.pi.pres, w.pi.shift);
    CycElem Pi = w.pi.encode();
    CycElem omega_total(Space::forms(w.pi.pres));
    for (const auto& [i, c] : w.omega.comps) omega_total += c;
    CycElem trmu = cyclic_project(mu(omega_total.lift(), Pi));
    CycElem sig = Pi.is_zero() ? CycElem(psp) : sigma(Pi);
    CycElem defect = trmu - sig;

    if (Pi.is_zero()) rep.notes.push_back("degenerate pair: pi = 0");

    if (defect.is_zero()) {
        rep.verdict = "PASS-STRICT";
        return rep;
    }
    if (w.homotopy) {
        CycElem dh = apply_delta(*w.homotopy) + dgla_bracket(Pi, *w.homotopy);
        if ((defect - dh).is_zero()) {
            rep.verdict = "PASS-WITNESSED";
            return rep;
        }
        rep.notes.push_back("witness does not bound the defect");
    }
    rep.verdict = "FAIL";
    CheckLine line;
    line.what = "defect tr mu(omega,pi) - sigma(pi)";
    line.ok = false;
    line.residue = cyc_str(defect);
    rep.lines.push_back(line);
    return rep;
}

// ---------------------------------------------------------------------------
// flat_of_mu

// A (x) A^op product: (a (x) b) . (c (x) d) = +- ac (x) db.
static Tensor ae_mul(const Tensor& s, const Tensor& t) {
    Tensor out(s.sp, 2);
    for (const auto& [f, c] : s.terms) {
        for (const auto& [g, d] : t.terms) {
            int sgn = koszul_sign(s.sp->sign_deg(f[1]),
                                  s.sp->sign_deg(g[0]) + s.sp->sign_deg(g[1]));
            Word ac = f[0];
            ac.insert(ac.end(), g[0].begin(), g[0].end());
            Word db = g[1];
            db.insert(db.end(), f[1].begin(), f[1].end());
            out.add_term({ac, db}, c * d * sgn);
        }
    }
    return out;
}

static std::vector<std::vector<Tensor>> ae_mat_mul(
    const std::vector<std::vector<Tensor>>& a,
    const std::vector<std::vector<Tensor>>& b) {
    size_t r = a.size();
    auto asp = a[0][0].sp;
    std::vector<std::vector<Tensor>> out(r, std::vector<Tensor>(r, Tensor(asp, 2)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            for (size_t k = 0; k < r; ++k) out[i][j] += ae_mul(a[i][k], b[k][j]);
    return out;
}

// pi^flat as a matrix: pi^flat(dx_j) = sum_i m[i][j] . d_i with the inner
// A^e-structure on double derivations; entry = swapped bracket value.
static std::vector<std::vector<Tensor>> flat_matrix_dder(const KBracket& pi2) {
    auto raw = flat_matrix(pi2);
    size_t r = raw.size();
    std::vector<std::vector<Tensor>> out(r, std::vector<Tensor>(r, raw[0][0]));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) out[i][j] = raw[j][i].swap2();
    return out;
}

FlatMuResult flat_of_mu(const CycElem& omega2, const KBracket& pi2) {
    FlatMuResult res;
    CycElem Pi = encode_bracket(pi2);
    CycElem trmu = cyclic_project(mu(omega2.lift(), Pi));
    KBracket lhs_bracket =
        trmu.is_zero() ? KBracket::make(pi2.pres, 2, pi2.shift, {}, true)
                       : to_bracket(trmu);
    res.lhs = flat_matrix_dder(lhs_bracket);
    auto P = flat_matrix_dder(pi2);
    auto S = sharp_matrix(omega2);
    res.rhs = ae_mat_mul(ae_mat_mul(P, S), P);
    res.equal = true;
    for (size_t i = 0; i < res.lhs.size() && res.equal; ++i)
        for (size_t j = 0; j < res.lhs.size() && res.equal; ++j)
            res.equal = (res.lhs[i][j] == res.rhs[i][j]);
    return res;
}

// ---------------------------------------------------------------------------
// Legendre conversion

LegendreToOmega legendre_pi_to_omega(const DoublePoisson& pi) {
    for (const auto& [k, b] : pi.brackets)
        if (k != 2 && !b.is_zero())
            throw Error(Err::HigherComponentsPresent,
                        "legendre needs a pi_2-only structure");
    auto it = pi.brackets.find(2);
    if (it == pi.brackets.end())
        throw Error(Err::NotStrictlyNondegenerate, "pi_2 is missing");
    const KBracket& pi2 = it->second;
    auto strict = strict_matrix(flat_matrix(pi2));
    if (!strict) throw Error(Err::NotStrictlyNondegenerate, "entries not scalar");
    auto inv = rat_inverse(*strict);
    if (!inv) throw Error(Err::NotStrictlyNondegenerate, "pi_2^flat is singular");

    // solve for constant-coefficient omega_2 with sharp_matrix == target
    auto fsp = Space::forms(pi.pres);
    int r = (int)pi.pres->gens.size();
    RatMat target;
    {
        auto P = flat_matrix_dder(pi2);
        auto sm = strict_matrix(P);
        auto Pinv = rat_inverse(*sm);
        if (!Pinv) throw Error(Err::NotStrictlyNondegenerate, "pi_2^flat is singular");
        target = *Pinv;
    }
    std::vector<Word> basis;
    std::set<Word> seen;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            Word w{fsp->dx_id(a), fsp->dx_id(b)};
            auto canon = necklace_canon(*fsp, w);
            if (canon && seen.insert(canon->first).second)
                basis.push_back(canon->first);
        }
    RatMat A(r * r, std::vector<Rat>(basis.size(), Rat(0)));
    std::vector<Rat> rhs(r * r, Rat(0));
    for (size_t k = 0; k < basis.size(); ++k) {
        CycElem cand(fsp);
        cand.terms.emplace(basis[k], Rat(1));
        auto sm = sharp_matrix(cand);
        auto q = strict_matrix(sm);
        if (!q) throw Error(Err::Internal, "constant form with non-scalar sharp");
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) A[i * r + j][k] = (*q)[i][j];
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) rhs[i * r + j] = target[i][j];
    auto x = rat_solve(A, rhs);
    if (!x) throw Error(Err::Internal, "no constant-coefficient omega matches pi");

    LegendreToOmega out;
    out.omega.shift = pi.shift;
    CycElem w2(fsp);
    for (size_t k = 0; k < basis.size(); ++k)
        if ((*x)[k] != 0) w2.terms.emplace(basis[k], (*x)[k]);
    out.omega.comps.emplace(2, w2);
    out.prebisym = check_pre_bisymplectic(out.omega);
    out.compat = compat_check({out.omega, pi, std::nullopt});
    return out;
}

LegendreToPi legendre_omega_to_pi(const PreBisym& omega) {
    for (const auto& [i, c] : omega.comps)
        if (i != 2 && !c.is_zero())
            throw Error(Err::HigherComponentsPresent,
                        "legendre needs an omega_2-only structure");
    auto it = omega.comps.find(2);
    if (it == omega.comps.end())
        throw Error(Err::NotStrictlyNondegenerate, "omega_2 is missing");
    auto S = strict_matrix(sharp_matrix(it->second));
    if (!S) throw Error(Err::NotStrictlyNondegenerate, "entries not scalar");
    auto Sinv = rat_inverse(*S);
    if (!Sinv) throw Error(Err::NotStrictlyNondegenerate, "omega_2^sharp is singular");

    auto pres = it->second.sp->pres;
    auto asp = Space::algebra(pres);
    int r = (int)pres->gens.size();
    // target pi^flat(dder-convention) matrix = Sinv; entry [i][j] = pi(x_j, x_i)^swap
    std::map<std::vector<int>, Tensor> raw;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if ((*Sinv)[i][j] == 0) continue;
            Tensor v(asp, 2);
            v.add_term({Word{}, Word{}}, (*Sinv)[i][j]);
            auto [slot, fresh] = raw.try_emplace(std::vector<int>{j, i}, v);
            if (!fresh) slot->second += v;
        }
    LegendreToPi out;
    out.pi.pres = pres;
    out.pi.shift = omega.shift;
    out.pi.brackets.emplace(2, KBracket::make(pres, 2, omega.shift, std::move(raw), true));
    out.mc = mc_check(out.pi);
    if (!out.mc.passed())
        throw Error(Err::McFailure,
                    "inverse bracket exists but fails the Maurer-Cartan equation");
    out.compat = compat_check({omega, out.pi, std::nullopt});
    return out;
}

}  // namespace ncdp
