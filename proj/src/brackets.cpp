#include "ncdp/brackets.hpp"

#include <algorithm>
#include <set>

#include "ncdp/serialize.hpp"

namespace ncdp {

// Inputs of a shift-n k-bracket carry the twisted degree |a| + n + 1.
static int twisted(const Space& sp, int sym, int shift) {
    return sp.syms[sym].chain_deg + shift + 1;
}

std::pair<std::vector<int>, Tensor> KBracket::rotate_entry(
    const Presentation& pres, int shift, const std::vector<int>& tuple,
    const Tensor& value) {
    int k = (int)tuple.size();
    std::vector<int> rot;
    rot.reserve(k);
    rot.push_back(tuple[k - 1]);
    for (int i = 0; i + 1 < k; ++i) rot.push_back(tuple[i]);
    int last = pres.gens[tuple[k - 1]].degree + shift + 1;
    int rest = 0;
    for (int i = 0; i + 1 < k; ++i) rest += pres.gens[tuple[i]].degree + shift + 1;
    return {rot, value.rotate_fwd().scaled(Rat(koszul_sign(last, rest)))};
}

bool KBracket::is_zero() const {
    for (const auto& [t, v] : table)
        if (!v.is_zero()) return false;
    return true;
}

bool KBracket::operator==(const KBracket& o) const {
    auto nonzero = [](const std::map<std::vector<int>, Tensor>& t) {
        std::map<std::vector<int>, Tensor> r;
        for (const auto& [k, v] : t)
            if (!v.is_zero()) r.emplace(k, v);
        return r;
    };
    return pres == o.pres && arity == o.arity && shift == o.shift &&
           nonzero(table) == nonzero(o.table);
}

KBracket KBracket::make(std::shared_ptr<const Presentation> pres, int arity,
                        int shift, std::map<std::vector<int>, Tensor> raw,
                        bool symmetrize) {
    KBracket out;
    out.pres = pres;
    out.arity = arity;
    out.shift = shift;
    auto asp = Space::algebra(pres);
    // normalize value spaces and validate shapes
    for (auto& [t, v] : raw) {
        if ((int)t.size() != arity || v.arity != arity)
            throw Error(Err::ArityMismatch, "table entry arity mismatch");
        v.sp = asp;
        if (!v.is_zero()) {
            int want = shift;
            for (int g : t) want += pres->gens[g].degree;
            for (const auto& [f, c] : v.terms) {
                int got = 0;
                for (const auto& w : f) got += asp->chain_deg(w);
                if (got != want)
                    throw Error(Err::DegreeMismatch,
                                "bracket value must have chain degree sum+shift");
            }
        }
    }
    if (!symmetrize) {
        out.table = std::move(raw);
        // validate cyclic symmetry exactly
        for (const auto& [t, v] : out.table) {
            auto [rt, rv] = rotate_entry(*pres, shift, t, v);
            auto it = out.table.find(rt);
            Tensor have = (it != out.table.end()) ? it->second : Tensor(asp, arity);
            if (!(have == rv))
                throw Error(Err::Internal, "table is not cyclically symmetric");
        }
        return out;
    }
    // Symmetrized completion: each raw entry walks its C_k orbit; the walk is
    // scaled by the number of raw entries it touches, so consistent partial
    // tables are completed verbatim and inconsistent ones are averaged.
    for (const auto& [t, v] : raw) {
        std::vector<int> cur = t;
        Tensor curv = v;
        int m = 0;
        for (int i = 0; i < arity; ++i) {
            if (raw.count(cur)) ++m;
            auto [nt, nv] = rotate_entry(*pres, shift, cur, curv);
            cur = nt;
            curv = nv;
        }
        cur = t;
        curv = v;
        for (int i = 0; i < arity; ++i) {
            auto [it, fresh] = out.table.try_emplace(cur, Tensor(asp, arity));
            it->second += curv.scaled(Rat(1, m));
            auto [nt, nv] = rotate_entry(*pres, shift, cur, curv);
            cur = nt;
            curv = nv;
        }
    }
    for (auto it = out.table.begin(); it != out.table.end();)
        it = it->second.is_zero() ? out.table.erase(it) : std::next(it);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

static Tensor eval_words(const KBracket& pi, const std::shared_ptr<const Space>& asp,
                         std::vector<Word> words) {
    const int k = pi.arity;
    Tensor zero(asp, k);
    const Word& last = words.back();
    if (last.empty()) return zero;  // derivations kill the unit
    bool all_single = true;
    for (const auto& w : words) all_single &= (w.size() == 1);
    if (all_single) {
        std::vector<int> tuple;
        tuple.reserve(k);
        for (const auto& w : words) tuple.push_back(w[0]);
        auto it = pi.table.find(tuple);
        return (it != pi.table.end()) ? it->second : zero;
    }
    if (last.size() > 1) {
        // derivation in the last slot for the outer bimodule structure
        int op_deg = pi.shift;
        for (int i = 0; i + 1 < k; ++i) op_deg += asp->sign_deg(words[i]);
        int g = last[0];
        Word rest(last.begin() + 1, last.end());
        std::vector<Word> w1 = words;
        w1.back() = Word{g};
        std::vector<Word> w2 = words;
        w2.back() = rest;
        Tensor t1 = eval_words(pi, asp, std::move(w1)).right_mul(rest);
        Tensor t2 = eval_words(pi, asp, std::move(w2))
                        .left_mul(Word{g})
                        .scaled(Rat(koszul_sign(op_deg, asp->sign_deg(Word{g}))));
        return t1 + t2;
    }
    // last slot is a single generator; rotate a composite slot into place
    int first_tw = asp->sign_deg(words[0]) + pi.shift + 1;
    int rest_tw = 0;
    for (int i = 1; i < k; ++i) rest_tw += asp->sign_deg(words[i]) + pi.shift + 1;
    std::vector<Word> rot(words.begin() + 1, words.end());
    rot.push_back(words[0]);
    return eval_words(pi, asp, std::move(rot))
        .rotate_fwd()
        .scaled(Rat(koszul_sign(first_tw, rest_tw)));
}

Tensor KBracket::evaluate(const std::vector<Elem>& args) const {
    if ((int)args.size() != arity)
        throw Error(Err::ArityMismatch,
                    "expected " + std::to_string(arity) + " arguments");
    auto asp = Space::algebra(pres);
    for (const auto& a : args)
        if (a.sp->kind != Space::Kind::Algebra || a.sp->pres != pres)
            throw Error(Err::MixedAlgebras, "argument over a different algebra");
    Tensor out(asp, arity);
    std::vector<std::pair<Word, Rat>> expansion;
    std::function<void(size_t, std::vector<Word>&, const Rat&)> rec =
        [&](size_t i, std::vector<Word>& words, const Rat& c) {
            if (i == args.size()) {
                out += eval_words(*this, asp, words).scaled(c);
                return;
            }
            for (const auto& [w, cw] : args[i].terms) {
                words.push_back(w);
                rec(i + 1, words, c * cw);
                words.pop_back();
            }
        };
    std::vector<Word> words;
    rec(0, words, Rat(1));
    return out;
}

Elem KBracket::loday(const Elem& a, const Elem& b) const {
    if (arity != 2) throw Error(Err::ArityMismatch, "loday needs an arity-2 bracket");
    return evaluate({a, b}).collapse();
}

// ---------------------------------------------------------------------------
// Necklace <-> bracket dictionary

// Peel the last open slot of a free derivation word against generator g:
// u . theta_t . a  -> delta(t, g) * koszul(<g>, |a|) * (u, a).
static int peel_sign(const Space& sp, int gen, const Word& tail) {
    return koszul_sign(sp.pres->gens[gen].degree + sp.shift + 1, sp.sign_deg(tail));
}

KBracket to_bracket(const CycElem& P) {
    const auto psp = P.sp;
    if (psp->kind != Space::Kind::Poly)
        throw Error(Err::MixedAlgebras, "to_bracket needs a cyclic polyvector");
    auto wt = P.weight();
    if (!wt || *wt < 1)
        throw Error(Err::MixedWeights, "to_bracket needs pure theta-weight >= 1");
    const int p = *wt;
    auto asp = Space::algebra(psp->pres);

    // candidate tuples: permutations of the theta contents of the words
    std::set<std::vector<int>> tuples;
    for (const auto& [w, c] : P.terms) {
        std::vector<int> content;
        for (int s : w)
            if (psp->syms[s].kind == SymKind::Theta) content.push_back(psp->syms[s].base);
        std::sort(content.begin(), content.end());
        do {
            tuples.insert(content);
        } while (std::next_permutation(content.begin(), content.end()));
    }

    std::map<std::vector<int>, Tensor> table;
    for (const auto& t : tuples) {
        // slot p via the smile cut, then peel slots p-1 .. 1
        Elem q = smile_bracket(P, make_gen(psp, psp->x_id(t[p - 1])));
        // intermediate: factor 0 = remaining polyvector word, then collected
        // x-word factors
        Tensor cur(psp, 1);
        for (const auto& [w, c] : q.terms) cur.add_term({w}, c);
        for (int slot = p - 1; slot >= 1; --slot) {
            Tensor next(psp, cur.arity + 1);
            for (const auto& [f, c] : cur.terms) {
                const Word& head = f[0];
                int last_theta = -1;
                for (size_t i = 0; i < head.size(); ++i)
                    if (psp->syms[head[i]].kind == SymKind::Theta) last_theta = (int)i;
                if (last_theta < 0) continue;
                if (psp->syms[head[last_theta]].base != t[slot - 1]) continue;
                Word u(head.begin(), head.begin() + last_theta);
                Word a(head.begin() + last_theta + 1, head.end());
                std::vector<Word> nf;
                nf.push_back(u);
                nf.push_back(a);
                for (size_t i = 1; i < f.size(); ++i) nf.push_back(f[i]);
                next.add_term(nf, c * peel_sign(*psp, t[slot - 1], a));
            }
            cur = next;
        }
        Tensor val(asp, p);
        for (const auto& [f, c] : cur.terms) {
            if (!f[0].empty()) continue;  // unmatched theta content
            std::vector<Word> g(f.begin() + 1, f.end());
            val.add_term(g, c);
        }
        if (!val.is_zero()) table.emplace(t, val);
    }
    return KBracket::make(psp->pres, p, psp->shift, std::move(table),
                          /*symmetrize=*/false);
}

CycElem encode_bracket(const KBracket& pi) {
    auto psp = poly_space(pi.pres, pi.shift);
    CycElem out(psp);
    if (pi.is_zero()) return out;
    const int p = pi.arity;

    // candidate necklaces from the table term patterns
    std::vector<Word> basis;
    std::set<Word> seen;
    for (const auto& [t, v] : pi.table) {
        for (const auto& [f, c] : v.terms) {
            // value u_1 (x) ... (x) u_p at (g_1..g_p) comes from the word
            // theta_{g_1} u_2 theta_{g_2} u_3 ... theta_{g_{p-1}} u_p theta_{g_p} u_1
            Word w;
            for (int i = 0; i < p; ++i) {
                w.push_back(psp->theta_id(t[i]));
                const Word& blk = f[(i + 1) % p];
                w.insert(w.end(), blk.begin(), blk.end());
            }
            auto canon = necklace_canon(*psp, w);
            if (canon && seen.insert(canon->first).second) basis.push_back(canon->first);
        }
    }

    // exact solve: find coefficients with to_bracket(sum) == pi
    std::vector<KBracket> images;
    std::set<std::pair<std::vector<int>, std::vector<Word>>> coords;
    for (const auto& w : basis) {
        CycElem e(psp);
        e.terms.emplace(w, Rat(1));
        images.push_back(to_bracket(e));
        for (const auto& [t, v] : images.back().table)
            for (const auto& [f, c] : v.terms) coords.insert({t, f});
    }
    for (const auto& [t, v] : pi.table)
        for (const auto& [f, c] : v.terms) coords.insert({t, f});

    RatMat A(coords.size(), std::vector<Rat>(basis.size(), Rat(0)));
    std::vector<Rat> b(coords.size(), Rat(0));
    size_t row = 0;
    for (const auto& [t, f] : coords) {
        for (size_t j = 0; j < basis.size(); ++j) {
            auto it = images[j].table.find(t);
            if (it != images[j].table.end()) {
                auto ft = it->second.terms.find(f);
                if (ft != it->second.terms.end()) A[row][j] = ft->second;
            }
        }
        auto it = pi.table.find(t);
        if (it != pi.table.end()) {
            auto ft = it->second.terms.find(f);
            if (ft != it->second.terms.end()) b[row] = ft->second;
        }
        ++row;
    }
    auto x = rat_solve(A, b);
    if (!x)
        throw Error(Err::Internal, "bracket has no necklace preimage");
    for (size_t j = 0; j < basis.size(); ++j)
        if ((*x)[j] != 0) out.terms.emplace(basis[j], (*x)[j]);
    // certify
    if (!(to_bracket(out) == pi))
        throw Error(Err::Internal, "necklace encoding failed to round-trip");
    return out;
}

// ---------------------------------------------------------------------------
// Double Poisson structures

int DoublePoisson::top_weight() const {
    int n = 0;
    for (const auto& [k, b] : brackets)
        if (!b.is_zero()) n = std::max(n, k);
    return n;
}

CycElem DoublePoisson::encode() const {
    auto psp = poly_space(pres, shift);
    CycElem out(psp);
    for (const auto& [k, b] : brackets) {
        if (b.shift != shift || b.pres != pres)
            throw Error(Err::ShiftMismatch, "bracket components disagree");
        out += encode_bracket(b);
    }
    return out;
}

DoublePoisson DoublePoisson::from_cyc(std::shared_ptr<const Presentation> pres,
                                      int shift, const CycElem& total) {
    DoublePoisson out;
    out.pres = pres;
    out.shift = shift;
    for (const auto& [w, comp] : total.by_weight()) {
        if (w < 2)
            throw Error(Err::WeightBelowTwo,
                        "double Poisson structures have theta-weight >= 2");
        out.brackets.emplace(w, to_bracket(comp));
    }
    return out;
}

CheckReport mc_check(const DoublePoisson& pi) {
    CheckReport rep;
    rep.check = "mc";
    rep.verdict = "PASS";
    if (pi.brackets.empty()) {
        rep.notes.push_back("empty structure");
        return rep;
    }
    for (const auto& [k, b] : pi.brackets)
        if (k < 2) throw Error(Err::WeightBelowTwo, "bracket of arity < 2");
    CycElem Pi = pi.encode();
    int N = pi.top_weight();
    CycElem residue = apply_delta(Pi) + dgla_bracket(Pi, Pi).scaled(Rat(1, 2));
    auto by_w = residue.by_weight();
    for (int w = 2; w <= std::max(2, 2 * N - 2); ++w) {
        CheckLine line;
        line.what = "weight " + std::to_string(w);
        auto it = by_w.find(w);
        line.ok = (it == by_w.end()) || it->second.is_zero();
        if (!line.ok) {
            line.residue = cyc_str(it->second);
            rep.verdict = "FAIL";
        }
        rep.lines.push_back(line);
    }
    return rep;
}

Tensor double_jacobi_oracle(const KBracket& pi, int ga, int gb, int gc) {
    if (pi.arity != 2)
        throw Error(Err::ArityMismatch, "double_jacobi_oracle needs arity 2");
    auto asp = Space::algebra(pi.pres);
    auto gen = [&](int g) { return make_gen(asp, g); };
    // {{a, u (x) v}}_L = {{a, u}} (x) v
    auto braL = [&](int g, const Tensor& inner) {
        Tensor out(asp, 3);
        for (const auto& [f, c] : inner.terms) {
            Elem u(asp);
            u.add_term(f[0], Rat(1));
            Tensor t = pi.evaluate({gen(g), u});
            for (const auto& [tf, tc] : t.terms)
                out.add_term({tf[0], tf[1], f[1]}, tc * c);
        }
        return out;
    };
    auto tw = [&](int g) { return pi.pres->gens[g].degree + pi.shift + 1; };
    Tensor t0 = braL(ga, pi.evaluate({gen(gb), gen(gc)}));
    Tensor t1 = braL(gb, pi.evaluate({gen(gc), gen(ga)}))
                    .rotate_fwd()
                    .scaled(Rat(koszul_sign(tw(ga), tw(gb) + tw(gc))));
    Tensor t2 = braL(gc, pi.evaluate({gen(ga), gen(gb)}))
                    .rotate_fwd()
                    .rotate_fwd()
                    .scaled(Rat(koszul_sign(tw(ga) + tw(gb), tw(gc))));
    return t0 + t1 + t2;
}

Elem twisted_differential(const DoublePoisson& pi, const Elem& Q) {
    auto rep = mc_check(pi);
    if (!rep.passed())
        throw Error(Err::NotMaurerCartan, "structure fails the Maurer-Cartan equation");
    CycElem Pi = pi.encode();
    Elem q = Q;
    if (q.sp->kind == Space::Kind::Algebra) q = to_poly(Pi.sp, q);
    return apply_delta(q) + smile_bracket(Pi, q);
}

// ---------------------------------------------------------------------------
// Non-degeneracy

std::vector<std::vector<Tensor>> flat_matrix(const KBracket& pi2) {
    if (pi2.arity != 2) throw Error(Err::ArityMismatch, "flat matrix needs arity 2");
    auto asp = Space::algebra(pi2.pres);
    int r = (int)pi2.pres->gens.size();
    std::vector<std::vector<Tensor>> m(r, std::vector<Tensor>(r, Tensor(asp, 2)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            m[i][j] = pi2.evaluate({make_gen(asp, i), make_gen(asp, j)});
    return m;
}

std::optional<RatMat> strict_matrix(const std::vector<std::vector<Tensor>>& m) {
    size_t r = m.size();
    RatMat out(r, std::vector<Rat>(r, Rat(0)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            for (const auto& [f, c] : m[i][j].terms) {
                if (!f[0].empty() || !f[1].empty()) return std::nullopt;
                out[i][j] = c;
            }
    return out;
}

RatMat augmented_matrix(const std::vector<std::vector<Tensor>>& m) {
    size_t r = m.size();
    RatMat out(r, std::vector<Rat>(r, Rat(0)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            for (const auto& [f, c] : m[i][j].terms)
                if (f[0].empty() && f[1].empty()) out[i][j] = c;
    return out;
}

CheckReport nondeg_check(const KBracket& pi2) {
    CheckReport rep;
    rep.check = "nondeg";
    auto m = flat_matrix(pi2);
    auto strict = strict_matrix(m);
    RatMat q = strict ? *strict : augmented_matrix(m);
    rep.mode = strict ? "strict" : "fiberwise";
    for (const auto& row : m) {
        std::vector<std::string> line;
        for (const auto& e : row) line.push_back(tensor_str(e));
        rep.matrix.push_back(line);
    }
    bool invertible = rat_inverse(q).has_value();
    rep.verdict = invertible ? "PASS" : "FAIL";
    if (!invertible)
        rep.notes.push_back(rep.mode + " matrix is singular");
    return rep;
}

}  // namespace ncdp
