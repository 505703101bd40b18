#include "ncdp/serialize.hpp"

#include <sstream>

#include "ncdp/forms.hpp"

namespace ncdp {

std::string word_str(const Space& sp, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += sp.syms[w[i]].name;
    }
    return out;
}

static std::string term_str(const Space& sp, const Word& w, const Rat& c) {
    if (w.empty()) return rat_str(c);
    if (c == 1) return word_str(sp, w);
    if (c == -1) return "-" + word_str(sp, w);
    return rat_str(c) + " * " + word_str(sp, w);
}

std::string elem_str(const Elem& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : e.terms) {
        if (!first) out += " + ";
        out += term_str(*e.sp, w, c);
        first = false;
    }
    return out;
}

std::string tensor_str(const Tensor& t) {
    if (t.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [f, c] : t.terms) {
        if (!first) out += " + ";
        std::string factors;
        for (int i = 0; i < t.arity; ++i) {
            if (i) factors += " ox ";
            factors += "(" + word_str(*t.sp, f[i]) + ")";
        }
        if (c == 1)
            out += factors;
        else if (c == -1)
            out += "-" + factors;
        else
            out += rat_str(c) + " * " + factors;
        first = false;
    }
    return out;
}

std::string cyc_str(const CycElem& e) {
    if (e.terms.empty()) return "0";
    return "cyc: " + elem_str(e.lift());
}

}  // namespace ncdp
