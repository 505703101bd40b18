#pragma once

#include "ncdp/algebra.hpp"

namespace ncdp {

struct CycElem;

// Canonical text forms. Deterministic: reduced fractions, lexicographic
// word order (std::map iteration), unit coefficients suppressed.
//   3/2 * x.x + d(x).d(xi) + -1 * theta(x)
// The zero element prints as "0"; the empty word prints as "1".
std::string word_str(const Space& sp, const Word& w);
std::string elem_str(const Elem& e);
std::string tensor_str(const Tensor& t);
std::string cyc_str(const CycElem& e);  // "cyc: ..." prefix

}  // namespace ncdp
