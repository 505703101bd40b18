#pragma once

#include "ncdp/algebra.hpp"

namespace ncdp {

using RatMat = std::vector<std::vector<Rat>>;

inline RatMat rat_identity(size_t n) {
    RatMat m(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline RatMat rat_mul(const RatMat& a, const RatMat& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    RatMat r(n, std::vector<Rat>(m, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    return r;
}

// Gauss-Jordan inverse; nullopt for singular input.
inline std::optional<RatMat> rat_inverse(const RatMat& a) {
    size_t n = a.size();
    RatMat m = a, inv = rat_identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rat d = m[col][col];
        for (size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || m[i][col] == 0) continue;
            Rat f = m[i][col];
            for (size_t j = 0; j < n; ++j) {
                m[i][j] -= f * m[col][j];
                inv[i][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// Exact solve of A x = b by Gaussian elimination; A may be rectangular.
// Free variables are set to 0; nullopt if inconsistent.
inline std::optional<std::vector<Rat>> rat_solve(RatMat a, std::vector<Rat> b) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        Rat d = a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] /= d;
        b[r] /= d;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back((int)c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(cols, Rat(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
    return x;
}

}  // namespace ncdp
