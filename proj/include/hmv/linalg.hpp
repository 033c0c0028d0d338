#pragma once

#include <cstddef>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/rational.hpp"

namespace hmv {

/* Small dense exact linear algebra (dimensions here are the field degree n,
 * typically 2 or 3) and row-style Hermite normal form over the integers. */

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row major
using ZVec = std::vector<Integer>;
using ZMat = std::vector<ZVec>;

inline QMat qmat_identity(std::size_t n) {
    QMat I(n, QVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline QMat qmat_mul(const QMat& A, const QMat& B) {
    std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    QMat C(n, QVec(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

/* row vector * matrix */
inline QVec qvec_mat(const QVec& v, const QMat& A) {
    std::size_t n = A.size(), m = A.empty() ? 0 : A[0].size();
    QVec r(m, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) r[j] += v[i] * A[i][j];
    }
    return r;
}

inline Rational qmat_det(QMat A) {
    std::size_t n = A.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && A[p][c] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(A[p], A[c]);
            det = -det;
        }
        det *= A[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (A[i][c] == 0) continue;
            Rational f = A[i][c] / A[c][c];
            for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
        }
    }
    return det;
}

/* Solve x * A = b for a row vector x (A square nonsingular). */
inline QVec qmat_solve_left(QMat A, QVec b) {
    std::size_t n = A.size();
    // transpose-free: solve A^T x^T = b^T by eliminating on columns of A
    // (work with augmented transposed system).
    QMat M(n, QVec(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A[j][i];
        M[i][n] = b[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M[p][c] == 0) ++p;
        if (p == n) throw InternalError("qmat_solve_left: singular matrix");
        std::swap(M[p], M[c]);
        Rational piv = M[c][c];
        for (std::size_t j = c; j <= n; ++j) M[c][j] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (std::size_t j = c; j <= n; ++j) M[i][j] -= f * M[c][j];
        }
    }
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n];
    return x;
}

inline QMat qmat_inverse(const QMat& A) {
    std::size_t n = A.size();
    QMat M(n, QVec(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
        M[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M[p][c] == 0) ++p;
        if (p == n) throw InternalError("qmat_inverse: singular matrix");
        std::swap(M[p], M[c]);
        Rational piv = M[c][c];
        for (std::size_t j = 0; j < 2 * n; ++j) M[c][j] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) M[i][j] -= f * M[c][j];
        }
    }
    QMat R(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) R[i][j] = M[i][n + j];
    return R;
}

/* Row-style Hermite normal form.
 *
 * Input: m x n integer rows (any m). Output: the nonzero rows of the unique
 * row HNF of the input lattice: echelon shape with pivots left to right,
 * positive pivots, and entries above each pivot reduced into [0, pivot).
 * Row order is by pivot column, so the representation is canonical for the
 * generated lattice. */
inline ZMat hnf_rows(ZMat M) {
    if (M.empty()) return M;
    std::size_t m = M.size(), n = M[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // gauge: gcd-eliminate column c below row r
        std::size_t p = r;
        while (p < m && M[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(M[p], M[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            while (M[i][c] != 0) {
                Integer q = floor_div(M[r][c], M[i][c]);
                for (std::size_t j = c; j < n; ++j) M[r][j] -= q * M[i][j];
                std::swap(M[r], M[i]);
            }
        }
        if (M[r][c] < 0)
            for (std::size_t j = c; j < n; ++j) M[r][j] = -M[r][j];
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < r; ++i) {
            if (M[i][c] == 0) continue;
            Integer q = floor_div(M[i][c], M[r][c]);
            if (q != 0)
                for (std::size_t j = c; j < n; ++j) M[i][j] -= q * M[r][j];
        }
        ++r;
    }
    M.resize(r);
    return M;
}

/* Determinant of a square integer matrix via rational elimination. */
inline Integer zmat_det(const ZMat& A) {
    QMat Q(A.size(), QVec(A.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j) Q[i][j] = Rational(A[i][j]);
    Rational d = qmat_det(Q);
    if (den(d) != 1) throw InternalError("zmat_det: non-integer determinant");
    return num(d);
}

}  // namespace hmv
