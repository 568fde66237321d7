#pragma once

#include <algorithm>
#include <vector>

#include "hyperinv/matrix.hpp"

namespace hyperinv {

/// Diagonal magnitudes |R_kk| of a column-pivoted Householder QR, descending.
/// These track the singular values well enough for rank decisions.
template <class T>
std::vector<real_t<T>> qr_column_pivot_diag(DenseMatrix<T> a) {
    using R = real_t<T>;
    const int m = a.rows(), n = a.cols();
    const int steps = std::min(m, n);
    std::vector<R> diag;
    diag.reserve(steps);
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;

    for (int k = 0; k < steps; ++k) {
        // pivot: column with the largest remaining norm
        int best = k;
        R best_norm2(0);
        for (int j = k; j < n; ++j) {
            R s(0);
            for (int i = k; i < m; ++i) {
                R mag = scalar_abs(a(i, j));
                s += mag * mag;
            }
            if (j == k || s > best_norm2) {
                best = j;
                best_norm2 = s;
            }
        }
        if (best != k) {
            for (int i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
            std::swap(perm[k], perm[best]);
        }
        const R col_norm = scalar_traits<R>::sqrt(best_norm2);
        diag.push_back(col_norm);
        if (col_norm == R(0)) continue;

        // Householder vector v for column k, with phase chosen to avoid cancellation
        std::vector<T> v(m - k);
        for (int i = k; i < m; ++i) v[i - k] = a(i, k);
        T phase(1);
        {
            R a0 = scalar_abs(v[0]);
            if (a0 > R(0)) phase = v[0] / T(a0);
        }
        v[0] += phase * T(col_norm);
        R v2(0);
        for (const auto& x : v) {
            R mag = scalar_abs(x);
            v2 += mag * mag;
        }
        if (v2 == R(0)) continue;

        // apply reflector to the trailing columns
        for (int j = k + 1; j < n; ++j) {
            T dot(0);
            for (int i = k; i < m; ++i) dot += scalar_conj(v[i - k]) * a(i, j);
            const T factor = T(R(2)) * dot / T(v2);
            for (int i = k; i < m; ++i) a(i, j) -= factor * v[i - k];
        }
        // column k itself becomes (-phase*col_norm, 0, ..., 0); we only need |R_kk|
        for (int i = k; i < m; ++i) a(i, k) = T(0);
    }
    return diag;
}

/// Number of QR diagonal entries exceeding tol. tol < 0 selects the default
/// max(rows,cols) * eps * spectral_estimate(a).
template <class T>
int rank(const DenseMatrix<T>& a, real_t<T> tol = real_t<T>(-1)) {
    using R = real_t<T>;
    if (norm_frobenius(a) == R(0)) return 0;
    if (tol < R(0)) {
        tol = R(std::max(a.rows(), a.cols())) * scalar_traits<R>::epsilon() *
              spectral_estimate(a);
    }
    auto diag = qr_column_pivot_diag(a);
    int r = 0;
    for (const auto& d : diag)
        if (d > tol) ++r;
    return r;
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, descending.
template <class T>
std::vector<real_t<T>> hermitian_eigenvalues(DenseMatrix<T> a, int max_sweeps = 50) {
    using R = real_t<T>;
    if (!a.is_square()) throw shape_error("hermitian_eigenvalues: matrix must be square");
    const int n = a.rows();
    const R eps = scalar_traits<R>::epsilon();

    auto off_norm = [&]() {
        R s(0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                R mag = scalar_abs(a(i, j));
                s += mag * mag;
            }
        return scalar_traits<R>::sqrt(R(2) * s);
    };
    const R scale = norm_frobenius(a);
    if (scale == R(0)) return std::vector<R>(n, R(0));

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= eps * scale * R(n)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const R apq = scalar_abs(a(p, q));
                if (apq <= eps * scale) continue;
                // unitary phase that makes the pivot entry real
                const T phase = a(p, q) / T(apq);
                const R app = scalar_traits<T>::real(a(p, p));
                const R aqq = scalar_traits<T>::real(a(q, q));
                const R theta = (aqq - app) / (R(2) * apq);
                R t;
                {
                    const R at = scalar_abs(theta);
                    t = R(1) / (at + scalar_traits<R>::sqrt(R(1) + at * at));
                    if (theta < R(0)) t = -t;
                }
                const R c = R(1) / scalar_traits<R>::sqrt(R(1) + t * t);
                const R s = t * c;
                const T cp = T(c);
                const T sp = T(s) * phase;            // rotation applied on the right
                const T spc = scalar_conj(sp);

                for (int i = 0; i < n; ++i) {
                    const T aip = a(i, p), aiq = a(i, q);
                    a(i, p) = cp * aip - spc * aiq;
                    a(i, q) = sp * aip + cp * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const T apj = a(p, j), aqj = a(q, j);
                    a(p, j) = cp * apj - sp * aqj;
                    a(q, j) = spc * apj + cp * aqj;
                }
            }
        }
    }
    std::vector<R> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = scalar_traits<T>::real(a(i, i));
    std::sort(ev.begin(), ev.end(), [](const R& x, const R& y) { return x > y; });
    return ev;
}

/// Gaussian elimination with partial pivoting; solves A X = B.
template <class T>
DenseMatrix<T> solve(DenseMatrix<T> a, DenseMatrix<T> b) {
    using R = real_t<T>;
    if (!a.is_square()) throw shape_error("solve: coefficient matrix must be square");
    if (a.rows() != b.rows()) throw shape_error("solve: right-hand side rows mismatch");
    const int n = a.rows(), k = b.cols();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        R best = scalar_abs(a(col, col));
        for (int i = col + 1; i < n; ++i) {
            R mag = scalar_abs(a(i, col));
            if (mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (best == R(0)) throw degenerate_input_error("solve: matrix is singular");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < k; ++j) std::swap(b(col, j), b(piv, j));
        }
        const T d = a(col, col);
        for (int i = col + 1; i < n; ++i) {
            const T f = a(i, col) / d;
            if (f == T(0)) continue;
            for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            for (int j = 0; j < k; ++j) b(i, j) -= f * b(col, j);
        }
    }
    DenseMatrix<T> x(n, k);
    for (int j = 0; j < k; ++j) {
        for (int i = n - 1; i >= 0; --i) {
            T s = b(i, j);
            for (int p = i + 1; p < n; ++p) s -= a(i, p) * x(p, j);
            x(i, j) = s / a(i, i);
        }
    }
    return x;
}

template <class T>
DenseMatrix<T> invert(const DenseMatrix<T>& a) {
    return solve(a, DenseMatrix<T>::identity(a.rows()));
}

}  // namespace hyperinv
