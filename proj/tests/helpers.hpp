#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hyperinv/decomp.hpp"
#include "hyperinv/matrix.hpp"

namespace testutil {

using hyperinv::DenseMatrix;

// Deterministic generators: raw mt19937_64 draws mapped manually so the
// streams are identical across standard libraries.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double unit() { return (engine() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double gauss() {
        double u1 = unit(), u2 = unit();
        if (u1 <= 0) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

inline DenseMatrix<double> random_matrix(Rng& rng, int m, int n, double lo = -1.0,
                                         double hi = 1.0) {
    DenseMatrix<double> a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(lo, hi);
    return a;
}

/// Gram-Schmidt on Gaussian columns: m x n with orthonormal columns (n <= m).
inline DenseMatrix<double> random_orthonormal(Rng& rng, int m, int n) {
    DenseMatrix<double> q(m, n);
    for (int j = 0; j < n; ++j) {
        std::vector<double> v(m);
        for (int i = 0; i < m; ++i) v[i] = rng.gauss();
        for (int p = 0; p < j; ++p) {
            double dot = 0;
            for (int i = 0; i < m; ++i) dot += q(i, p) * v[i];
            for (int i = 0; i < m; ++i) v[i] -= dot * q(i, p);
        }
        double nrm = 0;
        for (int i = 0; i < m; ++i) nrm += v[i] * v[i];
        nrm = std::sqrt(nrm);
        for (int i = 0; i < m; ++i) q(i, j) = v[i] / nrm;
    }
    return q;
}

/// U diag(sv) V^T with Haar-ish factors.
inline DenseMatrix<double> with_singular_values(Rng& rng, int m, int n,
                                                const std::vector<double>& sv) {
    auto u = random_orthonormal(rng, m, n);
    auto v = random_orthonormal(rng, n, n);
    DenseMatrix<double> d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = sv[i];
    return hyperinv::matmul(hyperinv::matmul(u, d), hyperinv::conj_transpose(v));
}

/// Symmetric with the given eigenvalues.
inline DenseMatrix<double> with_eigenvalues(Rng& rng, int n, const std::vector<double>& ev) {
    auto q = random_orthonormal(rng, n, n);
    DenseMatrix<double> d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = ev[i];
    return hyperinv::matmul(hyperinv::matmul(q, d), hyperinv::conj_transpose(q));
}

template <class T>
double frob_dist(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    return hyperinv::to_double(hyperinv::norm_frobenius(a - b));
}

inline DenseMatrix<hyperinv::mp_real> lift(const DenseMatrix<double>& a) {
    DenseMatrix<hyperinv::mp_real> out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = hyperinv::mp_real(a(i, j));
    return out;
}

inline DenseMatrix<double> lower(const DenseMatrix<hyperinv::mp_real>& a) {
    DenseMatrix<double> out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = static_cast<double>(a(i, j));
    return out;
}

}  // namespace testutil
