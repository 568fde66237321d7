#pragma once

#include <cmath>
#include <complex>
#include <tuple>
#include <vector>

#include "hyperinv/matrix.hpp"
#include "hyperinv/sparse.hpp"

namespace hyperinv {

/// 12x12 rational test matrix with ind(A) = 3, used as the Drazin benchmark.
/// Entries are 2, 2/5, +-1 and 0, built exactly at the working precision.
template <class T>
DenseMatrix<T> drazin_benchmark_matrix() {
    const T f = T(2) / T(5);
    const T z = T(0), o = T(1), n = T(-1), t = T(2), nt = T(-2);
    return DenseMatrix<T>{
        {t, f, z, z, z, z, z, z, z, z, z, z},
        {nt, f, z, z, z, z, z, z, z, z, z, z},
        {n, n, o, n, z, z, z, z, n, z, z, z},
        {n, n, n, o, z, z, z, z, z, z, z, z},
        {z, z, z, z, o, o, n, n, z, z, n, z},
        {z, z, z, z, o, o, n, n, z, z, z, z},
        {z, z, z, n, nt, f, z, z, z, z, z, z},
        {z, z, z, z, t, f, z, z, z, z, z, z},
        {z, n, z, z, z, z, z, z, o, n, n, n},
        {z, z, z, z, z, z, z, z, n, o, n, n},
        {z, z, z, z, z, z, z, z, z, z, f, nt},
        {z, z, z, z, z, z, z, z, z, z, f, t},
    };
}

/// Complex shifted 2-D Laplacian on a grid x grid mesh (5-point stencil plus
/// a spatially varying complex diagonal shift). grid = 29 gives the built-in
/// 841-dimension preconditioning benchmark system. Diagonally dominant, so
/// the reciprocal-diagonal seed is a convergent starting point.
inline SparseMatrix<std::complex<double>> shifted_laplacian_2d(int grid = 29) {
    using C = std::complex<double>;
    const int n = grid * grid;
    std::vector<std::tuple<int, int, C>> trip;
    trip.reserve(static_cast<std::size_t>(5) * n);
    const C base(0.5, 0.8);
    const double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const int k = i * grid + j;
            const C shift = base * (1.0 + 0.25 * std::cos(two_pi * k / n));
            trip.emplace_back(k, k, C(4.0, 0.0) + shift);
            if (i > 0) trip.emplace_back(k, k - grid, C(-1.0, 0.0));
            if (i < grid - 1) trip.emplace_back(k, k + grid, C(-1.0, 0.0));
            if (j > 0) trip.emplace_back(k, k - 1, C(-1.0, 0.0));
            if (j < grid - 1) trip.emplace_back(k, k + 1, C(-1.0, 0.0));
        }
    }
    return SparseMatrix<C>::from_triplets(n, n, std::move(trip));
}

}  // namespace hyperinv
