#pragma once

#include <string>
#include <vector>

#include "hyperinv/decomp.hpp"
#include "hyperinv/matrix.hpp"

namespace hyperinv {

/// Every strategy yields (X0, alpha, G) with X0 = alpha * G.
template <class T>
struct InitResult {
    DenseMatrix<T> x0;
    T alpha{};
    DenseMatrix<T> g;

    double alpha_magnitude() const { return to_double(scalar_abs(alpha)); }
};

/// X0 = A* / (||A||_1 ||A||_inf).
template <class T>
InitResult<T> init_scaled_adjoint(const DenseMatrix<T>& a) {
    using R = real_t<T>;
    const R n1 = norm_one(a);
    const R ninf = norm_infinity(a);
    if (n1 == R(0) || ninf == R(0))
        throw degenerate_input_error("init_scaled_adjoint: zero matrix");
    InitResult<T> out;
    out.alpha = T(R(1) / (n1 * ninf));
    out.g = conj_transpose(a);
    out.x0 = out.alpha * out.g;
    return out;
}

/// Two readings of the Pan-Schreiber scaling alpha = 2/(sigma_1^2 + sigma_r^2).
/// With lambda_1 >= ... >= lambda_r the nonzero eigenvalues of G A:
///   eigenvalues_of_ga: sigma_i are those eigenvalues, alpha = 2/(l_1^2 + l_r^2)
///   singular_values:   sigma_i are singular values of A (for G = A*), i.e.
///                      alpha = 2/(l_1 + l_r)
enum class PanSchreiberConvention { eigenvalues_of_ga, singular_values };

template <class T>
InitResult<T> init_pan_schreiber(
    const DenseMatrix<T>& a, const DenseMatrix<T>* g_opt = nullptr,
    PanSchreiberConvention convention = PanSchreiberConvention::eigenvalues_of_ga) {
    using R = real_t<T>;
    const DenseMatrix<T> g = g_opt ? *g_opt : conj_transpose(a);
    if (g.rows() != a.cols() || g.cols() != a.rows())
        throw shape_error("init_pan_schreiber: G must be conformable with A*");
    const auto ga = matmul(g, a);
    {
        const R herm = norm_frobenius(ga - conj_transpose(ga));
        const R scale = norm_frobenius(ga);
        if (scale == R(0)) throw degenerate_input_error("init_pan_schreiber: GA is zero");
        if (herm > R(100) * scalar_traits<R>::epsilon() * R(ga.rows()) * scale)
            throw config_error(
                "init_pan_schreiber: GA is not Hermitian; supply alpha explicitly");
    }
    auto lam = hermitian_eigenvalues(ga);
    // eigenvalues below max-dim * eps * lambda_1 count as zero
    const R cutoff =
        R(std::max(a.rows(), a.cols())) * scalar_traits<R>::epsilon() * lam.front();
    R l1(0), lr(0);
    bool any = false;
    for (const auto& l : lam) {
        if (l > cutoff && l > R(0)) {
            if (!any) l1 = l;
            lr = l;
            any = true;
        }
    }
    if (!any) throw degenerate_input_error("init_pan_schreiber: GA has no nonzero spectrum");
    InitResult<T> out;
    const R alpha = convention == PanSchreiberConvention::eigenvalues_of_ga
                        ? R(2) / (l1 * l1 + lr * lr)
                        : R(2) / (l1 + lr);
    out.alpha = T(alpha);
    out.g = g;
    out.x0 = out.alpha * out.g;
    return out;
}

template <class T>
InitResult<T> init_pan_schreiber(const DenseMatrix<T>& a, PanSchreiberConvention convention) {
    return init_pan_schreiber(a, static_cast<const DenseMatrix<T>*>(nullptr), convention);
}

struct IndexResult {
    int index = 0;
    std::vector<int> rank_sequence;  // rank(A^0), rank(A^1), ..., rank(A^{index+1})
};

/// Smallest l with rank(A^{l+1}) = rank(A^l).
template <class T>
IndexResult matrix_index(const DenseMatrix<T>& a, real_t<T> tol = real_t<T>(-1)) {
    if (!a.is_square()) throw shape_error("matrix_index: matrix must be square");
    const int n = a.rows();
    // tol < 0: each rank call derives its own default from the power at hand,
    // since the scale of A^k drifts with k
    IndexResult out;
    out.rank_sequence.push_back(n);  // rank(A^0) = rank(I)
    DenseMatrix<T> power = a;
    int prev = n;
    for (int l = 0; l <= n; ++l) {
        const int rk = rank(power, tol);
        if (rk > prev)
            throw diagnostic_error("matrix_index: rank increased along powers "
                                   "(tolerance failure)");
        out.rank_sequence.push_back(rk);
        if (rk == prev) {
            out.index = l;
            return out;
        }
        prev = rk;
        power = matmul(power, a);
    }
    throw diagnostic_error("matrix_index: no stabilization up to l = n "
                           "(tolerance failure)");
}

template <class T>
struct DrazinInit {
    DenseMatrix<T> x0;
    T alpha{};
    DenseMatrix<T> g;
    int index = 0;
    std::vector<int> rank_sequence;

    double alpha_magnitude() const { return to_double(scalar_abs(alpha)); }
};

namespace detail {

template <class T>
DenseMatrix<mp_real> to_extended(const DenseMatrix<T>& a) {
    static_assert(!scalar_traits<T>::is_complex, "extended lift is real-only");
    DenseMatrix<mp_real> out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = mp_real(a(i, j));
    return out;
}

}  // namespace detail

/// X0 = A^l / tr(A^{l+1}) with l = ind(A).
template <class T>
DrazinInit<T> init_drazin(const DenseMatrix<T>& a) {
    using R = real_t<T>;
    if (!a.is_square()) throw shape_error("init_drazin: matrix must be square");
    const auto idx = matrix_index(a);
    const int l = idx.index;
    DenseMatrix<T> g = mat_pow(a, l);
    DenseMatrix<T> next = matmul(g, a);  // A^{l+1}
    T tr = trace(next);
    if constexpr (std::is_same_v<T, double>) {
        // powers of badly scaled matrices cancel; recompute the trace with
        // 50-digit arithmetic when it looks suspicious
        if (std::abs(tr) < 1e-12 * norm_frobenius(next)) {
            precision_guard guard(50);
            const auto ax = detail::to_extended(mat_pow(a, l + 1));
            tr = static_cast<double>(trace(ax));
        }
    }
    if (scalar_abs(tr) == R(0) ||
        scalar_abs(tr) < scalar_traits<R>::epsilon() * norm_frobenius(next))
        throw degenerate_input_error(
            "init_drazin: tr(A^{l+1}) vanishes at working precision; supply a custom G");
    DrazinInit<T> out;
    out.alpha = T(1) / tr;
    out.g = std::move(g);
    out.x0 = out.alpha * out.g;
    out.index = l;
    out.rank_sequence = idx.rank_sequence;
    return out;
}

/// X0 = diag(1/a_11, ..., 1/a_nn).
template <class T>
InitResult<T> init_diagonal(const DenseMatrix<T>& a) {
    using R = real_t<T>;
    if (!a.is_square()) throw shape_error("init_diagonal: matrix must be square");
    InitResult<T> out;
    out.x0 = DenseMatrix<T>(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i) {
        if (scalar_abs(a(i, i)) == R(0))
            throw degenerate_input_error("init_diagonal: diagonal entry " +
                                         std::to_string(i + 1) + " is zero");
        out.x0(i, i) = T(1) / a(i, i);
    }
    out.alpha = T(1);
    out.g = out.x0;
    return out;
}

/// X0 = alpha * G for a caller-supplied pair.
template <class T>
InitResult<T> init_explicit(const DenseMatrix<T>& g, const T& alpha) {
    InitResult<T> out;
    out.alpha = alpha;
    out.g = g;
    out.x0 = alpha * g;
    return out;
}

}  // namespace hyperinv
