#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "hyperinv/errors.hpp"
#include "hyperinv/scalar.hpp"

namespace hyperinv {

enum class NormKind { one, infinity_norm, frobenius, spectral_estimate };

inline const char* to_string(NormKind k) {
    switch (k) {
        case NormKind::one: return "one";
        case NormKind::infinity_norm: return "infinity";
        case NormKind::frobenius: return "frobenius";
        case NormKind::spectral_estimate: return "spectral-estimate";
    }
    return "?";
}

/// Counts matrix-by-matrix products issued by one iteration driver.
/// Driver-local by construction: pass the instance you want to charge.
struct MatmulCounter {
    long long total = 0;
};

/// Dense row-major matrix over a scalar type T (double, std::complex<double>,
/// or mp_real). Values are immutable in all library operations: every
/// operation returns a fresh matrix.
template <class T>
class DenseMatrix {
  public:
    using value_type = T;
    using real_type = real_t<T>;

    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, T(0)) {
        if (rows <= 0 || cols <= 0) throw shape_error("matrix dimensions must be positive");
    }
    DenseMatrix(int rows, int cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows <= 0 || cols <= 0) throw shape_error("matrix dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(rows) * cols)
            throw shape_error("entry count does not match rows*cols");
    }
    DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        if (rows_ == 0 || cols_ == 0) throw shape_error("matrix dimensions must be positive");
        data_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_) throw shape_error("ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static DenseMatrix zero(int rows, int cols) { return DenseMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    std::vector<T>& entries() { return data_; }
    const std::vector<T>& entries() const { return data_; }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!scalar_finite(v)) return false;
        return true;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

namespace detail {

template <class T>
void check_same_shape(const DenseMatrix<T>& a, const DenseMatrix<T>& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw shape_error(std::string(op) + ": shape mismatch");
}

// With compile-time scalar types the only runtime configuration that can
// diverge is the mpfr working precision.
template <class T>
void check_same_config(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if constexpr (std::is_same_v<T, mp_real>) {
        if (!a.entries().empty() && !b.entries().empty() &&
            a.entries()[0].precision() != b.entries()[0].precision())
            throw config_error("operands carry different extended precisions");
    }
    (void)a;
    (void)b;
}

}  // namespace detail

template <class T>
DenseMatrix<T> operator+(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    detail::check_same_shape(a, b, "add");
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        c.entries()[i] = a.entries()[i] + b.entries()[i];
    return c;
}

template <class T>
DenseMatrix<T> operator-(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    detail::check_same_shape(a, b, "subtract");
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        c.entries()[i] = a.entries()[i] - b.entries()[i];
    return c;
}

template <class T>
DenseMatrix<T> operator-(const DenseMatrix<T>& a) {
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.entries().size(); ++i) c.entries()[i] = -a.entries()[i];
    return c;
}

template <class T, class S>
DenseMatrix<T> operator*(const S& s, const DenseMatrix<T>& a) {
    DenseMatrix<T> c(a.rows(), a.cols());
    const T factor(s);
    for (std::size_t i = 0; i < a.entries().size(); ++i) c.entries()[i] = factor * a.entries()[i];
    return c;
}

/// Exact mathematical product at working precision. Reduction over k runs in
/// ascending order for every output entry, so results are bit-reproducible.
template <class T>
DenseMatrix<T> matmul(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                      MatmulCounter* counter = nullptr) {
    if (a.cols() != b.rows()) throw shape_error("matmul: inner dimensions differ");
    detail::check_same_config(a, b);
    DenseMatrix<T> c(a.rows(), b.cols());
    const int m = a.rows(), k = a.cols(), n = b.cols();
    for (int i = 0; i < m; ++i) {
        T* ci = &c(i, 0);
        for (int p = 0; p < k; ++p) {
            const T aip = a(i, p);
            const T* bp = &b(p, 0);
            for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
    if (counter) ++counter->total;
    return c;
}

template <class T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    return matmul(a, b);
}

template <class T>
DenseMatrix<T> conj_transpose(const DenseMatrix<T>& a) {
    DenseMatrix<T> c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(j, i) = scalar_conj(a(i, j));
    return c;
}

template <class T>
T trace(const DenseMatrix<T>& a) {
    if (!a.is_square()) throw shape_error("trace: matrix must be square");
    T s(0);
    for (int i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

template <class T>
DenseMatrix<T> mat_pow(const DenseMatrix<T>& a, int k) {
    if (!a.is_square()) throw shape_error("mat_pow: matrix must be square");
    if (k < 0) throw shape_error("mat_pow: exponent must be nonnegative");
    DenseMatrix<T> r = DenseMatrix<T>::identity(a.rows());
    for (int i = 0; i < k; ++i) r = matmul(r, a);
    return r;
}

/// H(i,j) = 1/(i+j-1), 1-based.
template <class T>
DenseMatrix<T> hilbert(int m, int n) {
    DenseMatrix<T> h(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = T(1) / T(i + j + 1);
    return h;
}

template <class T>
real_t<T> norm_one(const DenseMatrix<T>& a) {
    real_t<T> best(0);
    for (int j = 0; j < a.cols(); ++j) {
        real_t<T> s(0);
        for (int i = 0; i < a.rows(); ++i) s += scalar_abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

template <class T>
real_t<T> norm_infinity(const DenseMatrix<T>& a) {
    real_t<T> best(0);
    for (int i = 0; i < a.rows(); ++i) {
        real_t<T> s(0);
        for (int j = 0; j < a.cols(); ++j) s += scalar_abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

template <class T>
real_t<T> norm_frobenius(const DenseMatrix<T>& a) {
    using R = real_t<T>;
    R s(0);
    for (const auto& v : a.entries()) {
        R m = scalar_abs(v);
        s += m * m;
    }
    return scalar_traits<R>::sqrt(s);
}

/// Power iteration on A*A; returns an upper-biased estimate of the 2-norm,
/// accurate to the relative tolerance. Throws diagnostic_error if the sweep
/// budget is exhausted before the Rayleigh quotient settles.
template <class T>
real_t<T> spectral_estimate(const DenseMatrix<T>& a, double rel_tol = 1e-8,
                            int max_sweeps = 500) {
    using R = real_t<T>;
    if (norm_frobenius(a) == R(0))
        throw degenerate_input_error("spectral-estimate: zero matrix");
    const int m = a.rows(), n = a.cols();
    std::vector<T> v(n), u(m), w(n);
    {
        R v2(0);
        for (int j = 0; j < n; ++j) {
            v[j] = T(R(1) + R(j) / R(2 * n));
            R mag = scalar_abs(v[j]);
            v2 += mag * mag;
        }
        const R vn = scalar_traits<R>::sqrt(v2);
        for (int j = 0; j < n; ++j) v[j] = v[j] / T(vn);
    }
    R lam(0), lam_prev(-1);
    const R tol = R(rel_tol);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        // u = A v
        for (int i = 0; i < m; ++i) {
            T s(0);
            for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
            u[i] = s;
        }
        // w = A* u, lam = ||u||^2 / ||v||^2 with v kept unit
        R unorm2(0);
        for (int i = 0; i < m; ++i) {
            R mag = scalar_abs(u[i]);
            unorm2 += mag * mag;
        }
        for (int j = 0; j < n; ++j) {
            T s(0);
            for (int i = 0; i < m; ++i) s += scalar_conj(a(i, j)) * u[i];
            w[j] = s;
        }
        lam = unorm2;
        R wnorm(0);
        for (int j = 0; j < n; ++j) {
            R mag = scalar_abs(w[j]);
            wnorm += mag * mag;
        }
        wnorm = scalar_traits<R>::sqrt(wnorm);
        if (wnorm == R(0)) break;  // v in the null space of A*A: lam is exact (0)
        for (int j = 0; j < n; ++j) v[j] = w[j] / T(wnorm);
        if (lam_prev >= R(0) && scalar_abs(lam - lam_prev) <= tol * lam)
            return scalar_traits<R>::sqrt(lam) * (R(1) + tol);
        lam_prev = lam;
    }
    if (lam_prev >= R(0) && scalar_abs(lam - lam_prev) <= tol * lam)
        return scalar_traits<R>::sqrt(lam) * (R(1) + tol);
    throw diagnostic_error("spectral-estimate: power iteration did not settle",
                           to_double(scalar_traits<R>::sqrt(lam)));
}

template <class T>
real_t<T> norm(const DenseMatrix<T>& a, NormKind kind) {
    switch (kind) {
        case NormKind::one: return norm_one(a);
        case NormKind::infinity_norm: return norm_infinity(a);
        case NormKind::frobenius: return norm_frobenius(a);
        case NormKind::spectral_estimate: {
            // the zero matrix has an exact 2-norm; the power iteration needs a
            // nonzero input
            if (norm_frobenius(a) == real_t<T>(0)) return real_t<T>(0);
            return spectral_estimate(a);
        }
    }
    throw config_error("unknown norm kind");
}

}  // namespace hyperinv
