#pragma once

#include <cmath>
#include <vector>

#include "hyperinv/sparse.hpp"

namespace hyperinv {

struct GmresConfig {
    int restart = 50;
    double tol = 1e-8;      // on the true relative residual ||b - Ax|| / ||b||
    int max_iters = 5000;
    bool record_true_residuals = false;  // per-iteration true residuals (extra work)
};

template <class T>
struct GmresReport {
    int iterations = 0;
    bool converged = false;
    bool stagnated = false;
    std::vector<double> residual_history;       // preconditioned, per inner iteration
    std::vector<double> true_residual_history;  // only if recorded (else restarts only)
    std::vector<T> x;
    double true_relative_residual = 0.0;
};

namespace detail {

template <class T>
real_t<T> vec_norm2(const std::vector<T>& v) {
    using R = real_t<T>;
    R s(0);
    for (const auto& e : v) {
        R m = scalar_abs(e);
        s += m * m;
    }
    return scalar_traits<R>::sqrt(s);
}

template <class T>
T vec_dot(const std::vector<T>& a, const std::vector<T>& b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += scalar_conj(a[i]) * b[i];
    return s;
}

}  // namespace detail

/// Restarted GMRES(m) with modified Gram-Schmidt orthogonalization and
/// Givens-rotation least squares. A left preconditioner M solves (MA)x = Mb;
/// the inner recurrence then monitors the preconditioned residual and the
/// true relative residual is checked whenever a candidate solution is formed.
template <class T>
GmresReport<T> gmres(const SparseMatrix<T>& a, const std::vector<T>& b,
                     const GmresConfig& cfg, const SparseMatrix<T>* precond = nullptr) {
    using R = real_t<T>;
    if (a.rows() != a.cols()) throw shape_error("gmres: matrix must be square");
    if (static_cast<int>(b.size()) != a.rows()) throw shape_error("gmres: rhs length mismatch");
    const int n = a.rows();
    const int m = cfg.restart;

    auto apply = [&](const std::vector<T>& v) {
        auto w = spmv(a, v);
        return precond ? spmv(*precond, w) : w;
    };

    GmresReport<T> report;
    report.x.assign(n, T(0));
    const std::vector<T> pb = precond ? spmv(*precond, b) : b;
    const double nb_true = to_double(detail::vec_norm2(b));
    const double nb_pre = to_double(detail::vec_norm2(pb));
    if (nb_true == 0.0) {  // zero rhs: zero solution
        report.converged = true;
        return report;
    }
    if (nb_pre == 0.0)
        throw degenerate_input_error("gmres: preconditioned rhs is zero");

    auto true_rel_residual = [&](const std::vector<T>& x) {
        auto ax = spmv(a, x);
        for (int i = 0; i < n; ++i) ax[i] = b[i] - ax[i];
        return to_double(detail::vec_norm2(ax)) / nb_true;
    };

    std::vector<std::vector<T>> V(m + 1, std::vector<T>(n));
    std::vector<std::vector<T>> H(m + 1, std::vector<T>(m, T(0)));
    std::vector<T> gs(m + 1), cs(m), sn(m);

    auto assemble = [&](int k, std::vector<T> g) {
        // back-substitute H(0..k-1,0..k-1) y = g and add V y to x; a zero
        // pivot (doubly degenerate breakdown) gets the minimal-norm choice
        std::vector<T> y(k);
        for (int i = k - 1; i >= 0; --i) {
            T s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = scalar_abs(H[i][i]) > R(0) ? s / H[i][i] : T(0);
        }
        std::vector<T> x = report.x;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n; ++i) x[i] += V[j][i] * y[j];
        return x;
    };

    double cycle_start_res = -1.0;
    while (report.iterations < cfg.max_iters) {
        // preconditioned residual for the current x
        auto r = apply(report.x);
        for (int i = 0; i < n; ++i) r[i] = pb[i] - r[i];
        const double beta = to_double(detail::vec_norm2(r));
        const double rel0 = beta / nb_pre;
        report.true_relative_residual = true_rel_residual(report.x);
        report.true_residual_history.push_back(report.true_relative_residual);
        if (report.true_relative_residual <= cfg.tol) {
            report.converged = true;
            return report;
        }
        if (cycle_start_res >= 0.0 &&
            (cycle_start_res - rel0) < 1e-14 * cycle_start_res) {
            report.stagnated = true;
            return report;
        }
        cycle_start_res = rel0;

        for (int i = 0; i < n; ++i) V[0][i] = r[i] / T(beta);
        for (auto& h : H) std::fill(h.begin(), h.end(), T(0));
        std::fill(gs.begin(), gs.end(), T(0));
        gs[0] = T(beta);

        int k = 0;
        bool breakdown = false;
        while (k < m && report.iterations < cfg.max_iters) {
            auto w = apply(V[k]);
            for (int i = 0; i <= k; ++i) {
                H[i][k] = detail::vec_dot(V[i], w);
                for (int j = 0; j < n; ++j) w[j] -= H[i][k] * V[i][j];
            }
            const R hk1 = detail::vec_norm2(w);
            H[k + 1][k] = T(hk1);
            if (to_double(hk1) > 0.0) {
                for (int j = 0; j < n; ++j) V[k + 1][j] = w[j] / T(hk1);
            } else {
                breakdown = true;  // lucky: Krylov space is invariant
            }
            // previously accumulated rotations
            for (int i = 0; i < k; ++i) {
                const T t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
                H[i + 1][k] =
                    -scalar_conj(sn[i]) * H[i][k] + scalar_conj(cs[i]) * H[i + 1][k];
                H[i][k] = t;
            }
            // new rotation zeroing H[k+1][k]
            {
                const R denom = scalar_traits<R>::sqrt(
                    scalar_abs(H[k][k]) * scalar_abs(H[k][k]) +
                    scalar_abs(H[k + 1][k]) * scalar_abs(H[k + 1][k]));
                if (denom == R(0)) {
                    cs[k] = T(1);
                    sn[k] = T(0);
                } else {
                    cs[k] = scalar_conj(H[k][k]) / T(denom);
                    sn[k] = scalar_conj(H[k + 1][k]) / T(denom);
                }
                H[k][k] = cs[k] * H[k][k] + sn[k] * H[k + 1][k];
                H[k + 1][k] = T(0);
                gs[k + 1] = -scalar_conj(sn[k]) * gs[k];
                gs[k] = cs[k] * gs[k];
            }
            ++report.iterations;
            ++k;
            const double pre_rel = to_double(scalar_abs(gs[k])) / nb_pre;
            report.residual_history.push_back(pre_rel);
            if (cfg.record_true_residuals) {
                auto xk = assemble(k, std::vector<T>(gs.begin(), gs.begin() + k));
                report.true_residual_history.push_back(true_rel_residual(xk));
            }
            if (breakdown || pre_rel <= cfg.tol) break;
        }
        report.x = assemble(k, std::vector<T>(gs.begin(), gs.begin() + k));
        report.true_relative_residual = true_rel_residual(report.x);
        if (report.true_relative_residual <= cfg.tol) {
            report.converged = true;
            report.true_residual_history.push_back(report.true_relative_residual);
            return report;
        }
        if (breakdown) {
            // invariant subspace reached; nothing further can improve
            report.true_residual_history.push_back(report.true_relative_residual);
            return report;
        }
    }
    report.true_relative_residual = true_rel_residual(report.x);
    return report;
}

}  // namespace hyperinv
